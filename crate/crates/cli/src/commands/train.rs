use std::path::PathBuf;

use bilex::corpus::build_vocab;
use bilex::embedding::{
    build_huffman, train_from, EmbeddingModel, Mode, TrainConfig, DEFAULT_MIN_LR_FRACTION,
};
use bilex::io::{read_checkpoint, read_token_stream, write_checkpoint, write_vocab};
use bilex::{Error, Result};
use clap::Args;

use crate::config::{resolve, resolve_opt, resolve_required, Config};

#[derive(Args)]
pub struct TrainArgs {
    /// Normalized token stream to train on
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Vectors destination; a .bin extension selects the binary format
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Architecture: cbow or skipgram (default: cbow)
    #[arg(long, value_name = "MODE")]
    mode: Option<Mode>,
    /// Vector dimensionality (default: 100)
    #[arg(long, value_name = "D")]
    dim: Option<usize>,
    /// Maximum window radius; each position draws its radius from 1..=k (default: 10)
    #[arg(long, value_name = "K")]
    window: Option<usize>,
    /// Passes over the corpus (default: 5)
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,
    /// Initial learning rate (default: 0.05 for cbow, 0.025 for skipgram)
    #[arg(long, value_name = "LR")]
    lr: Option<f64>,
    /// Floor of the linear learning-rate decay (default: lr / 10000)
    #[arg(long, value_name = "LR")]
    min_lr: Option<f64>,
    /// Discard words seen fewer than this many times (default: 5)
    #[arg(long, value_name = "N")]
    min_count: Option<u64>,
    /// Seed for initialization, window draws, and worker streams; required
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Training threads; more than one trades bit-reproducibility for speed (default: 1)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Also write the vocabulary here
    #[arg(long, value_name = "FILE")]
    save_vocab: Option<PathBuf>,
    /// Also write a resumable checkpoint here
    #[arg(long, value_name = "FILE")]
    save_checkpoint: Option<PathBuf>,
    /// Resume from this checkpoint instead of initializing fresh
    #[arg(long, value_name = "FILE")]
    from_checkpoint: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn train(args: TrainArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let input: PathBuf = resolve_required(args.input, &cfg, "input")?;
    let output: PathBuf = resolve_required(args.output, &cfg, "output")?;
    let seed = resolve_required(args.seed, &cfg, "seed")?;
    let mode = resolve_opt(args.mode, &cfg, "mode")?;
    let dim = resolve_opt(args.dim, &cfg, "dim")?;
    let window = resolve_opt(args.window, &cfg, "window")?;
    let epochs = resolve_opt(args.epochs, &cfg, "epochs")?;
    let lr = resolve_opt(args.lr, &cfg, "lr")?;
    let min_lr = resolve_opt(args.min_lr, &cfg, "min-lr")?;
    let min_count = resolve(args.min_count, &cfg, "min-count", 5)?;
    let workers = resolve_opt(args.workers, &cfg, "workers")?;
    let save_vocab = resolve_opt(args.save_vocab, &cfg, "save-vocab")?;
    let save_checkpoint = resolve_opt(args.save_checkpoint, &cfg, "save-checkpoint")?;
    let from_checkpoint = resolve_opt(args.from_checkpoint, &cfg, "from-checkpoint")?;

    let build_config = |mode: Mode, dim: usize| {
        let mut tc = TrainConfig::new(mode, seed);
        tc.dim = dim;
        if let Some(w) = window {
            tc.window = w;
        }
        if let Some(e) = epochs {
            tc.epochs = e;
        }
        if let Some(lr) = lr {
            tc.initial_lr = lr;
            tc.min_lr = DEFAULT_MIN_LR_FRACTION * lr;
        }
        if let Some(m) = min_lr {
            tc.min_lr = m;
        }
        if let Some(w) = workers {
            tc.workers = w;
        }
        tc
    };

    let stream = read_token_stream(&input)?;
    let (tc, model, vocab, tree) = match from_checkpoint {
        Some(checkpoint) => {
            let (model, vocab, tree) = read_checkpoint(&checkpoint)?;
            if mode.is_some_and(|m| m != model.mode()) {
                return Err(Error::InvalidConfig(format!(
                    "checkpoint was trained as {}, which contradicts --mode",
                    model.mode()
                )));
            }
            if dim.is_some_and(|d| d != model.dim()) {
                return Err(Error::InvalidConfig(format!(
                    "checkpoint has dimension {}, which contradicts --dim",
                    model.dim()
                )));
            }
            let tc = build_config(model.mode(), model.dim());
            let model = train_from(model, &tree, &stream, &vocab, &tc)?;
            (tc, model, vocab, tree)
        }
        None => {
            let vocab = build_vocab(&stream, min_count)?;
            let tree = build_huffman(&vocab)?;
            let tc = build_config(mode.unwrap_or(Mode::Cbow), dim.unwrap_or(100));
            let model = EmbeddingModel::init(
                vocab.len(),
                tree.node_count(),
                tc.dim,
                tc.mode,
                tc.seed,
            );
            let model = train_from(model, &tree, &stream, &vocab, &tc)?;
            (tc, model, vocab, tree)
        }
    };

    crate::commands::save_vectors(&output, &model, &vocab)?;
    if let Some(path) = save_vocab {
        write_vocab(&path, &vocab)?;
    }
    if let Some(path) = save_checkpoint {
        write_checkpoint(&path, &model, &vocab, &tree)?;
    }
    println!(
        "params: mode={} dim={} window={} epochs={} lr={} min_lr={} min_count={} seed={} workers={}",
        tc.mode, tc.dim, tc.window, tc.epochs, tc.initial_lr, tc.min_lr, min_count, tc.seed,
        tc.workers
    );
    println!(
        "words={} total_tokens={} sentences={}",
        vocab.len(),
        vocab.total_tokens(),
        stream.sentences.len()
    );
    Ok(())
}
