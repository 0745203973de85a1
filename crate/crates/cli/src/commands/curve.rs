use std::path::PathBuf;

use bilex::embedding::{Mode, TrainConfig, DEFAULT_MIN_LR_FRACTION};
use bilex::evaluation::{
    data_size_curve, split_dictionary, MapSolver, DEFAULT_N_TEST, DEFAULT_N_TRAIN,
};
use bilex::io::{read_lexicon, read_token_stream, write_curve_tsv};
use bilex::mapping::{DEFAULT_MAP_DECAY, DEFAULT_MAP_EPOCHS, DEFAULT_MAP_LR};
use bilex::Result;
use clap::Args;

use super::map::Method;
use crate::config::{resolve, resolve_opt, resolve_required, Config};

#[derive(Args)]
pub struct CurveArgs {
    /// Source-language token stream
    #[arg(long, value_name = "FILE")]
    src_input: Option<PathBuf>,
    /// Target-language token stream
    #[arg(long, value_name = "FILE")]
    tgt_input: Option<PathBuf>,
    /// Seed dictionary, source TAB target per line
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Curve table destination (TSV)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Ascending corpus fractions to retrain on, e.g. 0.25,0.5,1.0; required
    #[arg(long, value_name = "LIST")]
    fractions: Option<String>,
    /// Architecture: cbow or skipgram (default: cbow)
    #[arg(long, value_name = "MODE")]
    mode: Option<Mode>,
    /// Vector dimensionality (default: 100)
    #[arg(long, value_name = "D")]
    dim: Option<usize>,
    /// Maximum window radius (default: 10)
    #[arg(long, value_name = "K")]
    window: Option<usize>,
    /// Embedding training epochs (default: 5)
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,
    /// Initial learning rate (default: 0.05 for cbow, 0.025 for skipgram)
    #[arg(long, value_name = "LR")]
    lr: Option<f64>,
    /// Discard words seen fewer than this many times (default: 5)
    #[arg(long, value_name = "N")]
    min_count: Option<u64>,
    /// Seed for the source-side embeddings; required
    #[arg(long, value_name = "SEED")]
    src_seed: Option<u64>,
    /// Seed for the target-side embeddings; required
    #[arg(long, value_name = "SEED")]
    tgt_seed: Option<u64>,
    /// Matrix fitting method: sgd or closed (default: sgd)
    #[arg(long, value_name = "METHOD")]
    method: Option<Method>,
    /// Matrix SGD passes (default: 50)
    #[arg(long, value_name = "N")]
    map_epochs: Option<usize>,
    /// Matrix SGD learning rate (default: 0.001)
    #[arg(long, value_name = "LR")]
    map_lr: Option<f64>,
    /// Matrix SGD per-epoch decay (default: 0.99)
    #[arg(long, value_name = "FACTOR")]
    map_decay: Option<f64>,
    /// Seed for the matrix SGD shuffle; required with --method sgd
    #[arg(long, value_name = "SEED")]
    map_seed: Option<u64>,
    /// Ridge regularizer for --method closed (default: 0)
    #[arg(long, value_name = "R")]
    ridge: Option<f64>,
    /// Dictionary entries used for fitting the matrix (default: 5000)
    #[arg(long, value_name = "N")]
    n_train: Option<usize>,
    /// Dictionary entries scored as the test split (default: 1000)
    #[arg(long, value_name = "N")]
    n_test: Option<usize>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn curve(args: CurveArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let src_input: PathBuf = resolve_required(args.src_input, &cfg, "src-input")?;
    let tgt_input: PathBuf = resolve_required(args.tgt_input, &cfg, "tgt-input")?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let out: PathBuf = resolve_required(args.out, &cfg, "out")?;
    let spec: String = resolve_required(args.fractions, &cfg, "fractions")?;
    let fractions = crate::commands::parse_f64_list(&spec, "fractions")?;
    let mode = resolve(args.mode, &cfg, "mode", Mode::Cbow)?;
    let dim = resolve(args.dim, &cfg, "dim", 100)?;
    let window = resolve_opt(args.window, &cfg, "window")?;
    let epochs = resolve_opt(args.epochs, &cfg, "epochs")?;
    let lr = resolve_opt(args.lr, &cfg, "lr")?;
    let min_count = resolve(args.min_count, &cfg, "min-count", 5)?;
    let src_seed = resolve_required(args.src_seed, &cfg, "src-seed")?;
    let tgt_seed = resolve_required(args.tgt_seed, &cfg, "tgt-seed")?;
    let method = resolve(args.method, &cfg, "method", Method::Sgd)?;
    let n_train = resolve(args.n_train, &cfg, "n-train", DEFAULT_N_TRAIN)?;
    let n_test = resolve(args.n_test, &cfg, "n-test", DEFAULT_N_TEST)?;

    let train_config = |seed: u64| {
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
        tc
    };
    let src_config = train_config(src_seed);
    let tgt_config = train_config(tgt_seed);
    let solver = match method {
        Method::Sgd => MapSolver::Sgd {
            epochs: resolve(args.map_epochs, &cfg, "map-epochs", DEFAULT_MAP_EPOCHS)?,
            lr: resolve(args.map_lr, &cfg, "map-lr", DEFAULT_MAP_LR)?,
            decay: resolve(args.map_decay, &cfg, "map-decay", DEFAULT_MAP_DECAY)?,
            seed: resolve_required(args.map_seed, &cfg, "map-seed")?,
        },
        Method::Closed => MapSolver::ClosedForm {
            ridge: resolve(args.ridge, &cfg, "ridge", 0.0)?,
        },
    };

    let src_stream = read_token_stream(&src_input)?;
    let tgt_stream = read_token_stream(&tgt_input)?;
    let lexicon = split_dictionary(read_lexicon(&lexicon_path)?, n_train, n_test)?;
    println!(
        "params: fractions={spec} mode={mode} dim={dim} window={} epochs={} lr={} \
         min_count={min_count} src_seed={src_seed} tgt_seed={tgt_seed} method={method} \
         n_train={n_train} n_test={n_test}",
        src_config.window, src_config.epochs, src_config.initial_lr
    );
    let rows = data_size_curve(
        &src_stream,
        &tgt_stream,
        &fractions,
        &lexicon,
        &src_config,
        &tgt_config,
        min_count,
        &solver,
    )?;
    write_curve_tsv(&out, &rows)?;
    for row in &rows {
        println!(
            "source_tokens={} target_tokens={} coverage={} p1={} p5={}",
            row.source_tokens, row.target_tokens, row.coverage, row.p1, row.p5
        );
    }
    Ok(())
}
