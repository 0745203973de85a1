use std::fmt;
use std::path::PathBuf;

use bilex::io::{read_lexicon, write_matrix};
use bilex::mapping::{
    assemble_pairs, learn_closed_form, learn_sgd, DEFAULT_MAP_DECAY, DEFAULT_MAP_EPOCHS,
    DEFAULT_MAP_LR,
};
use bilex::{Error, Result};
use clap::Args;

use crate::config::{resolve, resolve_opt, resolve_required, Config};

/// How to fit the matrix: per-pair gradient steps or the least-squares
/// solution in one shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Sgd,
    Closed,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(Method::Sgd),
            "closed" => Ok(Method::Closed),
            other => Err(Error::InvalidConfig(format!(
                "unknown method {other:?}; expected sgd or closed"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Method::Sgd => "sgd",
            Method::Closed => "closed",
        })
    }
}

#[derive(Args)]
pub struct LearnMapArgs {
    /// Seed dictionary, source TAB target per line
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Source-language vectors
    #[arg(long, value_name = "FILE")]
    src: Option<PathBuf>,
    /// Target-language vectors
    #[arg(long, value_name = "FILE")]
    tgt: Option<PathBuf>,
    /// Matrix destination
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Fitting method: sgd or closed (default: sgd)
    #[arg(long, value_name = "METHOD")]
    method: Option<Method>,
    /// Fit on only the first N dictionary entries (default: all)
    #[arg(long, value_name = "N")]
    n_train: Option<usize>,
    /// SGD passes over the pairs (default: 50)
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,
    /// SGD learning rate (default: 0.001)
    #[arg(long, value_name = "LR")]
    lr: Option<f64>,
    /// SGD per-epoch learning-rate decay (default: 0.99)
    #[arg(long, value_name = "FACTOR")]
    decay: Option<f64>,
    /// Seed for the SGD pair shuffle; required with --method sgd
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Ridge regularizer for --method closed (default: 0)
    #[arg(long, value_name = "R")]
    ridge: Option<f64>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn learn_map(args: LearnMapArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let src: PathBuf = resolve_required(args.src, &cfg, "src")?;
    let tgt: PathBuf = resolve_required(args.tgt, &cfg, "tgt")?;
    let output: PathBuf = resolve_required(args.output, &cfg, "output")?;
    let method = resolve(args.method, &cfg, "method", Method::Sgd)?;
    let n_train = resolve_opt(args.n_train, &cfg, "n-train")?;

    let lexicon = read_lexicon(&lexicon_path)?;
    let n = n_train.unwrap_or(lexicon.entries.len());
    if n > lexicon.entries.len() {
        return Err(Error::DictionaryTooSmall {
            required: n,
            available: lexicon.entries.len(),
        });
    }
    let entries: Vec<(&str, &str)> = lexicon.entries[..n]
        .iter()
        .map(|e| (e.source.as_str(), e.target.as_str()))
        .collect();
    let (src_model, src_vocab) = crate::commands::load_vectors(&src)?;
    let (tgt_model, tgt_vocab) = crate::commands::load_vectors(&tgt)?;
    let pairs = assemble_pairs(entries, &src_model, &src_vocab, &tgt_model, &tgt_vocab)?;

    match method {
        Method::Sgd => {
            let epochs = resolve(args.epochs, &cfg, "epochs", DEFAULT_MAP_EPOCHS)?;
            let lr = resolve(args.lr, &cfg, "lr", DEFAULT_MAP_LR)?;
            let decay = resolve(args.decay, &cfg, "decay", DEFAULT_MAP_DECAY)?;
            let seed = resolve_required(args.seed, &cfg, "seed")?;
            let fit = learn_sgd(&pairs, epochs, lr, decay, seed)?;
            write_matrix(&output, &fit.matrix)?;
            println!(
                "params: method=sgd entries={n} epochs={epochs} lr={lr} decay={decay} seed={seed}"
            );
            println!(
                "pairs={} skipped={} final_mse={}",
                pairs.len(),
                pairs.skipped,
                fit.final_mse()
            );
        }
        Method::Closed => {
            let ridge = resolve(args.ridge, &cfg, "ridge", 0.0)?;
            let matrix = learn_closed_form(&pairs, ridge)?;
            write_matrix(&output, &matrix)?;
            println!("params: method=closed entries={n} ridge={ridge}");
            println!("pairs={} skipped={}", pairs.len(), pairs.skipped);
        }
    }
    Ok(())
}
