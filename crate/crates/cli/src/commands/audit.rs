use std::path::PathBuf;

use bilex::evaluation::{detect_dictionary_errors, pca_project};
use bilex::io::{read_lexicon, write_audit_tsv, write_pca_tsv};
use bilex::{Error, Result};
use clap::Args;

use super::eval::EvalInputs;
use crate::config::{resolve_opt, resolve_required, Config};

#[derive(Args)]
pub struct AuditArgs {
    /// Dictionary to audit, source TAB target per line; every entry is scored
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Fitted translation matrix
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Source-language vectors
    #[arg(long, value_name = "FILE")]
    src: Option<PathBuf>,
    /// Target-language vectors
    #[arg(long, value_name = "FILE")]
    tgt: Option<PathBuf>,
    /// Audit table destination (TSV, most suspicious entries first)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Refit the matrix without each entry before scoring it, closed form
    /// with this ridge
    #[arg(long, value_name = "R")]
    loo_ridge: Option<f64>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn audit(args: AuditArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let matrix: PathBuf = resolve_required(args.matrix, &cfg, "matrix")?;
    let src: PathBuf = resolve_required(args.src, &cfg, "src")?;
    let tgt: PathBuf = resolve_required(args.tgt, &cfg, "tgt")?;
    let out: PathBuf = resolve_required(args.out, &cfg, "out")?;
    let loo_ridge = resolve_opt(args.loo_ridge, &cfg, "loo-ridge")?;

    let lexicon = read_lexicon(&lexicon_path)?;
    let inputs = EvalInputs::load(&matrix, &src, &tgt)?;
    let translator = inputs.translator()?;
    let report = detect_dictionary_errors(&lexicon, &translator, loo_ridge)?;
    write_audit_tsv(&out, &report)?;
    println!("scored={} skipped={}", report.rows.len(), report.skipped);
    Ok(())
}

#[derive(Args)]
pub struct PcaArgs {
    /// Vectors to project
    #[arg(long, value_name = "FILE")]
    vectors: Option<PathBuf>,
    /// Comma-separated words to project
    #[arg(long, value_name = "LIST")]
    words: Option<String>,
    /// File of words to project, one per line
    #[arg(long, value_name = "FILE")]
    words_file: Option<PathBuf>,
    /// Projection destination (TSV: word, x, y)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn pca(args: PcaArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let vectors: PathBuf = resolve_required(args.vectors, &cfg, "vectors")?;
    let words = resolve_opt(args.words, &cfg, "words")?;
    let words_file = resolve_opt(args.words_file, &cfg, "words-file")?;
    let out: PathBuf = resolve_required(args.out, &cfg, "out")?;

    let selected: Vec<String> = match (words, words_file) {
        (Some(list), None) => list
            .split(',')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            text.lines()
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(str::to_string)
                .collect()
        }
        (Some(_), Some(_)) => {
            return Err(Error::InvalidConfig(
                "--words and --words-file are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(Error::InvalidConfig(
                "one of --words or --words-file is required".into(),
            ))
        }
    };
    let (model, vocab) = crate::commands::load_vectors(&vectors)?;
    let refs: Vec<&str> = selected.iter().map(String::as_str).collect();
    let coords = pca_project(&refs, &model, &vocab)?;
    write_pca_tsv(&out, &coords)?;
    println!("projected={}", coords.len());
    Ok(())
}
