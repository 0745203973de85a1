use std::io::BufRead;
use std::path::PathBuf;

use bilex::corpus::{
    self, NormalizeOptions, OnInvalid, SpecialChars, DEFAULT_PHRASE_DELTA,
    DEFAULT_PHRASE_THRESHOLD,
};
use bilex::io::{read_token_stream, write_phrase_table, write_token_stream, write_vocab};
use bilex::{Error, Result};
use clap::Args;

use crate::config::{resolve, resolve_flag, resolve_opt, resolve_required, Config};

/// CLI spelling of the invalid-UTF-8 policy.
#[derive(Debug, Clone, Copy)]
pub enum InvalidLine {
    Skip,
    Abort,
}

impl std::str::FromStr for InvalidLine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip" => Ok(InvalidLine::Skip),
            "abort" => Ok(InvalidLine::Abort),
            other => Err(Error::InvalidConfig(format!(
                "unknown policy {other:?}; expected skip or abort"
            ))),
        }
    }
}

impl From<InvalidLine> for OnInvalid {
    fn from(v: InvalidLine) -> OnInvalid {
        match v {
            InvalidLine::Skip => OnInvalid::Skip,
            InvalidLine::Abort => OnInvalid::Abort,
        }
    }
}

#[derive(Args)]
pub struct PreprocessArgs {
    /// Raw text, one sentence per line
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Normalized token stream destination
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Characters that split tokens and are dropped (default: built-in set)
    #[arg(long, value_name = "CHARS")]
    special_chars: Option<String>,
    /// Policy for lines that are not valid UTF-8: skip or abort (default: abort)
    #[arg(long, value_name = "POLICY")]
    on_invalid: Option<InvalidLine>,
    /// Keep repeated sentences instead of dropping exact duplicates
    #[arg(long)]
    keep_duplicates: bool,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn preprocess(args: PreprocessArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let input: PathBuf = resolve_required(args.input, &cfg, "input")?;
    let output: PathBuf = resolve_required(args.output, &cfg, "output")?;
    let special = resolve_opt(args.special_chars, &cfg, "special-chars")?;
    let on_invalid = resolve(args.on_invalid, &cfg, "on-invalid", InvalidLine::Abort)?;
    let keep_duplicates = resolve_flag(args.keep_duplicates, &cfg, "keep-duplicates")?;

    let file = std::fs::File::open(&input).map_err(|e| Error::io(&input, e))?;
    let mut lines: Vec<Vec<u8>> = Vec::new();
    for chunk in std::io::BufReader::new(file).split(b'\n') {
        lines.push(chunk.map_err(|e| Error::io(&input, e))?);
    }
    let options = NormalizeOptions {
        special_chars: special
            .map_or_else(SpecialChars::default, |s| SpecialChars::new(s.chars())),
        on_invalid: on_invalid.into(),
    };
    let stream = corpus::normalize(&lines, &options)?;
    let before = stream.sentences.len();
    let stream = if keep_duplicates {
        stream
    } else {
        corpus::dedupe(stream)
    };
    write_token_stream(&output, &stream)?;
    println!(
        "sentences={} tokens={} duplicates_dropped={}",
        stream.sentences.len(),
        stream.token_count(),
        before - stream.sentences.len()
    );
    Ok(())
}

#[derive(Args)]
pub struct VocabArgs {
    /// Normalized token stream
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Vocabulary destination, word TAB count in rank order
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Discard words seen fewer than this many times (default: 5)
    #[arg(long, value_name = "N")]
    min_count: Option<u64>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn vocab(args: VocabArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let input: PathBuf = resolve_required(args.input, &cfg, "input")?;
    let output: PathBuf = resolve_required(args.output, &cfg, "output")?;
    let min_count = resolve(args.min_count, &cfg, "min-count", 5)?;

    let stream = read_token_stream(&input)?;
    let vocab = corpus::build_vocab(&stream, min_count)?;
    write_vocab(&output, &vocab)?;
    println!("words={} total_tokens={}", vocab.len(), vocab.total_tokens());
    Ok(())
}

#[derive(Args)]
pub struct PhrasesArgs {
    /// Normalized token stream
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Phrase table destination
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Write the stream with detected phrases merged to this file
    #[arg(long, value_name = "FILE")]
    apply: Option<PathBuf>,
    /// Merge passes over the stream when applying (default: 1)
    #[arg(long, value_name = "N")]
    passes: Option<usize>,
    /// Count discount protecting rare pairs (default: 5)
    #[arg(long, value_name = "N")]
    delta: Option<u64>,
    /// Minimum score for a pair to become a phrase (default: 100)
    #[arg(long, value_name = "SCORE")]
    threshold: Option<f64>,
    /// Discard words seen fewer than this many times (default: 5)
    #[arg(long, value_name = "N")]
    min_count: Option<u64>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn phrases(args: PhrasesArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let input: PathBuf = resolve_required(args.input, &cfg, "input")?;
    let output: PathBuf = resolve_required(args.output, &cfg, "output")?;
    let apply = resolve_opt(args.apply, &cfg, "apply")?;
    let passes = resolve(args.passes, &cfg, "passes", 1)?;
    let delta = resolve(args.delta, &cfg, "delta", DEFAULT_PHRASE_DELTA)?;
    let threshold = resolve(args.threshold, &cfg, "threshold", DEFAULT_PHRASE_THRESHOLD)?;
    let min_count = resolve(args.min_count, &cfg, "min-count", 5)?;

    let stream = read_token_stream(&input)?;
    let vocab = corpus::build_vocab(&stream, min_count)?;
    let table = corpus::detect_phrases(&stream, &vocab, delta, threshold);
    write_phrase_table(&output, &table)?;
    let mut merged_sentences = None;
    if let Some(path) = apply {
        let merged = corpus::apply_phrases(stream, &table, passes);
        write_token_stream(&path, &merged)?;
        merged_sentences = Some(merged.sentences.len());
    }
    match merged_sentences {
        Some(n) => println!("phrases={} merged_sentences={}", table.len(), n),
        None => println!("phrases={}", table.len()),
    }
    Ok(())
}
