//! Command-line driver wiring the whole pipeline: corpus cleanup, embedding
//! training, translation-matrix fitting, retrieval, baselines, evaluation.
//!
//! Every command reads and writes only the documented file formats, all
//! randomness flows from explicit seed flags, and errors come out as a
//! single machine-parseable `error: ...` line with a distinct exit code.

use clap::{Parser, Subcommand};

mod commands;
mod config;

use bilex::Error;

const EXIT_CODES: &str = "Exit codes:
  0  success
  2  usage or configuration error (also: bad flags, bad config values)
  3  filesystem error (missing or unreadable file)
  4  file format violation (malformed input, invalid UTF-8 under abort)
  5  computation failed on valid inputs (degenerate data, divergence)
  6  word or id lookup failed

Vector files ending in .bin are read and written in the binary format;
any other extension selects the text format.";

#[derive(Parser)]
#[command(
    name = "bilex",
    version,
    about = "Bilingual lexicon induction from monolingual corpora and a seed dictionary",
    after_help = EXIT_CODES
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean raw text into a normalized token stream
    Preprocess(commands::prep::PreprocessArgs),
    /// Count tokens and write the frequency-ranked vocabulary
    Vocab(commands::prep::VocabArgs),
    /// Score adjacent word pairs and optionally merge them into phrases
    Phrases(commands::prep::PhrasesArgs),
    /// Train monolingual word embeddings
    Train(commands::train::TrainArgs),
    /// Fit the linear translation matrix from a seed dictionary
    LearnMap(commands::map::LearnMapArgs),
    /// Translate words through a fitted matrix, TSV on stdout
    ///
    /// Output columns: source, rank, candidate, cosine, combined
    /// (empty unless --lambda), confidence.
    Translate(commands::translate::TranslateArgs),
    /// Score a dictionary test split: coverage and precision at 1 and 5
    Evaluate(commands::eval::EvaluateArgs),
    /// Evaluate under a sweep of confidence thresholds
    Sweep(commands::eval::SweepArgs),
    /// Evaluate per source-frequency band
    Bands(commands::eval::BandsArgs),
    /// Retrain on corpus prefixes and report precision versus data size
    Curve(commands::curve::CurveArgs),
    /// Rank dictionary entries by how much the fitted map disagrees
    Audit(commands::audit::AuditArgs),
    /// Edit-distance retrieval baseline
    BaselineEd(commands::baseline::BaselineEdArgs),
    /// Mapped co-occurrence-count retrieval baseline
    BaselineCooc(commands::baseline::BaselineCoocArgs),
    /// Project selected word vectors onto their two principal components
    Pca(commands::audit::PcaArgs),
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = commands::run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) => 2,
        Error::Io { .. } => 3,
        Error::Format { .. } | Error::InvalidUtf8 { .. } => 4,
        Error::WordNotFound(_) | Error::IdOutOfRange { .. } => 6,
        _ => 5,
    }
}
