pub mod audit;
pub mod baseline;
pub mod curve;
pub mod eval;
pub mod map;
pub mod prep;
pub mod train;
pub mod translate;

use std::collections::BTreeMap;
use std::path::Path;

use bilex::corpus::Vocabulary;
use bilex::embedding::EmbeddingModel;
use bilex::evaluation::{precision_at_k, EvalReport, Retrieval};
use bilex::io::{
    read_vectors_binary, read_vectors_text, write_report, write_vectors_binary,
    write_vectors_text,
};
use bilex::{Error, Result};

use crate::Command;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Preprocess(args) => prep::preprocess(args),
        Command::Vocab(args) => prep::vocab(args),
        Command::Phrases(args) => prep::phrases(args),
        Command::Train(args) => train::train(args),
        Command::LearnMap(args) => map::learn_map(args),
        Command::Translate(args) => translate::translate(args),
        Command::Evaluate(args) => eval::evaluate(args),
        Command::Sweep(args) => eval::sweep(args),
        Command::Bands(args) => eval::bands(args),
        Command::Curve(args) => curve::curve(args),
        Command::Audit(args) => audit::audit(args),
        Command::BaselineEd(args) => baseline::baseline_ed(args),
        Command::BaselineCooc(args) => baseline::baseline_cooc(args),
        Command::Pca(args) => audit::pca(args),
    }
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "bin")
}

/// Read vectors, picking the format from the extension: `.bin` is binary,
/// everything else text.
pub fn load_vectors(path: &Path) -> Result<(EmbeddingModel, Vocabulary)> {
    if is_binary(path) {
        read_vectors_binary(path)
    } else {
        read_vectors_text(path)
    }
}

/// Write vectors under the same extension rule as [`load_vectors`].
pub fn save_vectors(path: &Path, model: &EmbeddingModel, vocab: &Vocabulary) -> Result<()> {
    if is_binary(path) {
        write_vectors_binary(path, model, vocab)
    } else {
        write_vectors_text(path, model, vocab)
    }
}

/// Precision at 1 and 5 over the given retrievals, with the alternatives
/// block added when any entry lists alternative translations.
pub fn build_basic_report(
    config: BTreeMap<String, String>,
    retrievals: &[Retrieval],
) -> Result<EvalReport> {
    let p1 = precision_at_k(retrievals, 1, false)?;
    let p5 = precision_at_k(retrievals, 5, false)?;
    let mut report = EvalReport::new(config, p1, p5);
    if retrievals.iter().any(|r| !r.alternatives.is_empty()) {
        let mut alt = BTreeMap::new();
        alt.insert("1".to_string(), precision_at_k(retrievals, 1, true)?.value);
        alt.insert("5".to_string(), precision_at_k(retrievals, 5, true)?.value);
        report.alternatives_p_at = Some(alt);
    }
    Ok(report)
}

/// Validate, then write the report to `out`, or print it to stdout when no
/// path was given. File writes leave a one-line summary on stdout instead.
pub fn emit_report(report: &EvalReport, out: Option<&Path>) -> Result<()> {
    report.validate()?;
    match out {
        Some(path) => {
            write_report(path, report)?;
            println!(
                "coverage={} p1={} p5={}",
                report.coverage, report.p_at["1"], report.p_at["5"]
            );
        }
        None => print!("{}", report.to_json()),
    }
    Ok(())
}

pub fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let t = part.trim();
        let value: f64 = t.parse().map_err(|_| {
            Error::InvalidConfig(format!("{what}: cannot parse {t:?} as a number"))
        })?;
        out.push(value);
    }
    Ok(out)
}
