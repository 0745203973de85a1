use std::path::PathBuf;

use bilex::io::read_matrix;
use bilex::translator::{TranslationCandidate, Translator, DEFAULT_RERANK_POOL};
use bilex::{Error, Result};
use clap::Args;

use crate::config::{resolve, resolve_opt, resolve_required, Config};

#[derive(Args)]
pub struct TranslateArgs {
    /// Fitted translation matrix
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Source-language vectors
    #[arg(long, value_name = "FILE")]
    src: Option<PathBuf>,
    /// Target-language vectors, the candidate space
    #[arg(long, value_name = "FILE")]
    tgt: Option<PathBuf>,
    /// Single word to translate
    #[arg(long, value_name = "WORD")]
    word: Option<String>,
    /// File of words to translate, one per line
    #[arg(long, value_name = "FILE")]
    words: Option<PathBuf>,
    /// Candidates per word (default: 5)
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Abstain on words whose confidence falls below this threshold
    #[arg(long, value_name = "THETA")]
    threshold: Option<f64>,
    /// Rerank by lambda * cosine + (1 - lambda) * character similarity
    #[arg(long, value_name = "LAMBDA")]
    lambda: Option<f64>,
    /// Cosine candidates fed to the reranker (default: 50)
    #[arg(long, value_name = "N")]
    pool: Option<usize>,
    /// Threads for scoring a --words batch (default: 1)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Top candidates for one word, or `None` when the query abstained.
type Answer = Result<Option<Vec<TranslationCandidate>>>;

fn answer(
    translator: &Translator,
    word: &str,
    k: usize,
    threshold: Option<f64>,
    rerank: Option<(f64, usize)>,
) -> Answer {
    match rerank {
        Some((lambda, pool)) => {
            let ranked = translator.translate_combined(word, lambda, pool, k)?;
            let confidence = ranked[0].combined.expect("reranked candidates are scored");
            if threshold.is_some_and(|theta| confidence < theta) {
                return Ok(None);
            }
            Ok(Some(ranked))
        }
        None => match threshold {
            Some(theta) => translator.translate_with_threshold(word, theta, k),
            None => translator.translate_topk(word, k).map(Some),
        },
    }
}

/// One stdout line per candidate: source, rank, candidate, cosine, the
/// combined score (empty unless reranking), and the query's confidence.
/// Confidence is the rank-1 score of the final ranking, so it repeats on
/// every row of the same query.
fn print_rows(word: &str, candidates: &[TranslationCandidate]) {
    let confidence = candidates[0].combined.unwrap_or(candidates[0].cosine);
    for (i, c) in candidates.iter().enumerate() {
        let combined = c.combined.map(|v| v.to_string()).unwrap_or_default();
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            word,
            i + 1,
            c.word,
            c.cosine,
            combined,
            confidence
        );
    }
}

pub fn translate(args: TranslateArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let matrix_path: PathBuf = resolve_required(args.matrix, &cfg, "matrix")?;
    let src: PathBuf = resolve_required(args.src, &cfg, "src")?;
    let tgt: PathBuf = resolve_required(args.tgt, &cfg, "tgt")?;
    let word = resolve_opt(args.word, &cfg, "word")?;
    let words_file = resolve_opt(args.words, &cfg, "words")?;
    let k = resolve(args.k, &cfg, "k", 5)?;
    let threshold = resolve_opt(args.threshold, &cfg, "threshold")?;
    let lambda = resolve_opt(args.lambda, &cfg, "lambda")?;
    let pool = resolve(args.pool, &cfg, "pool", DEFAULT_RERANK_POOL)?;
    let workers = resolve(args.workers, &cfg, "workers", 1)?;
    let rerank = lambda.map(|l| (l, pool));

    let tm = read_matrix(&matrix_path)?;
    let (src_model, src_vocab) = crate::commands::load_vectors(&src)?;
    let (tgt_model, tgt_vocab) = crate::commands::load_vectors(&tgt)?;
    let translator = Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab)?;

    match (word, words_file) {
        (Some(word), None) => {
            match answer(&translator, &word, k, threshold, rerank)? {
                Some(candidates) => print_rows(&word, &candidates),
                None => eprintln!("note: abstained on {word:?} (confidence below threshold)"),
            }
            Ok(())
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let mut queries = Vec::new();
            for line in text.lines() {
                let w = line.trim();
                if w.is_empty() {
                    continue;
                }
                if translator.src_vocab().contains(w) {
                    queries.push(w);
                } else {
                    eprintln!("note: skipping out-of-vocabulary word {w:?}");
                }
            }
            let answers = batch(&translator, &queries, k, threshold, rerank, workers);
            for (w, a) in queries.iter().zip(answers) {
                match a? {
                    Some(candidates) => print_rows(w, &candidates),
                    None => {
                        eprintln!("note: abstained on {w:?} (confidence below threshold)");
                    }
                }
            }
            Ok(())
        }
        (Some(_), Some(_)) => Err(Error::InvalidConfig(
            "--word and --words are mutually exclusive".into(),
        )),
        (None, None) => Err(Error::InvalidConfig(
            "one of --word or --words is required".into(),
        )),
    }
}

/// Score the queries in input order, sharded across `workers` threads. The
/// scan is read-only, so the result does not depend on the thread count.
fn batch(
    translator: &Translator,
    queries: &[&str],
    k: usize,
    threshold: Option<f64>,
    rerank: Option<(f64, usize)>,
    workers: usize,
) -> Vec<Answer> {
    if workers <= 1 || queries.len() <= 1 {
        return queries
            .iter()
            .map(|w| answer(translator, w, k, threshold, rerank))
            .collect();
    }
    let mut slots: Vec<Option<Answer>> = queries.iter().map(|_| None).collect();
    let chunk = queries.len().div_ceil(workers);
    std::thread::scope(|scope| {
        for (words, out) in queries.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (w, slot) in words.iter().zip(out.iter_mut()) {
                    *slot = Some(answer(translator, w, k, threshold, rerank));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every query slot is filled"))
        .collect()
}
