use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;

use bilex::baselines::{
    build_cooc_tracked, cooc_translate, dictionary_axes, ed_translate, normalize_counts,
    CountVector, DEFAULT_COOC_TRACKED, DEFAULT_COOC_WINDOW,
};
use bilex::corpus::build_vocab;
use bilex::evaluation::{split_dictionary, Retrieval, DEFAULT_N_TEST, DEFAULT_N_TRAIN};
use bilex::io::{read_lexicon, read_token_stream, read_vocab, write_count_vectors};
use bilex::Result;
use clap::Args;

use crate::config::{resolve, resolve_opt, resolve_required, Config};

#[derive(Args)]
pub struct BaselineEdArgs {
    /// Seed dictionary, source TAB target per line
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Target vocabulary supplying the candidate words
    #[arg(long, value_name = "FILE")]
    tgt_vocab: Option<PathBuf>,
    /// Leading dictionary entries skipped, matching the embedding split (default: 5000)
    #[arg(long, value_name = "N")]
    n_train: Option<usize>,
    /// Dictionary entries scored as the test split (default: 1000)
    #[arg(long, value_name = "N")]
    n_test: Option<usize>,
    /// Report destination; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Rank target words by edit distance to each test source word. No training
/// is involved; the train split is skipped only to keep the test set aligned
/// with the other methods.
pub fn baseline_ed(args: BaselineEdArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let vocab_path: PathBuf = resolve_required(args.tgt_vocab, &cfg, "tgt-vocab")?;
    let n_train = resolve(args.n_train, &cfg, "n-train", DEFAULT_N_TRAIN)?;
    let n_test = resolve(args.n_test, &cfg, "n-test", DEFAULT_N_TEST)?;
    let out = resolve_opt(args.out, &cfg, "out")?;

    let lexicon = split_dictionary(read_lexicon(&lexicon_path)?, n_train, n_test)?;
    let vocab = read_vocab(&vocab_path)?;
    let mut retrievals = Vec::new();
    for entry in lexicon.test() {
        let candidates = if vocab.contains(&entry.target) {
            let ranked = ed_translate(&entry.source, &vocab, 5)?;
            Some(ranked.into_iter().map(|(word, _)| word).collect())
        } else {
            None
        };
        retrievals.push(Retrieval {
            source: entry.source.clone(),
            gold: entry.target.clone(),
            alternatives: entry.alternatives.clone(),
            candidates,
        });
    }
    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), "baseline-ed".to_string());
    echo.insert("n_train".to_string(), n_train.to_string());
    echo.insert("n_test".to_string(), n_test.to_string());
    let report = crate::commands::build_basic_report(echo, &retrievals)?;
    crate::commands::emit_report(&report, out.as_deref())
}

#[derive(Args)]
pub struct BaselineCoocArgs {
    /// Source-language token stream
    #[arg(long, value_name = "FILE")]
    src_input: Option<PathBuf>,
    /// Target-language token stream
    #[arg(long, value_name = "FILE")]
    tgt_input: Option<PathBuf>,
    /// Seed dictionary, source TAB target per line
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Window radius for counting neighbors (default: 10)
    #[arg(long, value_name = "K")]
    window: Option<usize>,
    /// Candidate target words: the top N by frequency (default: 50000)
    #[arg(long, value_name = "N")]
    tracked: Option<usize>,
    /// Minimum count for a target word to become a candidate (default: 1)
    #[arg(long, value_name = "N")]
    min_count: Option<u64>,
    /// Dictionary entries whose translations become count axes (default: 5000)
    #[arg(long, value_name = "N")]
    n_train: Option<usize>,
    /// Dictionary entries scored as the test split (default: 1000)
    #[arg(long, value_name = "N")]
    n_test: Option<usize>,
    /// Dump the normalized source count vectors here, sorted by word
    #[arg(long, value_name = "FILE")]
    dump_src: Option<PathBuf>,
    /// Dump the normalized target count vectors here, in frequency order
    #[arg(long, value_name = "FILE")]
    dump_tgt: Option<PathBuf>,
    /// Report destination; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Count in-dictionary neighbors for test words and candidate targets,
/// normalize, re-index source counts through the dictionary, and retrieve
/// by cosine.
pub fn baseline_cooc(args: BaselineCoocArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let src_input: PathBuf = resolve_required(args.src_input, &cfg, "src-input")?;
    let tgt_input: PathBuf = resolve_required(args.tgt_input, &cfg, "tgt-input")?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let window = resolve(args.window, &cfg, "window", DEFAULT_COOC_WINDOW)?;
    let tracked = resolve(args.tracked, &cfg, "tracked", DEFAULT_COOC_TRACKED)?;
    let min_count = resolve(args.min_count, &cfg, "min-count", 1)?;
    let n_train = resolve(args.n_train, &cfg, "n-train", DEFAULT_N_TRAIN)?;
    let n_test = resolve(args.n_test, &cfg, "n-test", DEFAULT_N_TEST)?;
    let dump_src = resolve_opt(args.dump_src, &cfg, "dump-src")?;
    let dump_tgt = resolve_opt(args.dump_tgt, &cfg, "dump-tgt")?;
    let out = resolve_opt(args.out, &cfg, "out")?;

    let src_stream = read_token_stream(&src_input)?;
    let tgt_stream = read_token_stream(&tgt_input)?;
    let lexicon = split_dictionary(read_lexicon(&lexicon_path)?, n_train, n_test)?;
    let dictionary: Vec<(String, String)> = lexicon
        .train_pairs()
        .into_iter()
        .map(|(s, t)| (s.to_string(), t.to_string()))
        .collect();
    let (src_axes, tgt_axes) = dictionary_axes(&dictionary);

    let test_sources: HashSet<String> = lexicon.test().map(|e| e.source.clone()).collect();
    let raw_src = build_cooc_tracked(&src_stream, &src_axes, window, Some(&test_sources))?;
    let tgt_vocab = build_vocab(&tgt_stream, min_count)?;
    let candidate_words: Vec<String> = (0..tracked.min(tgt_vocab.len()))
        .map(|id| tgt_vocab.word(id).to_string())
        .collect();
    let candidate_set: HashSet<String> = candidate_words.iter().cloned().collect();
    let raw_tgt = build_cooc_tracked(&tgt_stream, &tgt_axes, window, Some(&candidate_set))?;

    let ratio = src_stream.token_count() as f64 / tgt_stream.token_count() as f64;
    let src_vectors: HashMap<String, CountVector> = raw_src
        .iter()
        .map(|(word, v)| (word.clone(), normalize_counts(v, ratio)))
        .collect();
    let tgt_vectors: Vec<CountVector> = candidate_words
        .iter()
        .map(|word| {
            let v = raw_tgt.get(word).expect("vocabulary words occur in the stream");
            normalize_counts(v, 1.0)
        })
        .collect();

    let mut retrievals = Vec::new();
    let mut zero_sources = 0usize;
    for entry in lexicon.test() {
        let scoreable =
            src_vectors.contains_key(&entry.source) && candidate_set.contains(&entry.target);
        let candidates = if scoreable {
            match cooc_translate(&entry.source, &src_vectors, &tgt_vectors, &dictionary, 5)? {
                Some(ranked) => Some(ranked.into_iter().map(|(word, _)| word).collect()),
                None => {
                    zero_sources += 1;
                    None
                }
            }
        } else {
            None
        };
        retrievals.push(Retrieval {
            source: entry.source.clone(),
            gold: entry.target.clone(),
            alternatives: entry.alternatives.clone(),
            candidates,
        });
    }

    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), "baseline-cooc".to_string());
    echo.insert("window".to_string(), window.to_string());
    echo.insert("tracked".to_string(), tracked.to_string());
    echo.insert("min_count".to_string(), min_count.to_string());
    echo.insert("n_train".to_string(), n_train.to_string());
    echo.insert("n_test".to_string(), n_test.to_string());
    echo.insert("size_ratio".to_string(), ratio.to_string());
    let mut report = crate::commands::build_basic_report(echo, &retrievals)?;
    if zero_sources > 0 {
        report.notes.push(format!(
            "{zero_sources} test words had all-zero count vectors and were not scored"
        ));
    }

    if let Some(path) = dump_src {
        let mut vectors: Vec<CountVector> = src_vectors.values().cloned().collect();
        vectors.sort_by(|a, b| a.word.cmp(&b.word));
        write_count_vectors(&path, &vectors)?;
    }
    if let Some(path) = dump_tgt {
        write_count_vectors(&path, &tgt_vectors)?;
    }
    crate::commands::emit_report(&report, out.as_deref())
}
