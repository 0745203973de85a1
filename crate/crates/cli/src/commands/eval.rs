use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bilex::corpus::Vocabulary;
use bilex::embedding::EmbeddingModel;
use bilex::evaluation::{
    frequency_band_eval, score_test_entries, split_dictionary, threshold_sweep, EvalReport,
    Lexicon, Retrieval, ScoredRetrieval, DEFAULT_BAND_END, DEFAULT_BAND_SIZE,
    DEFAULT_BAND_START, DEFAULT_N_TEST, DEFAULT_N_TRAIN, REPORT_SCHEMA_VERSION,
};
use bilex::io::{read_lexicon, read_matrix, write_band_tsv, write_sweep_tsv};
use bilex::mapping::TranslationMatrix;
use bilex::translator::{Translator, DEFAULT_RERANK_POOL};
use bilex::{Error, Result};
use clap::Args;

use crate::config::{resolve, resolve_opt, resolve_required, Config};

/// Everything a translator borrows, loaded from the three artifact files.
pub struct EvalInputs {
    pub tm: TranslationMatrix,
    pub src_model: EmbeddingModel,
    pub src_vocab: Vocabulary,
    pub tgt_model: EmbeddingModel,
    pub tgt_vocab: Vocabulary,
}

impl EvalInputs {
    pub fn load(matrix: &Path, src: &Path, tgt: &Path) -> Result<EvalInputs> {
        let tm = read_matrix(matrix)?;
        let (src_model, src_vocab) = crate::commands::load_vectors(src)?;
        let (tgt_model, tgt_vocab) = crate::commands::load_vectors(tgt)?;
        Ok(EvalInputs {
            tm,
            src_model,
            src_vocab,
            tgt_model,
            tgt_vocab,
        })
    }

    pub fn translator(&self) -> Result<Translator<'_>> {
        Translator::new(
            &self.tm,
            &self.src_model,
            &self.src_vocab,
            &self.tgt_model,
            &self.tgt_vocab,
        )
    }
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Seed dictionary, source TAB target per line, source-frequency ordered
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
    /// Leading dictionary entries reserved for fitting, skipped here (default: 5000)
    #[arg(long, value_name = "N")]
    n_train: Option<usize>,
    /// Dictionary entries after the training block scored as the test split (default: 1000)
    #[arg(long, value_name = "N")]
    n_test: Option<usize>,
    /// Rerank by lambda * cosine + (1 - lambda) * character similarity
    #[arg(long, value_name = "LAMBDA")]
    lambda: Option<f64>,
    /// Cosine candidates fed to the reranker (default: 50)
    #[arg(long, value_name = "N")]
    pool: Option<usize>,
    /// Report destination; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Flags shared by evaluate and sweep, resolved against the config file.
struct Scoring {
    lexicon: Lexicon,
    inputs: EvalInputs,
    rerank: Option<(f64, usize)>,
    echo: BTreeMap<String, String>,
    out: Option<PathBuf>,
}

fn prepare(args: EvaluateArgs, command: &str) -> Result<Scoring> {
    let cfg = Config::load(args.config.as_deref())?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let matrix: PathBuf = resolve_required(args.matrix, &cfg, "matrix")?;
    let src: PathBuf = resolve_required(args.src, &cfg, "src")?;
    let tgt: PathBuf = resolve_required(args.tgt, &cfg, "tgt")?;
    let n_train = resolve(args.n_train, &cfg, "n-train", DEFAULT_N_TRAIN)?;
    let n_test = resolve(args.n_test, &cfg, "n-test", DEFAULT_N_TEST)?;
    let lambda = resolve_opt(args.lambda, &cfg, "lambda")?;
    let pool = resolve(args.pool, &cfg, "pool", DEFAULT_RERANK_POOL)?;
    let out = resolve_opt(args.out, &cfg, "out")?;

    let lexicon = split_dictionary(read_lexicon(&lexicon_path)?, n_train, n_test)?;
    let inputs = EvalInputs::load(&matrix, &src, &tgt)?;
    let rerank = lambda.map(|l| (l, pool));
    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), command.to_string());
    echo.insert("n_train".to_string(), n_train.to_string());
    echo.insert("n_test".to_string(), n_test.to_string());
    if let Some((lambda, pool)) = rerank {
        echo.insert("lambda".to_string(), lambda.to_string());
        echo.insert("pool".to_string(), pool.to_string());
    }
    Ok(Scoring {
        lexicon,
        inputs,
        rerank,
        echo,
        out,
    })
}

fn retrievals_of(scored: &[ScoredRetrieval]) -> Vec<Retrieval> {
    scored.iter().map(|s| s.retrieval.clone()).collect()
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let run = prepare(args, "evaluate")?;
    let translator = run.inputs.translator()?;
    let scored = score_test_entries(&translator, &run.lexicon, 5, run.rerank)?;
    let report = crate::commands::build_basic_report(run.echo, &retrievals_of(&scored))?;
    crate::commands::emit_report(&report, run.out.as_deref())
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    eval: EvaluateArgs,
    /// Confidence thresholds to sweep, comma separated, evaluated in
    /// ascending order (default: 0.0,0.5,0.6,0.7)
    #[arg(long, value_name = "LIST")]
    thresholds: Option<String>,
    /// Also write the sweep table as TSV here
    #[arg(long, value_name = "FILE")]
    tsv: Option<PathBuf>,
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let cfg = Config::load(args.eval.config.as_deref())?;
    let spec = resolve(
        args.thresholds,
        &cfg,
        "thresholds",
        "0.0,0.5,0.6,0.7".to_string(),
    )?;
    let tsv = resolve_opt(args.tsv, &cfg, "tsv")?;
    let mut thresholds = crate::commands::parse_f64_list(&spec, "thresholds")?;
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let mut run = prepare(args.eval, "sweep")?;
    run.echo.insert(
        "thresholds".to_string(),
        thresholds
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    let translator = run.inputs.translator()?;
    let scored = score_test_entries(&translator, &run.lexicon, 5, run.rerank)?;
    let mut report = crate::commands::build_basic_report(run.echo, &retrievals_of(&scored))?;
    report.per_threshold = threshold_sweep(&scored, &thresholds)?;
    if let Some(path) = tsv {
        write_sweep_tsv(&path, &report.per_threshold)?;
    }
    crate::commands::emit_report(&report, run.out.as_deref())
}

#[derive(Args)]
pub struct BandsArgs {
    /// Seed dictionary, source TAB target per line
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
    /// Entries per source-frequency band (default: 2000)
    #[arg(long, value_name = "N")]
    band_size: Option<usize>,
    /// First source rank covered, 1-based (default: 5000)
    #[arg(long, value_name = "RANK")]
    start_rank: Option<usize>,
    /// Rank where the last band ends, exclusive (default: 19000)
    #[arg(long, value_name = "RANK")]
    end_rank: Option<usize>,
    /// Also write the band table as TSV here
    #[arg(long, value_name = "FILE")]
    tsv: Option<PathBuf>,
    /// Report destination; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any flag of this command
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

pub fn bands(args: BandsArgs) -> Result<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let lexicon_path: PathBuf = resolve_required(args.lexicon, &cfg, "lexicon")?;
    let matrix: PathBuf = resolve_required(args.matrix, &cfg, "matrix")?;
    let src: PathBuf = resolve_required(args.src, &cfg, "src")?;
    let tgt: PathBuf = resolve_required(args.tgt, &cfg, "tgt")?;
    let band_size = resolve(args.band_size, &cfg, "band-size", DEFAULT_BAND_SIZE)?;
    let start_rank = resolve(args.start_rank, &cfg, "start-rank", DEFAULT_BAND_START)?;
    let end_rank = resolve(args.end_rank, &cfg, "end-rank", DEFAULT_BAND_END)?;
    let tsv = resolve_opt(args.tsv, &cfg, "tsv")?;
    let out: Option<PathBuf> = resolve_opt(args.out, &cfg, "out")?;

    let lexicon = read_lexicon(&lexicon_path)?;
    let inputs = EvalInputs::load(&matrix, &src, &tgt)?;
    let translator = inputs.translator()?;
    let rows = frequency_band_eval(&translator, &lexicon, band_size, start_rank, end_rank)?;

    let covered: usize = rows.iter().map(|r| r.covered).sum();
    let total: usize = rows.iter().map(|r| r.total).sum();
    if covered == 0 {
        return Err(Error::EmptyEvalSet);
    }
    // Band precision values are per-band hit rates, so the covered-weighted
    // mean recovers the exact precision over all banded entries.
    let weighted = |pick: fn(&bilex::evaluation::BandRow) -> Option<f64>| {
        rows.iter()
            .filter_map(|r| pick(r).map(|p| p * r.covered as f64))
            .sum::<f64>()
            / covered as f64
    };
    let mut p_at = BTreeMap::new();
    p_at.insert("1".to_string(), weighted(|r| r.p1));
    p_at.insert("5".to_string(), weighted(|r| r.p5));
    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), "bands".to_string());
    echo.insert("band_size".to_string(), band_size.to_string());
    echo.insert("start_rank".to_string(), start_rank.to_string());
    echo.insert("end_rank".to_string(), end_rank.to_string());
    let report = EvalReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config: echo,
        coverage: covered as f64 / total as f64,
        covered,
        total,
        p_at,
        alternatives_p_at: None,
        per_threshold: Vec::new(),
        per_band: rows,
        notes: Vec::new(),
    };
    if let Some(path) = tsv {
        write_band_tsv(&path, &report.per_band)?;
    }
    crate::commands::emit_report(&report, out.as_deref())
}
