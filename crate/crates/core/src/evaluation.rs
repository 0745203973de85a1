//! Experimental protocol: dictionary splits, precision with coverage,
//! threshold sweeps, frequency bands, data-size curves, dictionary audits,
//! and 2D projections for plotting.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::corpus::{build_vocab, TokenStream, Vocabulary};
use crate::embedding::{train, EmbeddingModel, TrainConfig};
use crate::error::{Error, Result};
use crate::mapping::{assemble_pairs, learn_closed_form, learn_sgd, TranslationMatrix};
use crate::translator::Translator;
use crate::vecops::cosine;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_N_TRAIN: usize = 5000;
pub const DEFAULT_N_TEST: usize = 1000;
pub const DEFAULT_BAND_SIZE: usize = 2000;
pub const DEFAULT_BAND_START: usize = 5000;
pub const DEFAULT_BAND_END: usize = 19_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
    Unused,
}

#[derive(Debug, Clone)]
pub struct LexiconEntry {
    pub source: String,
    pub target: String,
    pub alternatives: Vec<String>,
    pub split: Split,
}

/// Seed dictionary in source-frequency order, with per-entry split tags.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub entries: Vec<LexiconEntry>,
}

impl Lexicon {
    pub fn new(entries: Vec<LexiconEntry>) -> Self {
        Lexicon { entries }
    }

    pub fn from_rows(rows: Vec<(String, String, Vec<String>)>) -> Self {
        Lexicon {
            entries: rows
                .into_iter()
                .map(|(source, target, alternatives)| LexiconEntry {
                    source,
                    target,
                    alternatives,
                    split: Split::Unused,
                })
                .collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        Lexicon::from_rows(pairs.into_iter().map(|(s, t)| (s, t, Vec::new())).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn train(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.iter().filter(|e| e.split == Split::Train)
    }

    pub fn test(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.iter().filter(|e| e.split == Split::Test)
    }

    pub fn train_pairs(&self) -> Vec<(&str, &str)> {
        self.train()
            .map(|e| (e.source.as_str(), e.target.as_str()))
            .collect()
    }
}

/// Tag the first `n_train` entries as training data and the following
/// `n_test` as test data. Assumes entries are already in source-frequency
/// order.
pub fn split_dictionary(lexicon: Lexicon, n_train: usize, n_test: usize) -> Result<Lexicon> {
    split_dictionary_offset(lexicon, n_train, n_train, n_test)
}

/// Variant with the test block starting at an arbitrary offset, for
/// evaluating deeper frequency ranges against the same training block.
pub fn split_dictionary_offset(
    mut lexicon: Lexicon,
    n_train: usize,
    test_start: usize,
    n_test: usize,
) -> Result<Lexicon> {
    if n_train == 0 {
        return Err(Error::InvalidConfig("training split must be non-empty".into()));
    }
    if n_test == 0 {
        return Err(Error::InvalidConfig("test split must be non-empty".into()));
    }
    if test_start < n_train {
        return Err(Error::InvalidConfig(
            "train and test splits must be disjoint".into(),
        ));
    }
    let required = test_start + n_test;
    if required > lexicon.len() {
        return Err(Error::DictionaryTooSmall {
            required,
            available: lexicon.len(),
        });
    }
    for (i, entry) in lexicon.entries.iter_mut().enumerate() {
        entry.split = if i < n_train {
            Split::Train
        } else if (test_start..test_start + n_test).contains(&i) {
            Split::Test
        } else {
            Split::Unused
        };
    }
    Ok(lexicon)
}

/// One evaluated dictionary entry. `candidates` is `None` when the entry
/// could not be scored because either side is out of vocabulary.
#[derive(Debug, Clone)]
pub struct Retrieval {
    pub source: String,
    pub gold: String,
    pub alternatives: Vec<String>,
    pub candidates: Option<Vec<String>>,
}

/// A retrieval plus the confidence of its top answer, for threshold sweeps.
#[derive(Debug, Clone)]
pub struct ScoredRetrieval {
    pub retrieval: Retrieval,
    pub confidence: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub value: f64,
    pub covered: usize,
    pub total: usize,
}

impl Precision {
    pub fn coverage(&self) -> f64 {
        self.covered as f64 / self.total as f64
    }
}

/// Exact-match precision over the covered entries. Skipped entries leave
/// the denominator and surface as lowered coverage.
pub fn precision_at_k(
    retrievals: &[Retrieval],
    k: usize,
    match_alternatives: bool,
) -> Result<Precision> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if retrievals.is_empty() {
        return Err(Error::EmptyEvalSet);
    }
    let mut covered = 0usize;
    let mut hits = 0usize;
    for r in retrievals {
        let Some(candidates) = &r.candidates else {
            continue;
        };
        covered += 1;
        let top = &candidates[..k.min(candidates.len())];
        let hit = top.iter().any(|c| {
            c == &r.gold || (match_alternatives && r.alternatives.iter().any(|a| a == c))
        });
        if hit {
            hits += 1;
        }
    }
    if covered == 0 {
        return Err(Error::EmptyEvalSet);
    }
    Ok(Precision {
        value: hits as f64 / covered as f64,
        covered,
        total: retrievals.len(),
    })
}

/// Run the test split through a translator, keeping the top `k` candidates
/// and the confidence of each query. With `rerank` = (lambda, pool), both
/// ranking and confidence use the combined score.
pub fn score_test_entries(
    translator: &Translator,
    lexicon: &Lexicon,
    k: usize,
    rerank: Option<(f64, usize)>,
) -> Result<Vec<ScoredRetrieval>> {
    let entries: Vec<&LexiconEntry> = lexicon.test().collect();
    if entries.is_empty() {
        return Err(Error::EmptyEvalSet);
    }
    let mut out = Vec::with_capacity(entries.len());
    for entry in entries {
        let in_vocab = translator.src_vocab().contains(&entry.source)
            && translator.tgt_vocab().contains(&entry.target);
        let (candidates, confidence) = if in_vocab {
            match rerank {
                None => {
                    let ranked = translator.translate_topk(&entry.source, k)?;
                    let confidence = ranked[0].cosine;
                    (
                        Some(ranked.into_iter().map(|c| c.word).collect()),
                        Some(confidence),
                    )
                }
                Some((lambda, pool)) => {
                    let ranked = translator.translate_combined(&entry.source, lambda, pool, k)?;
                    let confidence = ranked[0].combined.unwrap();
                    (
                        Some(ranked.into_iter().map(|c| c.word).collect()),
                        Some(confidence),
                    )
                }
            }
        } else {
            (None, None)
        };
        out.push(ScoredRetrieval {
            retrieval: Retrieval {
                source: entry.source.clone(),
                gold: entry.target.clone(),
                alternatives: entry.alternatives.clone(),
                candidates,
            },
            confidence,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub threshold: f64,
    pub coverage: f64,
    pub covered: usize,
    pub total: usize,
    pub p1: Option<f64>,
    pub p5: Option<f64>,
}

/// Evaluate the same scored queries under each confidence threshold.
/// A query is answered when its confidence is at least the threshold, so
/// ties at the threshold stay covered. Coverage is measured against all
/// queries, answered or not.
pub fn threshold_sweep(scored: &[ScoredRetrieval], thresholds: &[f64]) -> Result<Vec<SweepRow>> {
    if scored.is_empty() {
        return Err(Error::EmptyEvalSet);
    }
    if thresholds.is_empty() {
        return Err(Error::InvalidConfig("no thresholds given".into()));
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidConfig(
            "thresholds must be sorted ascending".into(),
        ));
    }
    let total = scored.len();
    let mut rows = Vec::with_capacity(thresholds.len());
    for &theta in thresholds {
        let kept: Vec<Retrieval> = scored
            .iter()
            .filter(|s| s.confidence.is_some_and(|c| c >= theta))
            .map(|s| s.retrieval.clone())
            .collect();
        let covered = kept.len();
        let (p1, p5) = if covered == 0 {
            (None, None)
        } else {
            (
                Some(precision_at_k(&kept, 1, false)?.value),
                Some(precision_at_k(&kept, 5, false)?.value),
            )
        };
        rows.push(SweepRow {
            threshold: theta,
            coverage: covered as f64 / total as f64,
            covered,
            total,
            p1,
            p5,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub start_rank: usize,
    pub end_rank: usize,
    pub covered: usize,
    pub total: usize,
    pub p1: Option<f64>,
    pub p5: Option<f64>,
}

/// Evaluate disjoint source-frequency bands with the same fitted matrix.
/// An entry lands in the band covering its source word's frequency rank;
/// entries whose source is out of vocabulary land nowhere.
pub fn frequency_band_eval(
    translator: &Translator,
    lexicon: &Lexicon,
    band_size: usize,
    start_rank: usize,
    end_rank: usize,
) -> Result<Vec<BandRow>> {
    if band_size == 0 || start_rank == 0 || end_rank <= start_rank {
        return Err(Error::InvalidConfig(
            "bands need a positive size and a forward rank range".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut band_start = start_rank;
    while band_start < end_rank {
        let band_end = (band_start + band_size).min(end_rank);
        let mut retrievals = Vec::new();
        for entry in &lexicon.entries {
            let Some(id) = translator.src_vocab().id(&entry.source) else {
                continue;
            };
            let rank = translator.src_vocab().rank(id);
            if !(band_start..band_end).contains(&rank) {
                continue;
            }
            let candidates = if translator.tgt_vocab().contains(&entry.target) {
                Some(
                    translator
                        .translate_topk(&entry.source, 5)?
                        .into_iter()
                        .map(|c| c.word)
                        .collect(),
                )
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
        let covered = retrievals.iter().filter(|r| r.candidates.is_some()).count();
        let (p1, p5) = if covered == 0 {
            (None, None)
        } else {
            (
                Some(precision_at_k(&retrievals, 1, false)?.value),
                Some(precision_at_k(&retrievals, 5, false)?.value),
            )
        };
        rows.push(BandRow {
            start_rank: band_start,
            end_rank: band_end,
            covered,
            total: retrievals.len(),
            p1,
            p5,
        });
        band_start = band_end;
    }
    Ok(rows)
}

/// How the translation matrix is fitted inside composite protocols.
#[derive(Debug, Clone, Copy)]
pub enum MapSolver {
    Sgd {
        epochs: usize,
        lr: f64,
        decay: f64,
        seed: u64,
    },
    ClosedForm {
        ridge: f64,
    },
}

impl MapSolver {
    pub fn fit(
        &self,
        pairs: &crate::mapping::PairSet,
    ) -> Result<TranslationMatrix> {
        match *self {
            MapSolver::Sgd {
                epochs,
                lr,
                decay,
                seed,
            } => Ok(learn_sgd(pairs, epochs, lr, decay, seed)?.matrix),
            MapSolver::ClosedForm { ridge } => learn_closed_form(pairs, ridge),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub source_tokens: u64,
    pub target_tokens: u64,
    pub coverage: f64,
    pub p1: f64,
    pub p5: f64,
}

/// Retrain everything on nested corpus prefixes and report how precision
/// moves with data size. Prefixes are taken as leading sentence blocks, so
/// each later fraction strictly contains the earlier ones.
#[allow(clippy::too_many_arguments)]
pub fn data_size_curve(
    src_stream: &TokenStream,
    tgt_stream: &TokenStream,
    fractions: &[f64],
    lexicon: &Lexicon,
    src_config: &TrainConfig,
    tgt_config: &TrainConfig,
    min_count: u64,
    solver: &MapSolver,
) -> Result<Vec<CurveRow>> {
    if fractions.is_empty() {
        return Err(Error::InvalidConfig("no fractions given".into()));
    }
    if fractions
        .iter()
        .any(|&f| !(f > 0.0 && f <= 1.0) || !f.is_finite())
    {
        return Err(Error::InvalidConfig("fractions must lie in (0, 1]".into()));
    }
    if fractions.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidConfig(
            "fractions must be sorted ascending".into(),
        ));
    }
    let mut rows = Vec::with_capacity(fractions.len());
    for &fraction in fractions {
        let src_prefix = prefix_stream(src_stream, fraction);
        let tgt_prefix = prefix_stream(tgt_stream, fraction);
        let src_vocab = build_vocab(&src_prefix, min_count)?;
        let tgt_vocab = build_vocab(&tgt_prefix, min_count)?;
        let src_model = train(&src_prefix, &src_vocab, src_config)?;
        let tgt_model = train(&tgt_prefix, &tgt_vocab, tgt_config)?;
        let pairs = assemble_pairs(
            lexicon.train_pairs(),
            &src_model,
            &src_vocab,
            &tgt_model,
            &tgt_vocab,
        )?;
        let tm = solver.fit(&pairs)?;
        let translator = Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab)?;
        let scored = score_test_entries(&translator, lexicon, 5, None)?;
        let retrievals: Vec<Retrieval> =
            scored.into_iter().map(|s| s.retrieval).collect();
        let p1 = precision_at_k(&retrievals, 1, false)?;
        let p5 = precision_at_k(&retrievals, 5, false)?;
        rows.push(CurveRow {
            source_tokens: src_prefix.token_count(),
            target_tokens: tgt_prefix.token_count(),
            coverage: p1.coverage(),
            p1: p1.value,
            p5: p5.value,
        });
    }
    Ok(rows)
}

fn prefix_stream(stream: &TokenStream, fraction: f64) -> TokenStream {
    let n = stream.sentences.len();
    let take = ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    TokenStream::new(stream.sentences[..take].to_vec())
}

#[derive(Debug, Clone)]
pub struct AuditRow {
    pub source: String,
    pub target: String,
    pub cosine: f64,
    pub suggestions: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    /// Ascending by cosine: the most suspicious entries come first.
    pub rows: Vec<AuditRow>,
    pub skipped: usize,
}

/// Score every dictionary entry by the cosine between its mapped source
/// vector and its listed target vector. Low scores point at entries the
/// fitted map disagrees with. `leave_one_out` refits the matrix without
/// the scored entry (closed form, with the given ridge) before scoring it.
pub fn detect_dictionary_errors(
    lexicon: &Lexicon,
    translator: &Translator,
    leave_one_out: Option<f64>,
) -> Result<AuditReport> {
    let mut scoreable: Vec<&LexiconEntry> = Vec::new();
    let mut skipped = 0usize;
    for entry in &lexicon.entries {
        if translator.src_vocab().contains(&entry.source)
            && translator.tgt_vocab().contains(&entry.target)
        {
            scoreable.push(entry);
        } else {
            skipped += 1;
        }
    }
    if scoreable.is_empty() {
        return Err(Error::EmptyEvalSet);
    }
    let scores = match leave_one_out {
        None => scoreable
            .iter()
            .map(|e| {
                let mapped = translator.mapped(&e.source)?;
                let z = translator.target_vector(&e.target)?;
                Ok(cosine(&mapped, z))
            })
            .collect::<Result<Vec<f64>>>()?,
        Some(ridge) => leave_one_out_scores(&scoreable, translator, ridge)?,
    };
    let mut rows: Vec<AuditRow> = scoreable
        .iter()
        .zip(scores)
        .map(|(e, cosine)| {
            let suggestions = translator
                .translate_topk(&e.source, 3)?
                .into_iter()
                .map(|c| c.word)
                .collect();
            Ok(AuditRow {
                source: e.source.clone(),
                target: e.target.clone(),
                cosine,
                suggestions,
            })
        })
        .collect::<Result<Vec<AuditRow>>>()?;
    rows.sort_by(|a, b| {
        a.cosine
            .total_cmp(&b.cosine)
            .then_with(|| a.source.cmp(&b.source))
    });
    Ok(AuditReport { rows, skipped })
}

/// Refit without each entry via a rank-one downdate of the normal
/// equations; the ridge keeps them positive definite throughout.
fn leave_one_out_scores(
    entries: &[&LexiconEntry],
    translator: &Translator,
    ridge: f64,
) -> Result<Vec<f64>> {
    if !(ridge > 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidConfig(
            "leave-one-out refitting needs a positive ridge".into(),
        ));
    }
    let xs: Vec<&[f64]> = entries
        .iter()
        .map(|e| translator.source_vector(&e.source))
        .collect::<Result<_>>()?;
    let zs: Vec<&[f64]> = entries
        .iter()
        .map(|e| translator.target_vector(&e.target))
        .collect::<Result<_>>()?;
    let n = entries.len();
    let d1 = xs[0].len();
    let d2 = zs[0].len();
    let x = DMatrix::from_fn(n, d1, |i, j| xs[i][j]);
    let z = DMatrix::from_fn(n, d2, |i, j| zs[i][j]);
    let gram = x.transpose() * &x + DMatrix::identity(d1, d1) * ridge;
    let rhs = x.transpose() * &z;
    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        let xi = DVector::from_fn(d1, |j, _| xs[i][j]);
        let zi = DVector::from_fn(d2, |j, _| zs[i][j]);
        let gram_i = &gram - &xi * xi.transpose();
        let rhs_i = &rhs - &xi * zi.transpose();
        let wt = nalgebra::Cholesky::new(gram_i)
            .ok_or_else(|| {
                Error::InvalidConfig("downdated normal equations lost definiteness".into())
            })?
            .solve(&rhs_i);
        let mapped = wt.transpose() * &xi;
        scores.push(cosine(mapped.as_slice(), zs[i]));
    }
    Ok(scores)
}

/// Mean-centered projection of selected word vectors onto their top two
/// principal components. The second coordinate is zero when the centered
/// selection has only one direction of variation.
pub fn pca_project(
    words: &[&str],
    model: &EmbeddingModel,
    vocab: &Vocabulary,
) -> Result<Vec<(String, f64, f64)>> {
    if words.len() < 2 {
        return Err(Error::InvalidConfig(
            "projection needs at least two words".into(),
        ));
    }
    let d = model.dim();
    let mut m = DMatrix::zeros(words.len(), d);
    for (i, w) in words.iter().enumerate() {
        let id = vocab
            .id(w)
            .ok_or_else(|| Error::WordNotFound(w.to_string()))?;
        if id >= model.vocab_size() {
            return Err(Error::IdOutOfRange {
                id,
                size: model.vocab_size(),
            });
        }
        for (j, &v) in model.vector(id).iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    let rank = {
        let sv = m.clone().svd(false, false).singular_values;
        let tol = sv.max() * words.len().max(d) as f64 * f64::EPSILON;
        sv.iter().filter(|&&s| s > tol).count()
    };
    if rank < 2 {
        return Err(Error::RankDeficient { rank });
    }
    for j in 0..d {
        let mean = m.column(j).sum() / words.len() as f64;
        for i in 0..words.len() {
            m[(i, j)] -= mean;
        }
    }
    let svd = m.svd(true, true);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let vt = svd.v_t.as_ref().expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let tol = sv.max() * words.len().max(d) as f64 * f64::EPSILON;
    let mut coords = vec![(0.0f64, 0.0f64); words.len()];
    for comp in 0..2usize {
        if comp >= sv.len() || sv[comp] <= tol {
            continue;
        }
        let direction = vt.row(comp);
        let mut anchor = 0;
        for j in 1..direction.len() {
            if direction[j].abs() > direction[anchor].abs() {
                anchor = j;
            }
        }
        let flip = if direction[anchor] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..words.len() {
            let value = u[(i, comp)] * sv[comp] * flip;
            if comp == 0 {
                coords[i].0 = value;
            } else {
                coords[i].1 = value;
            }
        }
    }
    Ok(words
        .iter()
        .zip(coords)
        .map(|(w, (x, y))| (w.to_string(), x, y))
        .collect())
}

/// Full evaluation output: one JSON document, schema versioned, plus flat
/// tables mirrored into TSV by the writers. Only result-affecting
/// parameters belong in `config`, so identical runs serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub config: BTreeMap<String, String>,
    pub coverage: f64,
    pub covered: usize,
    pub total: usize,
    pub p_at: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub alternatives_p_at: Option<BTreeMap<String, f64>>,
    pub per_threshold: Vec<SweepRow>,
    pub per_band: Vec<BandRow>,
    pub notes: Vec<String>,
}

impl EvalReport {
    pub fn new(config: BTreeMap<String, String>, p1: Precision, p5: Precision) -> Self {
        let mut p_at = BTreeMap::new();
        p_at.insert("1".to_string(), p1.value);
        p_at.insert("5".to_string(), p5.value);
        EvalReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config,
            coverage: p1.coverage(),
            covered: p1.covered,
            total: p1.total,
            p_at,
            alternatives_p_at: None,
            per_threshold: Vec::new(),
            per_band: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("unreadable report: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);
        if !in_unit(self.coverage) {
            return Err(Error::InvalidConfig("coverage out of range".into()));
        }
        for (k, v) in &self.p_at {
            if !in_unit(*v) {
                return Err(Error::InvalidConfig(format!("p@{k} out of range")));
            }
        }
        for w in self.per_threshold.windows(2) {
            if w[1].coverage > w[0].coverage {
                return Err(Error::InvalidConfig(
                    "threshold coverage must be non-increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::Mode;
    use crate::testutil::{model_from_vectors, vocab_from};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn retrieval(gold: &str, candidates: Option<&[&str]>) -> Retrieval {
        Retrieval {
            source: "src".into(),
            gold: gold.into(),
            alternatives: Vec::new(),
            candidates: candidates.map(|c| c.iter().map(|s| s.to_string()).collect()),
        }
    }

    #[test]
    fn default_split_tags_five_thousand_then_one_thousand() {
        let rows: Vec<(String, String, Vec<String>)> = (0..6000)
            .map(|i| (format!("s{i}"), format!("t{i}"), Vec::new()))
            .collect();
        let lex = split_dictionary(Lexicon::from_rows(rows), 5000, 1000).unwrap();
        assert_eq!(lex.train().count(), 5000);
        assert_eq!(lex.test().count(), 1000);
        assert!(lex.entries[..5000].iter().all(|e| e.split == Split::Train));
        assert!(lex.entries[5000..].iter().all(|e| e.split == Split::Test));
    }

    #[test]
    fn offset_split_reaches_deeper_ranks_and_stays_disjoint() {
        let rows: Vec<(String, String, Vec<String>)> = (0..20)
            .map(|i| (format!("s{i}"), format!("t{i}"), Vec::new()))
            .collect();
        let lex = split_dictionary_offset(Lexicon::from_rows(rows), 5, 10, 5).unwrap();
        assert_eq!(lex.train().count(), 5);
        assert_eq!(lex.test().count(), 5);
        assert!(lex.entries[5..10].iter().all(|e| e.split == Split::Unused));
        assert!(lex.entries[10..15].iter().all(|e| e.split == Split::Test));
        assert!(lex.entries[15..].iter().all(|e| e.split == Split::Unused));
    }

    #[test]
    fn bad_split_requests_are_rejected_with_counts() {
        let rows: Vec<(String, String, Vec<String>)> = (0..100)
            .map(|i| (format!("s{i}"), format!("t{i}"), Vec::new()))
            .collect();
        let lex = Lexicon::from_rows(rows);
        assert!(matches!(
            split_dictionary(lex.clone(), 0, 10),
            Err(Error::InvalidConfig(_))
        ));
        match split_dictionary(lex.clone(), 90, 20) {
            Err(Error::DictionaryTooSmall {
                required,
                available,
            }) => {
                assert_eq!(required, 110);
                assert_eq!(available, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            split_dictionary_offset(lex, 50, 40, 10),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn precision_matches_the_frozen_examples() {
        let always_first = vec![
            retrieval("a", Some(&["a", "x", "y", "z", "q"])),
            retrieval("b", Some(&["b", "x", "y", "z", "q"])),
        ];
        let p1 = precision_at_k(&always_first, 1, false).unwrap();
        let p5 = precision_at_k(&always_first, 5, false).unwrap();
        assert_eq!(p1.value, 1.0);
        assert_eq!(p5.value, 1.0);

        let always_third = vec![
            retrieval("a", Some(&["x", "y", "a", "z", "q"])),
            retrieval("b", Some(&["x", "y", "b", "z", "q"])),
        ];
        assert_eq!(precision_at_k(&always_third, 1, false).unwrap().value, 0.0);
        assert_eq!(precision_at_k(&always_third, 5, false).unwrap().value, 1.0);
    }

    #[test]
    fn skipped_entries_lower_coverage_not_precision() {
        let rows = vec![
            retrieval("a", Some(&["a"])),
            retrieval("b", Some(&["b"])),
            retrieval("c", Some(&["x"])),
            retrieval("d", None),
        ];
        let p = precision_at_k(&rows, 1, false).unwrap();
        assert_eq!(p.covered, 3);
        assert_eq!(p.total, 4);
        assert!((p.coverage() - 0.75).abs() < 1e-12);
        assert!((p.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn alternatives_count_only_when_requested() {
        let mut row = retrieval("gold", Some(&["alt", "x", "y"]));
        row.alternatives = vec!["alt".into()];
        let rows = vec![row];
        assert_eq!(precision_at_k(&rows, 3, false).unwrap().value, 0.0);
        assert_eq!(precision_at_k(&rows, 3, true).unwrap().value, 1.0);
    }

    #[test]
    fn empty_or_fully_skipped_sets_are_errors() {
        assert!(matches!(
            precision_at_k(&[], 1, false),
            Err(Error::EmptyEvalSet)
        ));
        let rows = vec![retrieval("a", None)];
        assert!(matches!(
            precision_at_k(&rows, 1, false),
            Err(Error::EmptyEvalSet)
        ));
        let ok = vec![retrieval("a", Some(&["a"]))];
        assert!(matches!(
            precision_at_k(&ok, 0, false),
            Err(Error::InvalidConfig(_))
        ));
    }

    fn brute_force_precision(
        table: &[(usize, Vec<usize>, bool)],
        k: usize,
    ) -> Option<(f64, usize)> {
        let mut covered = 0;
        let mut hits = 0;
        for (gold, candidates, skipped) in table {
            if *skipped {
                continue;
            }
            covered += 1;
            let mut found = false;
            for (rank, c) in candidates.iter().enumerate() {
                if rank < k && c == gold {
                    found = true;
                }
            }
            if found {
                hits += 1;
            }
        }
        if covered == 0 {
            None
        } else {
            Some((hits as f64 / covered as f64, covered))
        }
    }

    proptest! {
        #[test]
        fn precision_agrees_with_the_brute_force_scorer(
            table in prop::collection::vec(
                (0usize..6, prop::collection::vec(0usize..6, 0..6), prop::bool::ANY),
                1..40,
            ),
            k in 1usize..7,
        ) {
            let rows: Vec<Retrieval> = table
                .iter()
                .map(|(gold, candidates, skipped)| Retrieval {
                    source: "s".into(),
                    gold: format!("w{gold}"),
                    alternatives: Vec::new(),
                    candidates: if *skipped {
                        None
                    } else {
                        Some(candidates.iter().map(|c| format!("w{c}")).collect())
                    },
                })
                .collect();
            match (precision_at_k(&rows, k, false), brute_force_precision(&table, k)) {
                (Err(Error::EmptyEvalSet), None) => {}
                (Ok(p), Some((value, covered))) => {
                    prop_assert!((p.value - value).abs() < 1e-12);
                    prop_assert_eq!(p.covered, covered);
                }
                (got, want) => prop_assert!(false, "mismatch: {:?} vs {:?}", got, want),
            }
        }

        #[test]
        fn precision_never_drops_as_k_grows(
            table in prop::collection::vec(
                (0usize..6, prop::collection::vec(0usize..6, 1..6)),
                1..30,
            ),
        ) {
            let rows: Vec<Retrieval> = table
                .iter()
                .map(|(gold, candidates)| Retrieval {
                    source: "s".into(),
                    gold: format!("w{gold}"),
                    alternatives: Vec::new(),
                    candidates: Some(candidates.iter().map(|c| format!("w{c}")).collect()),
                })
                .collect();
            let mut last = 0.0;
            for k in 1..=6 {
                let p = precision_at_k(&rows, k, false).unwrap().value;
                prop_assert!(p >= last - 1e-15);
                last = p;
            }
        }
    }

    #[test]
    fn sweep_reproduces_the_unfiltered_row_at_minus_one() {
        let queries = vec![
            ScoredRetrieval {
                retrieval: retrieval("a", Some(&["a", "x", "y", "z", "w"])),
                confidence: Some(0.9),
            },
            ScoredRetrieval {
                retrieval: retrieval("b", Some(&["x", "y", "b", "z", "w"])),
                confidence: Some(0.6),
            },
            ScoredRetrieval {
                retrieval: retrieval("c", Some(&["x", "y", "z", "w", "q"])),
                confidence: Some(0.4),
            },
            ScoredRetrieval {
                retrieval: retrieval("d", None),
                confidence: None,
            },
        ];
        let rows = threshold_sweep(&queries, &[-1.0, 0.5, 0.8, 1.0]).unwrap();

        let unfiltered: Vec<Retrieval> =
            queries.iter().map(|q| q.retrieval.clone()).collect();
        let p1 = precision_at_k(&unfiltered, 1, false).unwrap();
        assert_eq!(rows[0].coverage, p1.coverage());
        assert_eq!(rows[0].p1, Some(p1.value));

        assert_eq!(rows[0].covered, 3);
        assert_eq!(rows[1].covered, 2);
        assert_eq!(rows[1].p1, Some(0.5));
        assert_eq!(rows[1].p5, Some(1.0));
        assert_eq!(rows[2].covered, 1);
        assert_eq!(rows[2].p1, Some(1.0));
        assert_eq!(rows[3].covered, 0);
        assert_eq!(rows[3].p1, None);

        for w in rows.windows(2) {
            assert!(w[1].coverage <= w[0].coverage);
        }
    }

    #[test]
    fn confidence_ties_at_the_threshold_stay_covered() {
        let queries = vec![ScoredRetrieval {
            retrieval: retrieval("a", Some(&["a"])),
            confidence: Some(0.6),
        }];
        let rows = threshold_sweep(&queries, &[0.6]).unwrap();
        assert_eq!(rows[0].covered, 1);
        assert_eq!(rows[0].p1, Some(1.0));
    }

    #[test]
    fn unsorted_thresholds_are_rejected() {
        let queries = vec![ScoredRetrieval {
            retrieval: retrieval("a", Some(&["a"])),
            confidence: Some(0.5),
        }];
        assert!(threshold_sweep(&queries, &[0.5, 0.0]).is_err());
        assert!(threshold_sweep(&queries, &[]).is_err());
    }

    fn planted_translator_setup(
        golds: &[(&str, &str)],
    ) -> (
        crate::mapping::TranslationMatrix,
        (EmbeddingModel, Vocabulary),
        (EmbeddingModel, Vocabulary),
    ) {
        let n = golds.len();
        let dim = n;
        let mut vectors = vec![vec![0.0; dim]; n];
        for (i, v) in vectors.iter_mut().enumerate() {
            v[i] = 1.0;
        }
        let refs: Vec<&[f64]> = vectors.iter().map(Vec::as_slice).collect();
        let (src_model, _) = model_from_vectors(&refs);
        let (tgt_model, _) = model_from_vectors(&refs);
        let src_vocab = vocab_from(&golds.iter().map(|g| g.0).collect::<Vec<_>>());
        let tgt_vocab = vocab_from(&golds.iter().map(|g| g.1).collect::<Vec<_>>());
        let tm = crate::mapping::TranslationMatrix::from_rows(
            (0..dim)
                .map(|r| (0..dim).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
        .unwrap();
        (tm, (src_model, src_vocab), (tgt_model, tgt_vocab))
    }

    #[test]
    fn bands_partition_entries_by_source_rank() {
        let golds: Vec<(String, String)> = (0..10)
            .map(|i| (format!("s{i}"), format!("t{i}")))
            .collect();
        let gold_refs: Vec<(&str, &str)> =
            golds.iter().map(|(s, t)| (s.as_str(), t.as_str())).collect();
        let (tm, (src_model, src_vocab), (tgt_model, tgt_vocab)) =
            planted_translator_setup(&gold_refs);
        let translator =
            Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab).unwrap();

        let mut rows = Vec::new();
        for (i, (s, t)) in golds.iter().enumerate() {
            if i < 5 {
                rows.push((s.clone(), t.clone(), Vec::new()));
            } else {
                let wrong = format!("t{}", (i + 1 - 5) % 5 + 5);
                rows.push((s.clone(), wrong, Vec::new()));
            }
        }
        let lexicon = Lexicon::from_rows(rows);
        let bands = frequency_band_eval(&translator, &lexicon, 5, 1, 11).unwrap();
        assert_eq!(bands.len(), 2);
        assert_eq!(bands[0].total, 5);
        assert_eq!(bands[1].total, 5);
        assert_eq!(bands[0].p1, Some(1.0));
        assert_eq!(bands[1].p1, Some(0.0));
        assert_eq!(bands[0].start_rank, 1);
        assert_eq!(bands[0].end_rank, 6);
    }

    #[test]
    fn band_rows_match_the_standard_protocol_on_the_same_entries() {
        let golds: Vec<(String, String)> = (0..8)
            .map(|i| (format!("s{i}"), format!("t{i}")))
            .collect();
        let gold_refs: Vec<(&str, &str)> =
            golds.iter().map(|(s, t)| (s.as_str(), t.as_str())).collect();
        let (tm, (src_model, src_vocab), (tgt_model, tgt_vocab)) =
            planted_translator_setup(&gold_refs);
        let translator =
            Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab).unwrap();
        let lexicon = Lexicon::from_rows(
            golds.iter().map(|(s, t)| (s.clone(), t.clone(), Vec::new())).collect(),
        );

        let bands = frequency_band_eval(&translator, &lexicon, 4, 1, 5).unwrap();
        assert_eq!(bands.len(), 1);

        let mut tagged = lexicon.clone();
        for (i, e) in tagged.entries.iter_mut().enumerate() {
            e.split = if i < 4 { Split::Test } else { Split::Unused };
        }
        let scored = score_test_entries(&translator, &tagged, 5, None).unwrap();
        let retrievals: Vec<Retrieval> = scored.into_iter().map(|s| s.retrieval).collect();
        let p1 = precision_at_k(&retrievals, 1, false).unwrap();
        assert_eq!(bands[0].p1, Some(p1.value));
        assert_eq!(bands[0].covered, p1.covered);
    }

    #[test]
    fn out_of_vocabulary_queries_are_scored_as_skipped() {
        let golds = [("s0", "t0"), ("s1", "t1"), ("s2", "t2")];
        let (tm, (src_model, src_vocab), (tgt_model, tgt_vocab)) =
            planted_translator_setup(&golds);
        let translator =
            Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab).unwrap();
        let mut lexicon = Lexicon::from_rows(vec![
            ("s0".into(), "t0".into(), Vec::new()),
            ("ghost".into(), "t1".into(), Vec::new()),
            ("s2".into(), "missing".into(), Vec::new()),
        ]);
        for e in lexicon.entries.iter_mut() {
            e.split = Split::Test;
        }
        let scored = score_test_entries(&translator, &lexicon, 5, None).unwrap();
        assert!(scored[0].retrieval.candidates.is_some());
        assert_eq!(scored[0].confidence, Some(1.0));
        assert!(scored[1].retrieval.candidates.is_none());
        assert!(scored[1].confidence.is_none());
        assert!(scored[2].retrieval.candidates.is_none());
    }

    fn random_cloud_audit_setup(
        corrupt: &[usize],
        seed: u64,
    ) -> (Lexicon, Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let (n, d) = (40usize, 4usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = [
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
        ];
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        for i in 0..n {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let z: Vec<f64> = if corrupt.contains(&i) {
                (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()
            } else {
                (0..d)
                    .map(|r| (0..d).map(|c| q[r][c] * x[c]).sum())
                    .collect()
            };
            xs.push(x);
            zs.push(z);
        }
        let lexicon = Lexicon::from_rows(
            (0..n)
                .map(|i| (format!("s{i}"), format!("t{i}"), Vec::new()))
                .collect(),
        );
        (lexicon, xs, zs)
    }

    #[test]
    fn corrupted_entries_sink_to_the_bottom_of_the_audit() {
        let corrupt = [3usize, 17, 29, 35];
        let (lexicon, xs, zs) = random_cloud_audit_setup(&corrupt, 21);
        let x_refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let z_refs: Vec<&[f64]> = zs.iter().map(Vec::as_slice).collect();
        let (src_model, _) = model_from_vectors(&x_refs);
        let (tgt_model, _) = model_from_vectors(&z_refs);
        let names: Vec<String> = (0..40).map(|i| format!("s{i}")).collect();
        let tnames: Vec<String> = (0..40).map(|i| format!("t{i}")).collect();
        let src_vocab = vocab_from(&names.iter().map(String::as_str).collect::<Vec<_>>());
        let tgt_vocab = vocab_from(&tnames.iter().map(String::as_str).collect::<Vec<_>>());
        let pairs = assemble_pairs(
            lexicon.entries.iter().map(|e| (e.source.as_str(), e.target.as_str())),
            &src_model,
            &src_vocab,
            &tgt_model,
            &tgt_vocab,
        )
        .unwrap();
        let tm = learn_closed_form(&pairs, 0.0).unwrap();
        let translator =
            Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab).unwrap();

        let report = detect_dictionary_errors(&lexicon, &translator, None).unwrap();
        assert_eq!(report.skipped, 0);
        assert_eq!(report.rows.len(), 40);
        let bottom: Vec<&str> = report.rows[..4].iter().map(|r| r.source.as_str()).collect();
        for i in corrupt {
            assert!(bottom.contains(&format!("s{i}").as_str()), "s{i} not in {bottom:?}");
        }
        for row in &report.rows {
            assert_eq!(row.suggestions.len(), 3);
        }
        for w in report.rows.windows(2) {
            assert!(w[0].cosine <= w[1].cosine);
        }

        let loo = detect_dictionary_errors(&lexicon, &translator, Some(1e-6)).unwrap();
        let loo_bottom: Vec<&str> = loo.rows[..4].iter().map(|r| r.source.as_str()).collect();
        for i in corrupt {
            assert!(loo_bottom.contains(&format!("s{i}").as_str()));
        }
    }

    #[test]
    fn audit_scores_ignore_target_space_rescaling() {
        let corrupt = [5usize, 11];
        let (lexicon, xs, zs) = random_cloud_audit_setup(&corrupt, 22);
        let zs_scaled: Vec<Vec<f64>> = zs
            .iter()
            .map(|z| z.iter().map(|v| v * 2.5).collect())
            .collect();
        let x_refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let z_refs: Vec<&[f64]> = zs.iter().map(Vec::as_slice).collect();
        let zs_refs: Vec<&[f64]> = zs_scaled.iter().map(Vec::as_slice).collect();
        let (src_model, _) = model_from_vectors(&x_refs);
        let (tgt_model, _) = model_from_vectors(&z_refs);
        let (tgt_scaled, _) = model_from_vectors(&zs_refs);
        let names: Vec<String> = (0..40).map(|i| format!("s{i}")).collect();
        let tnames: Vec<String> = (0..40).map(|i| format!("t{i}")).collect();
        let src_vocab = vocab_from(&names.iter().map(String::as_str).collect::<Vec<_>>());
        let tgt_vocab = vocab_from(&tnames.iter().map(String::as_str).collect::<Vec<_>>());

        let pairs = assemble_pairs(
            lexicon.entries.iter().map(|e| (e.source.as_str(), e.target.as_str())),
            &src_model,
            &src_vocab,
            &tgt_model,
            &tgt_vocab,
        )
        .unwrap();
        let tm = learn_closed_form(&pairs, 0.0).unwrap();
        let plain = Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab).unwrap();
        let scaled =
            Translator::new(&tm, &src_model, &src_vocab, &tgt_scaled, &tgt_vocab).unwrap();

        let a = detect_dictionary_errors(&lexicon, &plain, None).unwrap();
        let b = detect_dictionary_errors(&lexicon, &scaled, None).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.source, rb.source);
            assert!((ra.cosine - rb.cosine).abs() < 1e-12);
        }
    }

    #[test]
    fn audit_counts_out_of_vocabulary_entries() {
        let golds = [("s0", "t0"), ("s1", "t1")];
        let (tm, (src_model, src_vocab), (tgt_model, tgt_vocab)) =
            planted_translator_setup(&golds);
        let translator =
            Translator::new(&tm, &src_model, &src_vocab, &tgt_model, &tgt_vocab).unwrap();
        let lexicon = Lexicon::from_rows(vec![
            ("s0".into(), "t0".into(), Vec::new()),
            ("ghost".into(), "t1".into(), Vec::new()),
        ]);
        let report = detect_dictionary_errors(&lexicon, &translator, None).unwrap();
        assert_eq!(report.skipped, 1);
        assert_eq!(report.rows.len(), 1);
    }

    #[test]
    fn two_word_projection_falls_on_a_line() {
        let (model, vocab) = model_from_vectors(&[&[1.0, 2.0, 3.0], &[3.0, 1.0, -1.0]]);
        let coords = pca_project(&["w0", "w1"], &model, &vocab).unwrap();
        assert_eq!(coords.len(), 2);
        for (_, _, y) in &coords {
            assert!(y.abs() < 1e-9);
        }
        let sum_x: f64 = coords.iter().map(|c| c.1).sum();
        assert!(sum_x.abs() < 1e-10);
    }

    #[test]
    fn projection_centers_and_orders_components_by_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let vectors: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let refs: Vec<&[f64]> = vectors.iter().map(Vec::as_slice).collect();
        let (model, vocab) = model_from_vectors(&refs);
        let words: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let word_refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let coords = pca_project(&word_refs, &model, &vocab).unwrap();
        let mean_x: f64 = coords.iter().map(|c| c.1).sum::<f64>() / 10.0;
        let mean_y: f64 = coords.iter().map(|c| c.2).sum::<f64>() / 10.0;
        assert!(mean_x.abs() < 1e-10);
        assert!(mean_y.abs() < 1e-10);
        let var_x: f64 = coords.iter().map(|c| c.1 * c.1).sum();
        let var_y: f64 = coords.iter().map(|c| c.2 * c.2).sum();
        assert!(var_x >= var_y);
    }

    #[test]
    fn axis_cross_projects_onto_the_axes_with_positive_anchors() {
        let (model, vocab) = model_from_vectors(&[
            &[2.0, 0.0, 0.0],
            &[-2.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, -1.0, 0.0],
        ]);
        let coords = pca_project(&["w0", "w1", "w2", "w3"], &model, &vocab).unwrap();
        assert!((coords[0].1 - 2.0).abs() < 1e-9);
        assert!((coords[1].1 + 2.0).abs() < 1e-9);
        assert!(coords[0].2.abs() < 1e-9);
        assert!((coords[2].2 - 1.0).abs() < 1e-9);
        assert!((coords[3].2 + 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_projections_are_rejected() {
        let (model, vocab) = model_from_vectors(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(
            pca_project(&["w0", "w1"], &model, &vocab),
            Err(Error::RankDeficient { .. })
        ));
        let (m2, v2) = model_from_vectors(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(
            pca_project(&["w0"], &m2, &v2),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            pca_project(&["w0", "nope"], &m2, &v2),
            Err(Error::WordNotFound(_))
        ));
    }

    #[test]
    fn reports_round_trip_through_json_and_validate() {
        let mut config = BTreeMap::new();
        config.insert("dim".to_string(), "100".to_string());
        config.insert("seed.src".to_string(), "1".to_string());
        let mut report = EvalReport::new(
            config,
            Precision {
                value: 0.53,
                covered: 925,
                total: 1000,
            },
            Precision {
                value: 0.75,
                covered: 925,
                total: 1000,
            },
        );
        report.per_threshold = vec![
            SweepRow {
                threshold: 0.0,
                coverage: 0.925,
                covered: 925,
                total: 1000,
                p1: Some(0.53),
                p5: Some(0.75),
            },
            SweepRow {
                threshold: 0.7,
                coverage: 0.17,
                covered: 170,
                total: 1000,
                p1: Some(0.78),
                p5: Some(0.91),
            },
        ];
        report.notes.push("alternatives not scored".to_string());
        report.validate().unwrap();
        let json = report.to_json();
        let back = EvalReport::from_json(&json).unwrap();
        assert_eq!(report, back);
        assert_eq!(json, back.to_json());

        let mut bad = report.clone();
        bad.per_threshold.reverse();
        assert!(bad.validate().is_err());
    }

    fn ring_stream(words: &[String], sentences: usize) -> TokenStream {
        let n = words.len();
        let mut out = Vec::with_capacity(sentences);
        for s in 0..sentences {
            let sentence: Vec<String> =
                (0..n).map(|i| words[(i + s) % n].clone()).collect();
            out.push(sentence);
        }
        TokenStream::new(out)
    }

    #[test]
    fn data_size_rows_grow_with_the_prefix_and_repeat_deterministically() {
        let src_words: Vec<String> = (0..8).map(|i| format!("s{i}")).collect();
        let tgt_words: Vec<String> = (0..8).map(|i| format!("t{i}")).collect();
        let src_stream = ring_stream(&src_words, 40);
        let tgt_stream = ring_stream(&tgt_words, 40);
        let lexicon = split_dictionary_offset(
            Lexicon::from_rows(
                (0..8)
                    .map(|i| (format!("s{i}"), format!("t{i}"), Vec::new()))
                    .collect(),
            ),
            6,
            6,
            2,
        )
        .unwrap();
        let mut config = TrainConfig::new(Mode::Cbow, 7);
        config.dim = 8;
        config.window = 2;
        config.epochs = 2;
        let solver = MapSolver::ClosedForm { ridge: 1e-3 };
        let rows = data_size_curve(
            &src_stream,
            &tgt_stream,
            &[0.5, 1.0],
            &lexicon,
            &config,
            &config,
            1,
            &solver,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].source_tokens < rows[1].source_tokens);
        assert_eq!(rows[1].source_tokens, 320);
        for row in &rows {
            assert!((0.0..=1.0).contains(&row.p1));
            assert!(row.p5 >= row.p1);
            assert!(row.coverage > 0.0);
        }
        let again = data_size_curve(
            &src_stream,
            &tgt_stream,
            &[0.5, 1.0],
            &lexicon,
            &config,
            &config,
            1,
            &solver,
        )
        .unwrap();
        assert_eq!(rows, again);

        assert!(data_size_curve(
            &src_stream,
            &tgt_stream,
            &[1.0, 0.5],
            &lexicon,
            &config,
            &config,
            1,
            &solver,
        )
        .is_err());
    }
}
