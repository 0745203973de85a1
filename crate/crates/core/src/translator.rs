//! Translation by cosine retrieval in the target space, with confidence
//! scores and an optional edit-distance reranking of the candidate pool.

use crate::baselines::levenshtein;
use crate::corpus::Vocabulary;
use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};
use crate::mapping::{map_vector, TranslationMatrix};
use crate::vecops::{cosine_with_norm, l2_norm};

pub const DEFAULT_LAMBDA: f64 = 0.7;
pub const DEFAULT_RERANK_POOL: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationCandidate {
    pub word: String,
    pub cosine: f64,
    /// Present when edit-distance reranking is active.
    pub combined: Option<f64>,
}

/// Character-level similarity: 1 − levenshtein / max(len). Two empty tokens
/// count as identical.
pub fn ed_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / longest as f64
}

/// Weighted mix of retrieval and character similarity.
pub fn combined_score(source: &str, candidate: &str, cosine: f64, lambda: f64) -> f64 {
    lambda * cosine + (1.0 - lambda) * ed_similarity(source, candidate)
}

/// Read-only query interface over a fitted matrix and two embedding spaces.
/// Target vector norms are precomputed once, so each query is a single scan.
pub struct Translator<'a> {
    tm: &'a TranslationMatrix,
    src_model: &'a EmbeddingModel,
    src_vocab: &'a Vocabulary,
    tgt_model: &'a EmbeddingModel,
    tgt_vocab: &'a Vocabulary,
    tgt_norms: Vec<f64>,
}

impl<'a> Translator<'a> {
    pub fn new(
        tm: &'a TranslationMatrix,
        src_model: &'a EmbeddingModel,
        src_vocab: &'a Vocabulary,
        tgt_model: &'a EmbeddingModel,
        tgt_vocab: &'a Vocabulary,
    ) -> Result<Self> {
        if tm.d1() != src_model.dim() {
            return Err(Error::DimensionMismatch {
                expected: tm.d1(),
                actual: src_model.dim(),
            });
        }
        if tm.d2() != tgt_model.dim() {
            return Err(Error::DimensionMismatch {
                expected: tm.d2(),
                actual: tgt_model.dim(),
            });
        }
        if src_vocab.len() > src_model.vocab_size() {
            return Err(Error::IdOutOfRange {
                id: src_vocab.len() - 1,
                size: src_model.vocab_size(),
            });
        }
        if tgt_vocab.len() > tgt_model.vocab_size() {
            return Err(Error::IdOutOfRange {
                id: tgt_vocab.len() - 1,
                size: tgt_model.vocab_size(),
            });
        }
        let tgt_norms = (0..tgt_vocab.len())
            .map(|id| l2_norm(tgt_model.vector(id)))
            .collect();
        Ok(Translator {
            tm,
            src_model,
            src_vocab,
            tgt_model,
            tgt_vocab,
            tgt_norms,
        })
    }

    pub fn src_vocab(&self) -> &Vocabulary {
        self.src_vocab
    }

    pub fn tgt_vocab(&self) -> &Vocabulary {
        self.tgt_vocab
    }

    pub fn source_vector(&self, word: &str) -> Result<&[f64]> {
        let id = self
            .src_vocab
            .id(word)
            .ok_or_else(|| Error::WordNotFound(word.to_string()))?;
        Ok(self.src_model.vector(id))
    }

    pub fn target_vector(&self, word: &str) -> Result<&[f64]> {
        let id = self
            .tgt_vocab
            .id(word)
            .ok_or_else(|| Error::WordNotFound(word.to_string()))?;
        Ok(self.tgt_model.vector(id))
    }

    /// Wx for an in-vocabulary source word.
    pub fn mapped(&self, word: &str) -> Result<Vec<f64>> {
        map_vector(self.tm, self.source_vector(word)?)
    }

    /// Cosine of `z` against every target word, indexed by target id.
    pub fn cosine_scan(&self, z: &[f64]) -> Vec<f64> {
        let z_norm = l2_norm(z);
        (0..self.tgt_vocab.len())
            .map(|id| cosine_with_norm(z, z_norm, self.tgt_model.vector(id), self.tgt_norms[id]))
            .collect()
    }

    pub fn translate_topk(&self, word: &str, k: usize) -> Result<Vec<TranslationCandidate>> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        let z = self.mapped(word)?;
        Ok(self.rank_by_cosine(&z, k))
    }

    fn rank_by_cosine(&self, z: &[f64], k: usize) -> Vec<TranslationCandidate> {
        let scores = self.cosine_scan(z);
        let mut ids: Vec<usize> = (0..scores.len()).collect();
        ids.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        ids.truncate(k);
        ids.into_iter()
            .map(|id| TranslationCandidate {
                word: self.tgt_vocab.word(id).to_string(),
                cosine: scores[id],
                combined: None,
            })
            .collect()
    }

    /// Highest cosine any target word reaches against Wx. A zero mapped
    /// vector has no direction and scores −1.
    pub fn confidence(&self, word: &str) -> Result<f64> {
        let z = self.mapped(word)?;
        Ok(self.confidence_of_mapped(&z))
    }

    pub fn confidence_of_mapped(&self, z: &[f64]) -> f64 {
        self.cosine_scan(z)
            .into_iter()
            .fold(-1.0, f64::max)
    }

    /// `None` means the query abstained: confidence below `theta`. Ties at
    /// exactly `theta` are answered.
    pub fn translate_with_threshold(
        &self,
        word: &str,
        theta: f64,
        k: usize,
    ) -> Result<Option<Vec<TranslationCandidate>>> {
        if !(-1.0..=1.0).contains(&theta) {
            return Err(Error::InvalidConfig(
                "threshold must lie in [-1, 1]".into(),
            ));
        }
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        let z = self.mapped(word)?;
        let scores = self.cosine_scan(&z);
        let confidence = scores.iter().copied().fold(-1.0, f64::max);
        if confidence < theta {
            return Ok(None);
        }
        let mut ids: Vec<usize> = (0..scores.len()).collect();
        ids.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        ids.truncate(k);
        Ok(Some(
            ids.into_iter()
                .map(|id| TranslationCandidate {
                    word: self.tgt_vocab.word(id).to_string(),
                    cosine: scores[id],
                    combined: None,
                })
                .collect(),
        ))
    }

    /// Rerank the top-`pool` cosine candidates by the weighted combination
    /// of cosine and character similarity, then return the best `k`.
    pub fn translate_combined(
        &self,
        word: &str,
        lambda: f64,
        pool: usize,
        k: usize,
    ) -> Result<Vec<TranslationCandidate>> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidConfig("lambda must lie in [0, 1]".into()));
        }
        if pool == 0 || k == 0 {
            return Err(Error::InvalidConfig(
                "pool and k must be at least 1".into(),
            ));
        }
        let mut candidates = self.translate_topk(word, pool)?;
        for c in candidates.iter_mut() {
            c.combined = Some(combined_score(word, &c.word, c.cosine, lambda));
        }
        let rank_of = |w: &str| self.tgt_vocab.id(w).unwrap_or(usize::MAX);
        candidates.sort_by(|a, b| {
            b.combined
                .unwrap()
                .total_cmp(&a.combined.unwrap())
                .then_with(|| rank_of(&a.word).cmp(&rank_of(&b.word)))
        });
        candidates.truncate(k);
        Ok(candidates)
    }

    /// Confidence under reranking: the best combined score in the pool.
    pub fn combined_confidence(&self, word: &str, lambda: f64, pool: usize) -> Result<f64> {
        let top = self.translate_combined(word, lambda, pool, 1)?;
        Ok(top[0].combined.unwrap())
    }
}
