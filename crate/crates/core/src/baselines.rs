//! Reference techniques: morphological edit distance and mapped
//! co-occurrence count vectors.

use std::collections::{HashMap, HashSet};

use crate::corpus::{TokenStream, Vocabulary};
use crate::error::{Error, Result};
use crate::vecops::{cosine, l2_norm};

pub const DEFAULT_COOC_WINDOW: usize = 10;

/// Tracked target words default to this many of the most frequent.
pub const DEFAULT_COOC_TRACKED: usize = 50_000;

/// Unit-cost insert/delete/substitute distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Rank the whole target vocabulary by ascending edit distance to `source`.
/// Ties go to the more frequent target word.
pub fn ed_translate(source: &str, tgt_vocab: &Vocabulary, k: usize) -> Result<Vec<(String, usize)>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let mut scored: Vec<(usize, usize)> = (0..tgt_vocab.len())
        .map(|id| (id, levenshtein(source, tgt_vocab.word(id))))
        .collect();
    scored.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored
        .into_iter()
        .map(|(id, d)| (tgt_vocab.word(id).to_string(), d))
        .collect())
}

/// Dense counts over the dictionary axes for one word.
#[derive(Debug, Clone, PartialEq)]
pub struct CountVector {
    pub word: String,
    pub counts: Vec<f64>,
    pub normalized: bool,
}

impl CountVector {
    pub fn new(word: String, counts: Vec<f64>) -> Self {
        CountVector {
            word,
            counts,
            normalized: false,
        }
    }

    /// A word that never co-occurred with any dictionary word cannot be
    /// translated by this baseline.
    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0.0)
    }
}

/// Count, for every word in the stream, how often each dictionary word
/// occurs within `window` positions in the same sentence.
pub fn build_cooc(
    stream: &TokenStream,
    dict_words: &[String],
    window: usize,
) -> Result<HashMap<String, CountVector>> {
    build_cooc_tracked(stream, dict_words, window, None)
}

/// As `build_cooc`, but only words in `tracked` get vectors. Tracked words
/// that appear in the stream always get a vector, even an all-zero one.
pub fn build_cooc_tracked(
    stream: &TokenStream,
    dict_words: &[String],
    window: usize,
    tracked: Option<&HashSet<String>>,
) -> Result<HashMap<String, CountVector>> {
    if window == 0 {
        return Err(Error::InvalidConfig("window must be at least 1".into()));
    }
    if dict_words.is_empty() {
        return Err(Error::InvalidConfig("dictionary axes must be non-empty".into()));
    }
    let mut axis: HashMap<&str, usize> = HashMap::with_capacity(dict_words.len());
    for (i, w) in dict_words.iter().enumerate() {
        if axis.insert(w.as_str(), i).is_some() {
            return Err(Error::InvalidConfig(format!(
                "duplicate dictionary axis '{w}'"
            )));
        }
    }
    let dim = dict_words.len();
    let mut vectors: HashMap<String, Vec<f64>> = HashMap::new();
    let mut axis_ids: Vec<Option<usize>> = Vec::new();
    for sentence in &stream.sentences {
        axis_ids.clear();
        axis_ids.extend(sentence.iter().map(|t| axis.get(t.as_str()).copied()));
        for (t, word) in sentence.iter().enumerate() {
            if let Some(set) = tracked {
                if !set.contains(word) {
                    continue;
                }
            }
            let counts = vectors
                .entry(word.clone())
                .or_insert_with(|| vec![0.0; dim]);
            let lo = t.saturating_sub(window);
            let hi = (t + window).min(sentence.len() - 1);
            for (s, axis_id) in axis_ids[lo..=hi].iter().enumerate() {
                if lo + s == t {
                    continue;
                }
                if let Some(a) = axis_id {
                    counts[*a] += 1.0;
                }
            }
        }
    }
    Ok(vectors
        .into_iter()
        .map(|(word, counts)| {
            let v = CountVector::new(word.clone(), counts);
            (word, v)
        })
        .collect())
}

/// Rescale counts by the corpus size ratio, damp with log1p, and project to
/// the unit sphere. An all-zero vector stays zero and keeps its flag
/// readable through `is_zero`. Applied exactly once per vector.
pub fn normalize_counts(v: &CountVector, size_ratio: f64) -> CountVector {
    assert!(
        size_ratio > 0.0 && size_ratio.is_finite(),
        "size ratio must be a positive ratio of corpus sizes"
    );
    assert!(!v.normalized, "counts are already normalized");
    let mut counts: Vec<f64> = v.counts.iter().map(|&c| (c / size_ratio).ln_1p()).collect();
    let norm = l2_norm(&counts);
    if norm > 0.0 {
        for c in counts.iter_mut() {
            *c /= norm;
        }
    }
    CountVector {
        word: v.word.clone(),
        counts,
        normalized: true,
    }
}

/// Deduplicated axis lists implied by a dictionary: source words in first
/// appearance order, and likewise target words.
pub fn dictionary_axes(dictionary: &[(String, String)]) -> (Vec<String>, Vec<String>) {
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut seen_src = HashSet::new();
    let mut seen_tgt = HashSet::new();
    for (s, t) in dictionary {
        if seen_src.insert(s.as_str()) {
            src.push(s.clone());
        }
        if seen_tgt.insert(t.as_str()) {
            tgt.push(t.clone());
        }
    }
    (src, tgt)
}

/// Translate by re-indexing the source count vector through the dictionary
/// (source axis -> its first-listed translation's target axis, collisions
/// adding up) and scanning all target count vectors by cosine.
/// `tgt_vectors` must be ordered by target frequency rank, which also
/// resolves ties. Returns `None` when the source vector is all zero.
pub fn cooc_translate(
    test_word: &str,
    src_vectors: &HashMap<String, CountVector>,
    tgt_vectors: &[CountVector],
    dictionary: &[(String, String)],
    k: usize,
) -> Result<Option<Vec<(String, f64)>>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let source = src_vectors
        .get(test_word)
        .ok_or_else(|| Error::WordNotFound(test_word.to_string()))?;
    let (src_axes, tgt_axes) = dictionary_axes(dictionary);
    if source.counts.len() != src_axes.len() {
        return Err(Error::DimensionMismatch {
            expected: src_axes.len(),
            actual: source.counts.len(),
        });
    }
    if source.is_zero() {
        return Ok(None);
    }
    let tgt_axis_index: HashMap<&str, usize> = tgt_axes
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let mut first_translation: HashMap<&str, &str> = HashMap::new();
    for (s, t) in dictionary {
        first_translation.entry(s.as_str()).or_insert(t.as_str());
    }
    let mut mapped = vec![0.0; tgt_axes.len()];
    for (i, s) in src_axes.iter().enumerate() {
        let t = first_translation[s.as_str()];
        mapped[tgt_axis_index[t]] += source.counts[i];
    }
    let mut scored: Vec<(usize, f64)> = Vec::with_capacity(tgt_vectors.len());
    for (rank, tv) in tgt_vectors.iter().enumerate() {
        if tv.counts.len() != tgt_axes.len() {
            return Err(Error::DimensionMismatch {
                expected: tgt_axes.len(),
                actual: tv.counts.len(),
            });
        }
        scored.push((rank, cosine(&mapped, &tv.counts)));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(Some(
        scored
            .into_iter()
            .map(|(rank, c)| (tgt_vectors[rank].word.clone(), c))
            .collect(),
    ))
}
