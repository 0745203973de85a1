//! CBOW and Skip-gram word vectors trained with a hierarchical softmax.

pub mod huffman;
mod train;

pub use huffman::{build_huffman, HuffmanTree};
pub use train::{train, train_from};

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::vecops;

pub const DEFAULT_CBOW_LR: f64 = 0.05;
pub const DEFAULT_SKIPGRAM_LR: f64 = 0.025;

/// The floor of the learning-rate decay, as a fraction of the initial rate.
pub const DEFAULT_MIN_LR_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Predict the center word from the mean of its context vectors.
    Cbow,
    /// Predict each context word from the center word's vector.
    SkipGram,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Cbow => "cbow",
            Mode::SkipGram => "skipgram",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cbow" => Ok(Mode::Cbow),
            "skipgram" => Ok(Mode::SkipGram),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode {other:?}; expected cbow or skipgram"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub mode: Mode,
    pub dim: usize,
    /// Maximum window radius k; the effective radius is drawn per position
    /// from 1..=k.
    pub window: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub min_lr: f64,
    pub seed: u64,
    pub workers: usize,
}

impl TrainConfig {
    pub fn new(mode: Mode, seed: u64) -> Self {
        let initial_lr = match mode {
            Mode::Cbow => DEFAULT_CBOW_LR,
            Mode::SkipGram => DEFAULT_SKIPGRAM_LR,
        };
        TrainConfig {
            mode,
            dim: 100,
            window: 10,
            epochs: 5,
            initial_lr,
            min_lr: DEFAULT_MIN_LR_FRACTION * initial_lr,
            seed,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidConfig("window must be at least 1".into()));
        }
        if !(self.min_lr > 0.0 && self.min_lr <= self.initial_lr) {
            return Err(Error::InvalidConfig(
                "learning rates must satisfy 0 < min_lr <= initial_lr".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-word input vectors plus the inner-node vectors of the hierarchical
/// softmax, both stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    input_vectors: Vec<f64>,
    node_vectors: Vec<f64>,
    dim: usize,
    mode: Mode,
}

impl EmbeddingModel {
    /// Fresh model: input vectors uniform in [−0.5/d, 0.5/d] from the seeded
    /// generator, node vectors zero (so initial probabilities are exactly
    /// 2^−code_length).
    pub fn init(vocab_size: usize, node_count: usize, dim: usize, mode: Mode, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = 0.5 / dim as f64;
        let input_vectors = (0..vocab_size * dim)
            .map(|_| rng.random_range(-half..half))
            .collect();
        EmbeddingModel {
            input_vectors,
            node_vectors: vec![0.0; node_count * dim],
            dim,
            mode,
        }
    }

    /// Assemble from raw row-major storage. A model without node vectors is
    /// valid for retrieval but cannot score probabilities or train.
    pub fn from_parts(
        input_vectors: Vec<f64>,
        node_vectors: Vec<f64>,
        dim: usize,
        mode: Mode,
    ) -> Result<Self> {
        if dim == 0
            || !input_vectors.len().is_multiple_of(dim)
            || !node_vectors.len().is_multiple_of(dim)
        {
            return Err(Error::DimensionMismatch {
                expected: dim.max(1),
                actual: input_vectors.len() % dim.max(1),
            });
        }
        Ok(EmbeddingModel {
            input_vectors,
            node_vectors,
            dim,
            mode,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.input_vectors.len() / self.dim
    }

    pub fn node_count(&self) -> usize {
        self.node_vectors.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vector(&self, id: usize) -> &[f64] {
        &self.input_vectors[id * self.dim..(id + 1) * self.dim]
    }

    pub fn vector_mut(&mut self, id: usize) -> &mut [f64] {
        &mut self.input_vectors[id * self.dim..(id + 1) * self.dim]
    }

    pub fn node_vector(&self, node: usize) -> &[f64] {
        &self.node_vectors[node * self.dim..(node + 1) * self.dim]
    }

    pub fn node_vector_mut(&mut self, node: usize) -> &mut [f64] {
        &mut self.node_vectors[node * self.dim..(node + 1) * self.dim]
    }

    pub fn all_finite(&self) -> bool {
        self.input_vectors.iter().all(|x| x.is_finite())
            && self.node_vectors.iter().all(|x| x.is_finite())
    }

    pub(crate) fn into_raw(self) -> (Vec<f64>, Vec<f64>, usize, Mode) {
        (self.input_vectors, self.node_vectors, self.dim, self.mode)
    }

    pub(crate) fn from_raw(
        input_vectors: Vec<f64>,
        node_vectors: Vec<f64>,
        dim: usize,
        mode: Mode,
    ) -> Self {
        EmbeddingModel {
            input_vectors,
            node_vectors,
            dim,
            mode,
        }
    }
}

/// ln σ(x), stable on both tails.
fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Log-probability of `target` given an arbitrary condition vector: the sum
/// over the target's path of ln σ(±⟨node, condition⟩), sign chosen by the
/// code bit. Exponentiated over the whole vocabulary these sum to 1.
pub fn log_prob(
    model: &EmbeddingModel,
    tree: &HuffmanTree,
    target: usize,
    condition: &[f64],
) -> Result<f64> {
    if target >= tree.len() || target >= model.vocab_size() {
        return Err(Error::IdOutOfRange {
            id: target,
            size: tree.len().min(model.vocab_size()),
        });
    }
    if condition.len() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            actual: condition.len(),
        });
    }
    if model.node_count() < tree.node_count() {
        return Err(Error::DimensionMismatch {
            expected: tree.node_count(),
            actual: model.node_count(),
        });
    }
    Ok(log_prob_unchecked(model, tree, target, condition))
}

fn log_prob_unchecked(
    model: &EmbeddingModel,
    tree: &HuffmanTree,
    target: usize,
    condition: &[f64],
) -> f64 {
    let code = tree.code(target);
    let mut total = 0.0;
    for (d, &node) in tree.path(target).iter().enumerate() {
        let a = vecops::dot(model.node_vector(node as usize), condition);
        let sign = if code[d] { -1.0 } else { 1.0 };
        total += log_sigmoid(sign * a);
    }
    total
}

/// One stochastic gradient step on a (center, context) example at rate `lr`.
///
/// Only the involved input rows and the path's node rows change, and all
/// gradients are evaluated at the pre-step parameter values.
pub fn train_pair(
    model: &mut EmbeddingModel,
    tree: &HuffmanTree,
    center: usize,
    context: &[usize],
    lr: f64,
) -> Result<()> {
    let vocab_size = model.vocab_size();
    if tree.len() != vocab_size || model.node_count() < tree.node_count() {
        return Err(Error::DimensionMismatch {
            expected: tree.len(),
            actual: vocab_size,
        });
    }
    for &id in std::iter::once(&center).chain(context) {
        if id >= vocab_size {
            return Err(Error::IdOutOfRange {
                id,
                size: vocab_size,
            });
        }
    }
    let dim = model.dim;
    let mode = model.mode;
    let mut scratch = train::Scratch::new(dim);
    let input_cells = Cell::from_mut(model.input_vectors.as_mut_slice()).as_slice_of_cells();
    let node_cells = Cell::from_mut(model.node_vectors.as_mut_slice()).as_slice_of_cells();
    let inputs = train::CellParams(input_cells);
    let nodes = train::CellParams(node_cells);
    match mode {
        Mode::Cbow => train::cbow_step(&inputs, &nodes, tree, dim, center, context, lr, &mut scratch),
        Mode::SkipGram => {
            for &target in context {
                train::skipgram_step(&inputs, &nodes, tree, dim, center, target, lr, &mut scratch);
            }
        }
    }
    Ok(())
}

/// Top-n words by cosine similarity to `word`, excluding the word itself.
/// Ties resolve toward the more frequent word.
pub fn nearest_neighbors(
    model: &EmbeddingModel,
    vocab: &Vocabulary,
    word: &str,
    n: usize,
) -> Result<Vec<(String, f64)>> {
    if vocab.len() != model.vocab_size() {
        return Err(Error::DimensionMismatch {
            expected: vocab.len(),
            actual: model.vocab_size(),
        });
    }
    let id = vocab
        .id(word)
        .ok_or_else(|| Error::WordNotFound(word.to_string()))?;
    let query = model.vector(id);
    let query_norm = vecops::l2_norm(query);
    let mut scored: Vec<(usize, f64)> = (0..vocab.len())
        .filter(|&i| i != id)
        .map(|i| {
            let v = model.vector(i);
            (i, vecops::cosine_with_norm(query, query_norm, v, vecops::l2_norm(v)))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(n);
    Ok(scored
        .into_iter()
        .map(|(i, c)| (vocab.word(i).to_string(), c))
        .collect())
}
