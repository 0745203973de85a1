//! Linear map between two embedding spaces, learned from seed pairs by
//! minimizing the summed squared residual.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Vocabulary;
use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};

pub const DEFAULT_MAP_LR: f64 = 0.001;
pub const DEFAULT_MAP_EPOCHS: usize = 50;
pub const DEFAULT_MAP_DECAY: f64 = 0.99;

/// Dense d2×d1 matrix mapping source vectors into the target space.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationMatrix {
    w: Vec<f64>,
    d1: usize,
    d2: usize,
}

impl TranslationMatrix {
    pub fn zeros(d2: usize, d1: usize) -> Self {
        TranslationMatrix {
            w: vec![0.0; d1 * d2],
            d1,
            d2,
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d2 = rows.len();
        let d1 = rows.first().map_or(0, Vec::len);
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidConfig("matrix must be non-empty".into()));
        }
        let mut w = Vec::with_capacity(d1 * d2);
        for row in rows {
            if row.len() != d1 {
                return Err(Error::DimensionMismatch {
                    expected: d1,
                    actual: row.len(),
                });
            }
            w.extend(row);
        }
        Ok(TranslationMatrix { w, d1, d2 })
    }

    /// Source dimension.
    pub fn d1(&self) -> usize {
        self.d1
    }

    /// Target dimension.
    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.w[r * self.d1..(r + 1) * self.d1]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.w[r * self.d1 + c]
    }

    pub fn all_finite(&self) -> bool {
        self.w.iter().all(|x| x.is_finite())
    }

    fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let (d2, d1) = m.shape();
        let mut w = Vec::with_capacity(d1 * d2);
        for r in 0..d2 {
            for c in 0..d1 {
                w.push(m[(r, c)]);
            }
        }
        TranslationMatrix { w, d1, d2 }
    }
}

/// Apply the map: returns Wx.
pub fn map_vector(tm: &TranslationMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != tm.d1 {
        return Err(Error::DimensionMismatch {
            expected: tm.d1,
            actual: x.len(),
        });
    }
    Ok((0..tm.d2)
        .map(|r| tm.row(r).iter().zip(x).map(|(w, xi)| w * xi).sum())
        .collect())
}

/// One aligned training example: source vector, target vector, and the words
/// they came from.
#[derive(Debug, Clone)]
pub struct Pair {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub source: String,
    pub target: String,
}

/// The usable subset of a seed dictionary, plus how many entries were
/// dropped because one side was out of vocabulary.
#[derive(Debug, Clone)]
pub struct PairSet {
    pub pairs: Vec<Pair>,
    pub skipped: usize,
    pub d1: usize,
    pub d2: usize,
}

impl PairSet {
    pub fn new(pairs: Vec<Pair>, skipped: usize) -> Result<Self> {
        let first = pairs.first().ok_or(Error::NoUsablePairs)?;
        let (d1, d2) = (first.x.len(), first.z.len());
        for p in &pairs {
            if p.x.len() != d1 || p.z.len() != d2 {
                return Err(Error::DimensionMismatch {
                    expected: d1,
                    actual: p.x.len().min(p.z.len()),
                });
            }
        }
        Ok(PairSet {
            pairs,
            skipped,
            d1,
            d2,
        })
    }

    /// Fraction of dictionary entries with both sides in vocabulary.
    pub fn coverage(&self) -> f64 {
        self.pairs.len() as f64 / (self.pairs.len() + self.skipped) as f64
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Look up both sides of each dictionary entry; entries with a missing side
/// are counted as skipped. Duplicate entries yield duplicate pairs.
pub fn assemble_pairs<'a>(
    entries: impl IntoIterator<Item = (&'a str, &'a str)>,
    src_model: &EmbeddingModel,
    src_vocab: &Vocabulary,
    tgt_model: &EmbeddingModel,
    tgt_vocab: &Vocabulary,
) -> Result<PairSet> {
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for (source, target) in entries {
        match (src_vocab.id(source), tgt_vocab.id(target)) {
            (Some(s), Some(t)) => pairs.push(Pair {
                x: src_model.vector(s).to_vec(),
                z: tgt_model.vector(t).to_vec(),
                source: source.to_string(),
                target: target.to_string(),
            }),
            _ => skipped += 1,
        }
    }
    PairSet::new(pairs, skipped)
}

/// A matrix fitted by SGD together with its residual trace.
#[derive(Debug, Clone)]
pub struct SgdFit {
    pub matrix: TranslationMatrix,
    /// Mean squared residual over all pairs, measured after each epoch.
    pub mse_per_epoch: Vec<f64>,
}

impl SgdFit {
    pub fn final_mse(&self) -> f64 {
        self.mse_per_epoch.last().copied().unwrap_or(f64::NAN)
    }
}

/// Fit W by per-pair stochastic gradient steps W += lr·(z − Wx)·xᵀ, starting
/// from zeros, shuffling pair order each epoch, and decaying the rate by
/// `decay` per epoch.
pub fn learn_sgd(
    pairs: &PairSet,
    epochs: usize,
    lr: f64,
    decay: f64,
    seed: u64,
) -> Result<SgdFit> {
    if pairs.is_empty() {
        return Err(Error::NoUsablePairs);
    }
    if !(lr > 0.0 && lr.is_finite()) {
        return Err(Error::InvalidConfig("learning rate must be positive".into()));
    }
    if !(decay > 0.0 && decay <= 1.0) {
        return Err(Error::InvalidConfig("decay must be in (0, 1]".into()));
    }
    let (d1, d2) = (pairs.d1, pairs.d2);
    let mut w = TranslationMatrix::zeros(d2, d1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut rate = lr;
    let mut mse_per_epoch = Vec::with_capacity(epochs);
    let mut residual = vec![0.0; d2];
    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let pair = &pairs.pairs[i];
            for (r, res) in residual.iter_mut().enumerate() {
                let wx: f64 = w.row(r).iter().zip(&pair.x).map(|(wc, xc)| wc * xc).sum();
                *res = pair.z[r] - wx;
            }
            for (r, res) in residual.iter().enumerate() {
                let row = &mut w.w[r * d1..(r + 1) * d1];
                for (wc, xc) in row.iter_mut().zip(&pair.x) {
                    *wc += rate * res * xc;
                }
            }
        }
        let mse = mean_squared_residual(&w, pairs);
        if !mse.is_finite() {
            return Err(Error::Diverged { epoch: epoch + 1 });
        }
        mse_per_epoch.push(mse);
        rate *= decay;
    }
    Ok(SgdFit {
        matrix: w,
        mse_per_epoch,
    })
}

/// Mean over pairs of ‖Wx − z‖².
pub fn mean_squared_residual(w: &TranslationMatrix, pairs: &PairSet) -> f64 {
    let mut total = 0.0;
    for pair in &pairs.pairs {
        for r in 0..w.d2 {
            let wx: f64 = w.row(r).iter().zip(&pair.x).map(|(wc, xc)| wc * xc).sum();
            let diff = wx - pair.z[r];
            total += diff * diff;
        }
    }
    total / pairs.len() as f64
}

/// Solve the least-squares problem directly. With `ridge` > 0 this solves
/// the regularized normal equations; with `ridge` = 0 it returns the
/// minimal-norm solution via the pseudo-inverse, which also covers
/// rank-deficient data.
pub fn learn_closed_form(pairs: &PairSet, ridge: f64) -> Result<TranslationMatrix> {
    if pairs.is_empty() {
        return Err(Error::NoUsablePairs);
    }
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidConfig("ridge must be finite and >= 0".into()));
    }
    let n = pairs.len();
    let (d1, d2) = (pairs.d1, pairs.d2);
    let x = DMatrix::from_fn(n, d1, |i, j| pairs.pairs[i].x[j]);
    let z = DMatrix::from_fn(n, d2, |i, j| pairs.pairs[i].z[j]);
    let wt = if ridge > 0.0 {
        let gram = x.transpose() * &x + DMatrix::identity(d1, d1) * ridge;
        let rhs = x.transpose() * &z;
        nalgebra::Cholesky::new(gram)
            .ok_or_else(|| {
                Error::InvalidConfig("normal equations are not positive definite".into())
            })?
            .solve(&rhs)
    } else {
        let svd = x.svd(true, true);
        let tol = svd.singular_values.max() * n.max(d1) as f64 * f64::EPSILON;
        let pinv = svd
            .pseudo_inverse(tol)
            .map_err(|e| Error::InvalidConfig(e.into()))?;
        pinv * &z
    };
    Ok(TranslationMatrix::from_dmatrix(&wt.transpose()))
}
