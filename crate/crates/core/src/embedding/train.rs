//! Corpus-level SGD over sentences, single- or multi-worker.

use std::cell::Cell;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::huffman::{build_huffman, HuffmanTree};
use super::{EmbeddingModel, Mode, TrainConfig};
use crate::corpus::{TokenStream, Vocabulary};
use crate::error::{Error, Result};

/// Parameter storage the gradient kernel can read and update. Implementations
/// differ only in how updates land, so the kernel is written once.
pub(crate) trait Params {
    fn get(&self, i: usize) -> f64;
    fn add(&self, i: usize, delta: f64);
}

/// Exclusive single-threaded view; every update is applied exactly.
pub(crate) struct CellParams<'a>(pub &'a [Cell<f64>]);

impl Params for CellParams<'_> {
    fn get(&self, i: usize) -> f64 {
        self.0[i].get()
    }

    fn add(&self, i: usize, delta: f64) {
        let cell = &self.0[i];
        cell.set(cell.get() + delta);
    }
}

/// Shared lock-free view for multi-worker training. The read-modify-write is
/// not atomic as a whole: colliding workers may lose updates, which the
/// accuracy contract tolerates.
struct AtomicParams<'a>(&'a [AtomicU64]);

impl Params for AtomicParams<'_> {
    fn get(&self, i: usize) -> f64 {
        f64::from_bits(self.0[i].load(Ordering::Relaxed))
    }

    fn add(&self, i: usize, delta: f64) {
        let v = f64::from_bits(self.0[i].load(Ordering::Relaxed)) + delta;
        self.0[i].store(v.to_bits(), Ordering::Relaxed);
    }
}

/// Per-worker reusable buffers: condition vector, accumulated input gradient,
/// and the current context ids.
pub(crate) struct Scratch {
    pub h: Vec<f64>,
    pub e: Vec<f64>,
    ctx: Vec<usize>,
}

impl Scratch {
    pub fn new(dim: usize) -> Self {
        Scratch {
            h: vec![0.0; dim],
            e: vec![0.0; dim],
            ctx: Vec::new(),
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Walk `target`'s path: update each node vector and accumulate the
/// rate-scaled gradient with respect to the condition `h` into `e`. Node
/// reads happen before the node's own update, so both sides of the step see
/// pre-step values.
fn propagate<P: Params>(
    nodes: &P,
    tree: &HuffmanTree,
    dim: usize,
    target: usize,
    h: &[f64],
    e: &mut [f64],
    lr: f64,
) {
    e.fill(0.0);
    let code = tree.code(target);
    for (d, &node) in tree.path(target).iter().enumerate() {
        let base = node as usize * dim;
        let mut a = 0.0;
        for (j, hj) in h.iter().enumerate() {
            a += nodes.get(base + j) * hj;
        }
        let label = if code[d] { 0.0 } else { 1.0 };
        let g = (label - sigmoid(a)) * lr;
        for (j, hj) in h.iter().enumerate() {
            e[j] += g * nodes.get(base + j);
            nodes.add(base + j, g * hj);
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn cbow_step<P: Params>(
    inputs: &P,
    nodes: &P,
    tree: &HuffmanTree,
    dim: usize,
    center: usize,
    context: &[usize],
    lr: f64,
    scratch: &mut Scratch,
) {
    if context.is_empty() {
        return;
    }
    let inv = 1.0 / context.len() as f64;
    scratch.h.fill(0.0);
    for &c in context {
        let base = c * dim;
        for (j, hj) in scratch.h.iter_mut().enumerate() {
            *hj += inputs.get(base + j);
        }
    }
    for hj in scratch.h.iter_mut() {
        *hj *= inv;
    }
    propagate(nodes, tree, dim, center, &scratch.h, &mut scratch.e, lr);
    for &c in context {
        let base = c * dim;
        for (j, ej) in scratch.e.iter().enumerate() {
            inputs.add(base + j, ej * inv);
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn skipgram_step<P: Params>(
    inputs: &P,
    nodes: &P,
    tree: &HuffmanTree,
    dim: usize,
    center: usize,
    target: usize,
    lr: f64,
    scratch: &mut Scratch,
) {
    let base = center * dim;
    for (j, hj) in scratch.h.iter_mut().enumerate() {
        *hj = inputs.get(base + j);
    }
    propagate(nodes, tree, dim, target, &scratch.h, &mut scratch.e, lr);
    for (j, &ej) in scratch.e.iter().enumerate() {
        inputs.add(base + j, ej);
    }
}

/// Train a fresh model over the stream.
pub fn train(stream: &TokenStream, vocab: &Vocabulary, config: &TrainConfig) -> Result<EmbeddingModel> {
    let tree = build_huffman(vocab)?;
    let model = EmbeddingModel::init(
        vocab.len(),
        tree.node_count(),
        config.dim,
        config.mode,
        config.seed,
    );
    train_from(model, &tree, stream, vocab, config)
}

/// Continue training an existing model, e.g. one restored from a checkpoint.
///
/// Out-of-vocabulary tokens are skipped. Per position a window radius is
/// drawn uniformly from 1..=k, clipped at sentence boundaries. The learning
/// rate decays linearly from `initial_lr` to `min_lr` over all scheduled
/// positions (epochs × in-vocabulary tokens). With `workers = 1` and a fixed
/// seed the result is bit-reproducible; more workers trade determinism for
/// throughput.
pub fn train_from(
    model: EmbeddingModel,
    tree: &HuffmanTree,
    stream: &TokenStream,
    vocab: &Vocabulary,
    config: &TrainConfig,
) -> Result<EmbeddingModel> {
    config.validate()?;
    if model.vocab_size() != vocab.len()
        || tree.len() != vocab.len()
        || model.node_count() != tree.node_count()
        || model.dim() != config.dim
    {
        return Err(Error::DimensionMismatch {
            expected: vocab.len(),
            actual: model.vocab_size(),
        });
    }
    if model.mode() != config.mode {
        return Err(Error::InvalidConfig(format!(
            "model was initialized for {} but config says {}",
            model.mode(),
            config.mode
        )));
    }

    let sentences: Vec<Vec<u32>> = stream
        .sentences
        .iter()
        .map(|s| s.iter().filter_map(|t| vocab.id(t).map(|id| id as u32)).collect())
        .filter(|s: &Vec<u32>| !s.is_empty())
        .collect();
    let total_positions: u64 = sentences.iter().map(|s| s.len() as u64).sum();
    if total_positions == 0 {
        return Err(Error::EmptyCorpus);
    }
    let scheduled = (config.epochs as u64 * total_positions).max(1) as f64;
    let progress = AtomicU64::new(0);

    let (mut input_raw, mut node_raw, dim, mode) = model.into_raw();
    if config.workers == 1 {
        let inputs = CellParams(Cell::from_mut(input_raw.as_mut_slice()).as_slice_of_cells());
        let nodes = CellParams(Cell::from_mut(node_raw.as_mut_slice()).as_slice_of_cells());
        run_worker(
            &inputs, &nodes, tree, &sentences, config, scheduled, &progress, 0,
        );
    } else {
        let input_atomic: Vec<AtomicU64> =
            input_raw.iter().map(|&x| AtomicU64::new(x.to_bits())).collect();
        let node_atomic: Vec<AtomicU64> =
            node_raw.iter().map(|&x| AtomicU64::new(x.to_bits())).collect();
        let shares = split_evenly(&sentences, config.workers);
        std::thread::scope(|scope| {
            for (w, share) in shares.into_iter().enumerate() {
                let input_ref = &input_atomic;
                let node_ref = &node_atomic;
                let progress_ref = &progress;
                scope.spawn(move || {
                    let inputs = AtomicParams(input_ref);
                    let nodes = AtomicParams(node_ref);
                    run_worker(
                        &inputs,
                        &nodes,
                        tree,
                        share,
                        config,
                        scheduled,
                        progress_ref,
                        w as u64,
                    );
                });
            }
        });
        for (dst, src) in input_raw.iter_mut().zip(&input_atomic) {
            *dst = f64::from_bits(src.load(Ordering::Relaxed));
        }
        for (dst, src) in node_raw.iter_mut().zip(&node_atomic) {
            *dst = f64::from_bits(src.load(Ordering::Relaxed));
        }
    }

    let trained = EmbeddingModel::from_raw(input_raw, node_raw, dim, mode);
    if !trained.all_finite() {
        return Err(Error::Diverged {
            epoch: config.epochs,
        });
    }
    Ok(trained)
}

#[allow(clippy::too_many_arguments)]
fn run_worker<P: Params>(
    inputs: &P,
    nodes: &P,
    tree: &HuffmanTree,
    sentences: &[Vec<u32>],
    config: &TrainConfig,
    scheduled: f64,
    progress: &AtomicU64,
    worker: u64,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(worker + 1);
    let mut scratch = Scratch::new(config.dim);
    for _ in 0..config.epochs {
        for sentence in sentences {
            for t in 0..sentence.len() {
                let done = progress.fetch_add(1, Ordering::Relaxed);
                let lr = (config.initial_lr * (1.0 - done as f64 / scheduled)).max(config.min_lr);
                let radius = rng.random_range(1..=config.window);
                let lo = t.saturating_sub(radius);
                let hi = (t + radius).min(sentence.len() - 1);
                let center = sentence[t] as usize;
                match config.mode {
                    Mode::Cbow => {
                        scratch.ctx.clear();
                        for (c, &word) in sentence[lo..=hi].iter().enumerate() {
                            if lo + c != t {
                                scratch.ctx.push(word as usize);
                            }
                        }
                        let ctx = std::mem::take(&mut scratch.ctx);
                        cbow_step(inputs, nodes, tree, config.dim, center, &ctx, lr, &mut scratch);
                        scratch.ctx = ctx;
                    }
                    Mode::SkipGram => {
                        for (c, &word) in sentence[lo..=hi].iter().enumerate() {
                            if lo + c != t {
                                skipgram_step(
                                    inputs,
                                    nodes,
                                    tree,
                                    config.dim,
                                    center,
                                    word as usize,
                                    lr,
                                    &mut scratch,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Contiguous sentence shares with roughly equal token counts.
fn split_evenly(sentences: &[Vec<u32>], workers: usize) -> Vec<&[Vec<u32>]> {
    let total: u64 = sentences.iter().map(|s| s.len() as u64).sum();
    let per_share = total.div_ceil(workers as u64).max(1);
    let mut shares = Vec::with_capacity(workers);
    let mut start = 0;
    let mut run = 0u64;
    for (i, sentence) in sentences.iter().enumerate() {
        run += sentence.len() as u64;
        if run >= per_share {
            shares.push(&sentences[start..=i]);
            start = i + 1;
            run = 0;
        }
    }
    if start < sentences.len() {
        shares.push(&sentences[start..]);
    }
    shares
}
