//! Huffman coding over word counts, driving the hierarchical softmax.

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

/// Prefix codes and root-to-leaf inner-node paths for every word.
///
/// Inner nodes are numbered by creation order, 0..V−2. `path(w)[d]` is the
/// inner node at which bit `code(w)[d]` decides the branch.
#[derive(Debug, Clone, PartialEq)]
pub struct HuffmanTree {
    codes: Vec<Vec<bool>>,
    paths: Vec<Vec<u32>>,
}

impl HuffmanTree {
    /// Number of words.
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Number of inner nodes, always |V| − 1.
    pub fn node_count(&self) -> usize {
        self.codes.len() - 1
    }

    pub fn code(&self, word: usize) -> &[bool] {
        &self.codes[word]
    }

    pub fn path(&self, word: usize) -> &[u32] {
        &self.paths[word]
    }

    pub fn code_len(&self, word: usize) -> usize {
        self.codes[word].len()
    }

    /// Reassemble a tree read back from a checkpoint.
    pub fn from_parts(codes: Vec<Vec<bool>>, paths: Vec<Vec<u32>>) -> Result<Self> {
        if codes.len() != paths.len() || codes.len() < 2 {
            return Err(Error::InvalidConfig(
                "code and path tables must have equal length >= 2".into(),
            ));
        }
        let node_count = codes.len() - 1;
        for (code, path) in codes.iter().zip(&paths) {
            if code.len() != path.len() || code.is_empty() {
                return Err(Error::InvalidConfig(
                    "every code must be non-empty and as long as its path".into(),
                ));
            }
            if path.iter().any(|&n| n as usize >= node_count) {
                return Err(Error::IdOutOfRange {
                    id: *path.iter().max().unwrap() as usize,
                    size: node_count,
                });
            }
        }
        Ok(HuffmanTree { codes, paths })
    }
}

/// Build the Huffman tree for a vocabulary.
///
/// Counts are already sorted descending by id, so the two smallest elements
/// are always found at two moving frontiers: one over the words from the
/// rarest up, one over the inner nodes in creation order. Equal counts
/// resolve deterministically (rarest rank first, then oldest inner node).
pub fn build_huffman(vocab: &Vocabulary) -> Result<HuffmanTree> {
    let v = vocab.len();
    if v < 2 {
        return Err(Error::VocabTooSmall {
            size: v,
            required: 2,
        });
    }
    let mut count = vec![0u64; 2 * v - 1];
    count[..v].copy_from_slice(vocab.counts());

    let mut parent = vec![0usize; 2 * v - 1];
    let mut branch = vec![false; 2 * v - 1];
    let mut word_pos = v as isize - 1;
    let mut node_pos = v;
    for step in 0..v - 1 {
        let next = v + step;
        let min1 = pick_smallest(&count, &mut word_pos, &mut node_pos, next);
        let min2 = pick_smallest(&count, &mut word_pos, &mut node_pos, next);
        count[next] = count[min1] + count[min2];
        parent[min1] = next;
        parent[min2] = next;
        branch[min2] = true;
    }

    let root = 2 * v - 2;
    let mut codes = Vec::with_capacity(v);
    let mut paths = Vec::with_capacity(v);
    for word in 0..v {
        let mut code = Vec::new();
        let mut path = Vec::new();
        let mut node = word;
        while node != root {
            code.push(branch[node]);
            path.push((parent[node] - v) as u32);
            node = parent[node];
        }
        code.reverse();
        path.reverse();
        codes.push(code);
        paths.push(path);
    }
    Ok(HuffmanTree { codes, paths })
}

/// Take the smaller of the current word (descending-count order walked
/// backwards) and the current inner node; inner nodes win ties. Only nodes
/// below `limit` exist yet.
fn pick_smallest(count: &[u64], word_pos: &mut isize, node_pos: &mut usize, limit: usize) -> usize {
    let word_available = *word_pos >= 0;
    let node_available = *node_pos < limit;
    let take_word = word_available
        && (!node_available || count[*word_pos as usize] < count[*node_pos]);
    if take_word {
        let i = *word_pos as usize;
        *word_pos -= 1;
        i
    } else {
        debug_assert!(node_available);
        let i = *node_pos;
        *node_pos += 1;
        i
    }
}
