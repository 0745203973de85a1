#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn bilex() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bilex"))
}

/// The binary with its working directory pinned, so tests that compare
/// artifacts produced in different directories stay honest.
pub fn bilex_in(dir: &Path) -> Command {
    let mut cmd = bilex();
    cmd.current_dir(dir);
    cmd
}

pub fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary should spawn")
}

/// Run to completion, demand success, and hand back stdout.
pub fn run_ok(cmd: &mut Command) -> String {
    let out = run(cmd);
    assert!(
        out.status.success(),
        "command exited with {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr),
    );
    String::from_utf8(out.stdout).expect("stdout should be UTF-8")
}

pub fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process should exit, not be killed")
}

pub fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn write_lines(path: &Path, lines: &[String]) {
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(path, text).expect("test fixture should be writable");
}

/// Tiny two-language setup for driving the binary: a 30-word source language
/// with skewed frequencies, and a target twin obtained by suffixing every
/// token, so the gold lexicon is known by construction.
pub mod toy {
    use super::*;

    pub const VOCAB: usize = 30;
    pub const SUFFIX: &str = "zz";

    pub fn word(i: usize) -> String {
        const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
        const VOWELS: &[u8] = b"aeiou";
        let syllable = |j: usize| {
            [
                CONSONANTS[j / VOWELS.len()] as char,
                VOWELS[j % VOWELS.len()] as char,
            ]
        };
        let mut w = String::new();
        w.extend(syllable(2 * i));
        w.extend(syllable(2 * i + 1));
        w
    }

    pub fn source_lines(seed: u64, n_sentences: usize) -> Vec<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<String> = (0..VOCAB).map(word).collect();
        let cumulative: Vec<f64> = (0..VOCAB)
            .scan(0.0, |acc, i| {
                *acc += 1.0 / (i as f64 + 1.5);
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().unwrap();
        (0..n_sentences)
            .map(|_| {
                let len = rng.random_range(8..=14);
                let sentence: Vec<&str> = (0..len)
                    .map(|_| {
                        let t = rng.random_range(0.0..total);
                        words[cumulative.partition_point(|&c| c <= t)].as_str()
                    })
                    .collect();
                sentence.join(" ")
            })
            .collect()
    }

    pub fn cipher_lines(lines: &[String]) -> Vec<String> {
        lines
            .iter()
            .map(|line| {
                line.split(' ')
                    .map(|t| format!("{t}{SUFFIX}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }

    /// Gold pairs in source-frequency order.
    pub fn lexicon_lines() -> Vec<String> {
        (0..VOCAB)
            .map(|i| {
                let w = word(i);
                format!("{w}\t{w}{SUFFIX}")
            })
            .collect()
    }
}

/// Synthetic-language corpus large and structured enough to train useful
/// embeddings. Unigram frequencies follow a Zipf law over a syllabic
/// vocabulary, and each word prefers a small private set of successors, so
/// words are distinguishable by their contexts. The second language is a
/// token-for-token suffixed twin of the first, which makes the gold lexicon
/// exact and keeps both vocabularies aligned rank for rank.
pub mod synth {
    use super::*;
    use bilex::corpus::TokenStream;
    use rand_distr::Zipf;

    pub const VOCAB: usize = 16_000;
    pub const SUFFIX: &str = "_c";
    const ZIPF_EXPONENT: f64 = 1.05;
    const SUCCESSORS: usize = 20;
    const SUCCESSOR_BIAS: f64 = 0.7;

    /// The id-th vocabulary form: two syllables for the first 8100 ids,
    /// three beyond, so every id maps to a distinct all-letter token. The
    /// suffixed twin of a form never collides with another twin, and the
    /// suffix starts below 'a', so suffixing preserves lexicographic order.
    pub fn vocab_word(i: usize) -> String {
        const CONSONANTS: &[u8] = b"bcdfghjklmnpqrstvz";
        const VOWELS: &[u8] = b"aeiou";
        let n_syl = CONSONANTS.len() * VOWELS.len();
        let syllable = |j: usize| {
            [
                CONSONANTS[j / VOWELS.len()] as char,
                VOWELS[j % VOWELS.len()] as char,
            ]
        };
        let two = n_syl * n_syl;
        let mut w = String::new();
        if i < two {
            w.extend(syllable(i / n_syl));
            w.extend(syllable(i % n_syl));
        } else {
            let j = i - two;
            w.extend(syllable(j / two));
            w.extend(syllable((j / n_syl) % n_syl));
            w.extend(syllable(j % n_syl));
        }
        w
    }

    pub struct TwinCorpus {
        pub src: TokenStream,
        pub tgt: TokenStream,
        /// Size of the source corpus rendered as one-sentence-per-line text.
        pub text_bytes: usize,
    }

    pub fn generate(seed: u64, min_text_bytes: usize) -> TwinCorpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zipf = Zipf::new(VOCAB as f64, ZIPF_EXPONENT).expect("valid Zipf parameters");
        let words: Vec<String> = (0..VOCAB).map(vocab_word).collect();
        let successors: Vec<[u32; SUCCESSORS]> = (0..VOCAB)
            .map(|_| std::array::from_fn(|_| rng.sample(zipf) as u32 - 1))
            .collect();
        let mut sentences = Vec::new();
        let mut bytes = 0usize;
        while bytes < min_text_bytes {
            let len = rng.random_range(10..=30);
            let mut sentence = Vec::with_capacity(len);
            let mut current = rng.sample(zipf) as usize - 1;
            for _ in 0..len {
                bytes += words[current].len() + 1;
                sentence.push(words[current].clone());
                current = if rng.random_bool(SUCCESSOR_BIAS) {
                    successors[current][rng.random_range(0..SUCCESSORS)] as usize
                } else {
                    rng.sample(zipf) as usize - 1
                };
            }
            sentences.push(sentence);
        }
        let tgt: Vec<Vec<String>> = sentences
            .iter()
            .map(|s| s.iter().map(|t| format!("{t}{SUFFIX}")).collect())
            .collect();
        TwinCorpus {
            src: TokenStream::new(sentences),
            tgt: TokenStream::new(tgt),
            text_bytes: bytes,
        }
    }
}
