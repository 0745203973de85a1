//! Corpus preparation: normalization, deduplication, vocabulary counting,
//! and collocation-based phrase merging.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Reserved token standing in for numeric values.
pub const NUM_TOKEN: &str = "<num>";

/// Characters stripped from tokens by default.
pub const DEFAULT_SPECIAL_CHARS: &str = "!?,:;<>()[]{}\"#&*+=|~\\`";

/// Default count discount when scoring candidate phrases.
pub const DEFAULT_PHRASE_DELTA: u64 = 5;

/// Default minimum score for a bigram to be merged.
pub const DEFAULT_PHRASE_THRESHOLD: f64 = 100.0;

/// Set of characters treated as special during normalization.
#[derive(Debug, Clone)]
pub struct SpecialChars {
    ascii: [bool; 128],
    other: Vec<char>,
}

impl SpecialChars {
    pub fn new(chars: impl IntoIterator<Item = char>) -> Self {
        let mut set = SpecialChars {
            ascii: [false; 128],
            other: Vec::new(),
        };
        for c in chars {
            if (c as u32) < 128 {
                set.ascii[c as usize] = true;
            } else if !set.other.contains(&c) {
                set.other.push(c);
            }
        }
        set
    }

    pub fn contains(&self, c: char) -> bool {
        if (c as u32) < 128 {
            self.ascii[c as usize]
        } else {
            self.other.contains(&c)
        }
    }
}

impl Default for SpecialChars {
    fn default() -> Self {
        SpecialChars::new(DEFAULT_SPECIAL_CHARS.chars())
    }
}

/// What to do with a line that is not valid UTF-8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnInvalid {
    /// Drop the line and continue.
    Skip,
    /// Stop with an error naming the line.
    Abort,
}

#[derive(Debug, Clone)]
pub struct NormalizeOptions {
    pub special_chars: SpecialChars,
    pub on_invalid: OnInvalid,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            special_chars: SpecialChars::default(),
            on_invalid: OnInvalid::Abort,
        }
    }
}

/// A cleaned corpus: sentences of whitespace-free tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub sentences: Vec<Vec<String>>,
}

impl TokenStream {
    pub fn new(sentences: Vec<Vec<String>>) -> Self {
        TokenStream { sentences }
    }

    pub fn token_count(&self) -> u64 {
        self.sentences.iter().map(|s| s.len() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Clean raw text lines into a token stream.
///
/// Each line is one sentence. Special characters split tokens and are
/// dropped, runs of digits (with optional `.`/`,` separators) become
/// [`NUM_TOKEN`], and tokens containing an uppercase letter are removed
/// entirely. Empty sentences are dropped.
pub fn normalize<L: AsRef<[u8]>>(
    lines: impl IntoIterator<Item = L>,
    options: &NormalizeOptions,
) -> Result<TokenStream> {
    let mut sentences = Vec::new();
    for (i, raw) in lines.into_iter().enumerate() {
        let line = match std::str::from_utf8(raw.as_ref()) {
            Ok(line) => line,
            Err(_) => match options.on_invalid {
                OnInvalid::Skip => continue,
                OnInvalid::Abort => return Err(Error::InvalidUtf8 { line: i + 1 }),
            },
        };
        let tokens = normalize_line(line, &options.special_chars);
        if !tokens.is_empty() {
            sentences.push(tokens);
        }
    }
    Ok(TokenStream { sentences })
}

/// Normalize a single line. The reserved [`NUM_TOKEN`] passes through
/// unchanged so that normalization is idempotent over its own output.
pub fn normalize_line(line: &str, special: &SpecialChars) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in line.split_whitespace() {
        if chunk == NUM_TOKEN {
            tokens.push(NUM_TOKEN.to_string());
            continue;
        }
        split_at_special(chunk, special, &mut tokens);
    }
    tokens
}

/// Split a whitespace-free chunk at special characters and classify the
/// pieces. A `.` or `,` between two digits counts as a numeric separator and
/// does not split.
fn split_at_special(chunk: &str, special: &SpecialChars, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let keep = !special.contains(c)
            || ((c == '.' || c == ',')
                && i > 0
                && chars[i - 1].is_ascii_digit()
                && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit()));
        if keep {
            current.push(c);
        } else if !current.is_empty() {
            classify(std::mem::take(&mut current), special, out);
        }
    }
    if !current.is_empty() {
        classify(current, special, out);
    }
}

fn classify(token: String, special: &SpecialChars, out: &mut Vec<String>) {
    if is_numeric_token(&token) {
        out.push(NUM_TOKEN.to_string());
        return;
    }
    let stripped: String = token.chars().filter(|&c| !special.contains(c)).collect();
    if !stripped.is_empty() && !stripped.chars().any(char::is_uppercase) {
        out.push(stripped);
    }
}

/// Digits with optional `.`/`,` separators; at least one digit. Mixed
/// alphanumerics such as "4th" do not qualify.
fn is_numeric_token(token: &str) -> bool {
    let mut has_digit = false;
    for c in token.chars() {
        match c {
            '0'..='9' => has_digit = true,
            '.' | ',' => {}
            _ => return false,
        }
    }
    has_digit
}

/// Remove exact-duplicate sentences, keeping the first occurrence and the
/// original relative order.
///
/// Sentences are bucketed by 64-bit hash and confirmed by full comparison on
/// a bucket hit, so the map stores only indices.
pub fn dedupe(stream: TokenStream) -> TokenStream {
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut kept: Vec<Vec<String>> = Vec::new();
    for sentence in stream.sentences {
        let mut hasher = DefaultHasher::new();
        sentence.hash(&mut hasher);
        let bucket = seen.entry(hasher.finish()).or_default();
        if bucket.iter().any(|&i| kept[i] == sentence) {
            continue;
        }
        bucket.push(kept.len());
        kept.push(sentence);
    }
    TokenStream { sentences: kept }
}

/// Frequency-ranked vocabulary. Ids are dense and rank is id + 1: the most
/// frequent token has id 0 and rank 1. Ties are broken lexicographically.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Build from raw token counts, dropping entries below `min_count`.
    /// `total_tokens` is the corpus size before any exclusion.
    pub fn from_counts(
        counts: impl IntoIterator<Item = (String, u64)>,
        total_tokens: u64,
        min_count: u64,
    ) -> Self {
        let mut entries: Vec<(String, u64)> =
            counts.into_iter().filter(|&(_, c)| c >= min_count).collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut vocab = Vocabulary {
            words: Vec::with_capacity(entries.len()),
            counts: Vec::with_capacity(entries.len()),
            index: HashMap::with_capacity(entries.len()),
            total_tokens,
        };
        for (word, count) in entries {
            vocab.index.insert(word.clone(), vocab.words.len());
            vocab.words.push(word);
            vocab.counts.push(count);
        }
        vocab
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Corpus size T: all tokens seen, including those below `min_count`.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn set_total_tokens(&mut self, total: u64) {
        self.total_tokens = total;
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn rank(&self, id: usize) -> usize {
        id + 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Count tokens and keep those occurring at least `min_count` times.
pub fn build_vocab(stream: &TokenStream, min_count: u64) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidConfig("min_count must be at least 1".into()));
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut total = 0u64;
    for sentence in &stream.sentences {
        for token in sentence {
            *counts.entry(token.clone()).or_default() += 1;
            total += 1;
        }
    }
    Ok(Vocabulary::from_counts(counts, total, min_count))
}

/// Scored bigrams eligible for merging into single tokens.
#[derive(Debug, Clone)]
pub struct PhraseTable {
    scores: HashMap<String, HashMap<String, f64>>,
    len: usize,
    pub delta: u64,
    pub threshold: f64,
}

impl PhraseTable {
    pub fn new(delta: u64, threshold: f64) -> Self {
        PhraseTable {
            scores: HashMap::new(),
            len: 0,
            delta,
            threshold,
        }
    }

    pub fn insert(&mut self, a: String, b: String, score: f64) {
        if self.scores.entry(a).or_default().insert(b, score).is_none() {
            self.len += 1;
        }
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        self.scores.get(a).is_some_and(|m| m.contains_key(b))
    }

    pub fn score(&self, a: &str, b: &str) -> Option<f64> {
        self.scores.get(a).and_then(|m| m.get(b)).copied()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Entries ordered by descending score, then lexicographically.
    pub fn entries_sorted(&self) -> Vec<(&str, &str, f64)> {
        let mut entries: Vec<(&str, &str, f64)> = self
            .scores
            .iter()
            .flat_map(|(a, m)| m.iter().map(move |(b, &s)| (a.as_str(), b.as_str(), s)))
            .collect();
        entries.sort_by(|x, y| {
            y.2.total_cmp(&x.2)
                .then_with(|| x.0.cmp(y.0))
                .then_with(|| x.1.cmp(y.1))
        });
        entries
    }
}

/// Score adjacent in-vocabulary bigrams and keep those at or above
/// `threshold`.
///
/// score(a, b) = (C(ab) − delta) · T / (C(a) · C(b))
///
/// where C are corpus counts and T the total token count.
pub fn detect_phrases(
    stream: &TokenStream,
    vocab: &Vocabulary,
    delta: u64,
    threshold: f64,
) -> PhraseTable {
    let mut bigrams: HashMap<(usize, usize), u64> = HashMap::new();
    for sentence in &stream.sentences {
        for pair in sentence.windows(2) {
            if let (Some(a), Some(b)) = (vocab.id(&pair[0]), vocab.id(&pair[1])) {
                *bigrams.entry((a, b)).or_default() += 1;
            }
        }
    }
    let total = vocab.total_tokens() as f64;
    let mut table = PhraseTable::new(delta, threshold);
    for ((a, b), c_ab) in bigrams {
        let score = (c_ab as f64 - delta as f64) * total
            / (vocab.count(a) as f64 * vocab.count(b) as f64);
        if score >= threshold {
            table.insert(vocab.word(a).to_string(), vocab.word(b).to_string(), score);
        }
    }
    table
}

/// Merge table bigrams into single `a_b` tokens, scanning left to right.
/// A merged token does not merge again within the same pass.
pub fn apply_phrases(stream: TokenStream, table: &PhraseTable, passes: usize) -> TokenStream {
    let mut stream = stream;
    if table.is_empty() {
        return stream;
    }
    for _ in 0..passes {
        for sentence in &mut stream.sentences {
            let mut merged = Vec::with_capacity(sentence.len());
            let mut i = 0;
            while i < sentence.len() {
                if i + 1 < sentence.len() && table.contains(&sentence[i], &sentence[i + 1]) {
                    merged.push(format!("{}_{}", sentence[i], sentence[i + 1]));
                    i += 2;
                } else {
                    merged.push(std::mem::take(&mut sentence[i]));
                    i += 1;
                }
            }
            *sentence = merged;
        }
    }
    stream
}
