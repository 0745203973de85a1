//! Readers and writers for every on-disk artifact. Text formats use the
//! shortest decimal representation that round-trips, so writer/reader pairs
//! reproduce values exactly.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::baselines::CountVector;
use crate::corpus::{PhraseTable, TokenStream, Vocabulary};
use crate::embedding::{EmbeddingModel, HuffmanTree, Mode};
use crate::error::{Error, Result};
use crate::evaluation::{
    AuditReport, BandRow, CurveRow, EvalReport, Lexicon, SweepRow,
};
use crate::mapping::TranslationMatrix;

const CHECKPOINT_MAGIC: &[u8; 4] = b"BLXC";
const CHECKPOINT_VERSION: u32 = 1;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        match line {
            Ok(l) => lines.push(l),
            Err(e) if e.kind() == std::io::ErrorKind::InvalidData => {
                return Err(Error::InvalidUtf8 { line: i + 1 });
            }
            Err(e) => return Err(Error::io(path, e)),
        }
    }
    Ok(lines)
}

pub fn write_token_stream(path: &Path, stream: &TokenStream) -> Result<()> {
    let mut w = create(path)?;
    for sentence in &stream.sentences {
        if sentence.is_empty() {
            continue;
        }
        writeln!(w, "{}", sentence.join(" ")).map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn read_token_stream(path: &Path) -> Result<TokenStream> {
    let sentences = read_lines(path)?
        .into_iter()
        .map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
        .filter(|s: &Vec<String>| !s.is_empty())
        .collect();
    Ok(TokenStream::new(sentences))
}

pub fn write_vocab(path: &Path, vocab: &Vocabulary) -> Result<()> {
    let mut w = create(path)?;
    for id in 0..vocab.len() {
        writeln!(w, "{}\t{}", vocab.word(id), vocab.count(id)).map_err(write_err(path))?;
    }
    finish(w, path)
}

/// The vocabulary file carries no corpus-size line, so the total token
/// count is reconstructed as the sum of the stored counts.
pub fn read_vocab(path: &Path) -> Result<Vocabulary> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut previous = u64::MAX;
    for (i, line) in read_lines(path)?.into_iter().enumerate() {
        let line_no = i + 1;
        let (word, count) = line.split_once('\t').ok_or_else(|| {
            Error::format(path, line_no, "expected token<TAB>count")
        })?;
        let count: u64 = count.parse().map_err(|_| {
            Error::format(path, line_no, format!("bad count '{count}'"))
        })?;
        if count > previous {
            return Err(Error::format(
                path,
                line_no,
                "counts must be in descending order",
            ));
        }
        if !seen.insert(word.to_string()) {
            return Err(Error::format(path, line_no, format!("duplicate token '{word}'")));
        }
        previous = count;
        entries.push((word.to_string(), count));
    }
    let total: u64 = entries.iter().map(|e| e.1).sum();
    Ok(Vocabulary::from_counts(entries, total, 1))
}

pub fn write_phrase_table(path: &Path, table: &PhraseTable) -> Result<()> {
    let mut w = create(path)?;
    for (a, b, score) in table.entries_sorted() {
        writeln!(w, "{a}\t{b}\t{score}").map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn read_phrase_table(path: &Path, delta: u64, threshold: f64) -> Result<PhraseTable> {
    let mut table = PhraseTable::new(delta, threshold);
    for (i, line) in read_lines(path)?.into_iter().enumerate() {
        let line_no = i + 1;
        let mut parts = line.split('\t');
        let (Some(a), Some(b), Some(score), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::format(
                path,
                line_no,
                "expected token<TAB>token<TAB>score",
            ));
        };
        let score: f64 = score.parse().map_err(|_| {
            Error::format(path, line_no, format!("bad score '{score}'"))
        })?;
        table.insert(a.to_string(), b.to_string(), score);
    }
    Ok(table)
}

fn parse_vector_header(path: &Path, line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split(' ');
    let (Some(v), Some(d), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::format(path, 1, "expected '<vocab_size> <dim>' header"));
    };
    let v: usize = v
        .parse()
        .map_err(|_| Error::format(path, 1, format!("bad vocab size '{v}'")))?;
    let d: usize = d
        .parse()
        .map_err(|_| Error::format(path, 1, format!("bad dimension '{d}'")))?;
    Ok((v, d))
}

/// Synthetic descending counts stand in for frequencies the vector file
/// does not carry; the row order of the file is the frequency order.
fn vocab_from_ordered_words(path: &Path, words: Vec<String>) -> Result<Vocabulary> {
    let n = words.len();
    let mut seen = HashSet::with_capacity(n);
    for (i, w) in words.iter().enumerate() {
        if !seen.insert(w.clone()) {
            return Err(Error::format(path, i + 2, format!("duplicate word '{w}'")));
        }
    }
    let entries: Vec<(String, u64)> = words
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, (n - i) as u64))
        .collect();
    let total = entries.iter().map(|e| e.1).sum();
    Ok(Vocabulary::from_counts(entries, total, 1))
}

pub fn write_vectors_text(path: &Path, model: &EmbeddingModel, vocab: &Vocabulary) -> Result<()> {
    if vocab.len() > model.vocab_size() {
        return Err(Error::IdOutOfRange {
            id: vocab.len() - 1,
            size: model.vocab_size(),
        });
    }
    let mut w = create(path)?;
    writeln!(w, "{} {}", vocab.len(), model.dim()).map_err(write_err(path))?;
    for id in 0..vocab.len() {
        write!(w, "{}", vocab.word(id)).map_err(write_err(path))?;
        for v in model.vector(id) {
            write!(w, " {v}").map_err(write_err(path))?;
        }
        writeln!(w).map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn read_vectors_text(path: &Path) -> Result<(EmbeddingModel, Vocabulary)> {
    let lines = read_lines(path)?;
    let Some(header) = lines.first() else {
        return Err(Error::format(path, 1, "empty vector file"));
    };
    let (v, d) = parse_vector_header(path, header)?;
    if lines.len() != v + 1 {
        return Err(Error::format(
            path,
            lines.len(),
            format!("expected {v} vector rows, found {}", lines.len() - 1),
        ));
    }
    let mut words = Vec::with_capacity(v);
    let mut values = Vec::with_capacity(v * d);
    for (i, line) in lines[1..].iter().enumerate() {
        let line_no = i + 2;
        let mut parts = line.split(' ');
        let word = parts
            .next()
            .filter(|w| !w.is_empty())
            .ok_or_else(|| Error::format(path, line_no, "missing word"))?;
        words.push(word.to_string());
        let mut count = 0;
        for part in parts {
            let value: f64 = part.parse().map_err(|_| {
                Error::format(path, line_no, format!("bad value '{part}'"))
            })?;
            values.push(value);
            count += 1;
        }
        if count != d {
            return Err(Error::format(
                path,
                line_no,
                format!("expected {d} values, found {count}"),
            ));
        }
    }
    let vocab = vocab_from_ordered_words(path, words)?;
    let model = EmbeddingModel::from_parts(values, Vec::new(), d, Mode::Cbow)?;
    Ok((model, vocab))
}

pub fn write_vectors_binary(
    path: &Path,
    model: &EmbeddingModel,
    vocab: &Vocabulary,
) -> Result<()> {
    if vocab.len() > model.vocab_size() {
        return Err(Error::IdOutOfRange {
            id: vocab.len() - 1,
            size: model.vocab_size(),
        });
    }
    let mut w = create(path)?;
    writeln!(w, "{} {}", vocab.len(), model.dim()).map_err(write_err(path))?;
    for id in 0..vocab.len() {
        w.write_all(vocab.word(id).as_bytes()).map_err(write_err(path))?;
        w.write_all(b" ").map_err(write_err(path))?;
        for &v in model.vector(id) {
            w.write_all(&(v as f32).to_le_bytes()).map_err(write_err(path))?;
        }
    }
    finish(w, path)
}

pub fn read_vectors_binary(path: &Path) -> Result<(EmbeddingModel, Vocabulary)> {
    let mut r = open(path)?;
    let mut header = String::new();
    r.read_line(&mut header).map_err(|e| Error::io(path, e))?;
    let (v, d) = parse_vector_header(path, header.trim_end_matches('\n'))?;
    let mut words = Vec::with_capacity(v);
    let mut values = Vec::with_capacity(v * d);
    let mut float_buf = vec![0u8; 4 * d];
    for row in 0..v {
        let mut word_bytes = Vec::new();
        r.read_until(b' ', &mut word_bytes)
            .map_err(|e| Error::io(path, e))?;
        if word_bytes.pop() != Some(b' ') {
            return Err(Error::format(
                path,
                row + 2,
                "truncated record: missing word delimiter",
            ));
        }
        let word = String::from_utf8(word_bytes)
            .map_err(|_| Error::InvalidUtf8 { line: row + 2 })?;
        words.push(word);
        r.read_exact(&mut float_buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::format(path, row + 2, "truncated record: missing vector values")
            } else {
                Error::io(path, e)
            }
        })?;
        for chunk in float_buf.chunks_exact(4) {
            let bits = [chunk[0], chunk[1], chunk[2], chunk[3]];
            values.push(f64::from(f32::from_le_bytes(bits)));
        }
    }
    let mut trailing = [0u8; 1];
    match r.read_exact(&mut trailing) {
        Ok(()) => {
            return Err(Error::format(path, v + 2, "trailing bytes after last record"))
        }
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => {}
        Err(e) => return Err(Error::io(path, e)),
    }
    let vocab = vocab_from_ordered_words(path, words)?;
    let model = EmbeddingModel::from_parts(values, Vec::new(), d, Mode::Cbow)?;
    Ok((model, vocab))
}

pub fn write_matrix(path: &Path, tm: &TranslationMatrix) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{} {}", tm.d2(), tm.d1()).map_err(write_err(path))?;
    for r in 0..tm.d2() {
        let row: Vec<String> = tm.row(r).iter().map(f64::to_string).collect();
        writeln!(w, "{}", row.join(" ")).map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn read_matrix(path: &Path) -> Result<TranslationMatrix> {
    let lines = read_lines(path)?;
    let Some(header) = lines.first() else {
        return Err(Error::format(path, 1, "empty matrix file"));
    };
    let mut parts = header.split(' ');
    let (Some(d2), Some(d1), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::format(path, 1, "expected '<d2> <d1>' header"));
    };
    let d2: usize = d2
        .parse()
        .map_err(|_| Error::format(path, 1, format!("bad row count '{d2}'")))?;
    let d1: usize = d1
        .parse()
        .map_err(|_| Error::format(path, 1, format!("bad column count '{d1}'")))?;
    if lines.len() != d2 + 1 {
        return Err(Error::format(
            path,
            lines.len(),
            format!("expected {d2} matrix rows, found {}", lines.len() - 1),
        ));
    }
    let mut rows = Vec::with_capacity(d2);
    for (i, line) in lines[1..].iter().enumerate() {
        let line_no = i + 2;
        let row: Vec<f64> = line
            .split(' ')
            .map(|part| {
                part.parse().map_err(|_| {
                    Error::format(path, line_no, format!("bad value '{part}'"))
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != d1 {
            return Err(Error::format(
                path,
                line_no,
                format!("expected {d1} values, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    TranslationMatrix::from_rows(rows)
}

pub fn write_lexicon(path: &Path, lexicon: &Lexicon) -> Result<()> {
    let mut w = create(path)?;
    for entry in &lexicon.entries {
        if entry.alternatives.is_empty() {
            writeln!(w, "{}\t{}", entry.source, entry.target).map_err(write_err(path))?;
        } else {
            writeln!(
                w,
                "{}\t{}\t{}",
                entry.source,
                entry.target,
                entry.alternatives.join(",")
            )
            .map_err(write_err(path))?;
        }
    }
    finish(w, path)
}

pub fn read_lexicon(path: &Path) -> Result<Lexicon> {
    let mut rows = Vec::new();
    for (i, line) in read_lines(path)?.into_iter().enumerate() {
        let line_no = i + 1;
        let mut parts = line.split('\t');
        let (Some(source), Some(target)) = (parts.next(), parts.next()) else {
            return Err(Error::format(
                path,
                line_no,
                "expected source<TAB>target[<TAB>alternatives]",
            ));
        };
        let alternatives: Vec<String> = match parts.next() {
            Some(alts) => alts.split(',').map(str::to_string).collect(),
            None => Vec::new(),
        };
        if parts.next().is_some() {
            return Err(Error::format(path, line_no, "too many columns"));
        }
        if source.is_empty() || target.is_empty() {
            return Err(Error::format(path, line_no, "empty source or target"));
        }
        rows.push((source.to_string(), target.to_string(), alternatives));
    }
    Ok(Lexicon::from_rows(rows))
}

pub fn write_report(path: &Path, report: &EvalReport) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(report.to_json().as_bytes()).map_err(write_err(path))?;
    finish(w, path)
}

pub fn read_report(path: &Path) -> Result<EvalReport> {
    let mut text = String::new();
    open(path)?
        .read_to_string(&mut text)
        .map_err(|e| Error::io(path, e))?;
    EvalReport::from_json(&text)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_tsv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "threshold\tcoverage\tcovered\ttotal\tp1\tp5").map_err(write_err(path))?;
    for r in rows {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.threshold,
            r.coverage,
            r.covered,
            r.total,
            opt(r.p1),
            opt(r.p5)
        )
        .map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn write_band_tsv(path: &Path, rows: &[BandRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "start_rank\tend_rank\tcovered\ttotal\tp1\tp5").map_err(write_err(path))?;
    for r in rows {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.start_rank,
            r.end_rank,
            r.covered,
            r.total,
            opt(r.p1),
            opt(r.p5)
        )
        .map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn write_curve_tsv(path: &Path, rows: &[CurveRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "source_tokens\ttarget_tokens\tcoverage\tp1\tp5").map_err(write_err(path))?;
    for r in rows {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            r.source_tokens, r.target_tokens, r.coverage, r.p1, r.p5
        )
        .map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn write_audit_tsv(path: &Path, report: &AuditReport) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "source\ttarget\tcosine\tsuggestions").map_err(write_err(path))?;
    for r in &report.rows {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            r.source,
            r.target,
            r.cosine,
            r.suggestions.join(",")
        )
        .map_err(write_err(path))?;
    }
    finish(w, path)
}

pub fn write_pca_tsv(path: &Path, coords: &[(String, f64, f64)]) -> Result<()> {
    let mut w = create(path)?;
    for (word, x, y) in coords {
        writeln!(w, "{word}\t{x}\t{y}").map_err(write_err(path))?;
    }
    finish(w, path)
}

/// Sparse `index:value` dump of count vectors, one word per line.
pub fn write_count_vectors(path: &Path, vectors: &[CountVector]) -> Result<()> {
    let mut w = create(path)?;
    for v in vectors {
        write!(w, "{}", v.word).map_err(write_err(path))?;
        for (i, &c) in v.counts.iter().enumerate() {
            if c != 0.0 {
                write!(w, " {i}:{c}").map_err(write_err(path))?;
            }
        }
        writeln!(w).map_err(write_err(path))?;
    }
    finish(w, path)
}

/// Versioned binary checkpoint carrying everything needed to resume
/// training: vocabulary with counts, Huffman codes and paths, both
/// parameter blocks at full precision, and the training mode.
pub fn write_checkpoint(
    path: &Path,
    model: &EmbeddingModel,
    vocab: &Vocabulary,
    tree: &HuffmanTree,
) -> Result<()> {
    if vocab.len() != model.vocab_size() || vocab.len() != tree.len() {
        return Err(Error::DimensionMismatch {
            expected: vocab.len(),
            actual: model.vocab_size().min(tree.len()),
        });
    }
    let mut w = create(path)?;
    let err = write_err(path);
    w.write_all(CHECKPOINT_MAGIC).map_err(&err)?;
    w.write_all(&CHECKPOINT_VERSION.to_le_bytes()).map_err(&err)?;
    let mode: u8 = match model.mode() {
        Mode::Cbow => 0,
        Mode::SkipGram => 1,
    };
    w.write_all(&[mode]).map_err(&err)?;
    w.write_all(&(model.dim() as u64).to_le_bytes()).map_err(&err)?;
    w.write_all(&(vocab.len() as u64).to_le_bytes()).map_err(&err)?;
    w.write_all(&vocab.total_tokens().to_le_bytes()).map_err(&err)?;
    for id in 0..vocab.len() {
        let word = vocab.word(id).as_bytes();
        w.write_all(&(word.len() as u64).to_le_bytes()).map_err(&err)?;
        w.write_all(word).map_err(&err)?;
        w.write_all(&vocab.count(id).to_le_bytes()).map_err(&err)?;
    }
    w.write_all(&(tree.node_count() as u64).to_le_bytes()).map_err(&err)?;
    for id in 0..tree.len() {
        let code = tree.code(id);
        let path_ids = tree.path(id);
        w.write_all(&(code.len() as u64).to_le_bytes()).map_err(&err)?;
        for &bit in code {
            w.write_all(&[u8::from(bit)]).map_err(&err)?;
        }
        for &node in path_ids {
            w.write_all(&node.to_le_bytes()).map_err(&err)?;
        }
    }
    for id in 0..model.vocab_size() {
        for &v in model.vector(id) {
            w.write_all(&v.to_le_bytes()).map_err(&err)?;
        }
    }
    for node in 0..model.node_count() {
        for &v in model.node_vector(node) {
            w.write_all(&v.to_le_bytes()).map_err(&err)?;
        }
    }
    finish(w, path)
}

pub fn read_checkpoint(path: &Path) -> Result<(EmbeddingModel, Vocabulary, HuffmanTree)> {
    let mut r = open(path)?;
    let bad = |msg: &str| Error::format(path, 0, msg);
    let mut magic = [0u8; 4];
    read_bytes(path, &mut r, &mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(bad("not a checkpoint file"));
    }
    let version = read_u32(path, &mut r)?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::format(
            path,
            0,
            format!("unsupported checkpoint version {version}"),
        ));
    }
    let mut mode_byte = [0u8; 1];
    read_bytes(path, &mut r, &mut mode_byte)?;
    let mode = match mode_byte[0] {
        0 => Mode::Cbow,
        1 => Mode::SkipGram,
        other => return Err(Error::format(path, 0, format!("bad mode byte {other}"))),
    };
    let dim = read_u64(path, &mut r)? as usize;
    let vocab_size = read_u64(path, &mut r)? as usize;
    let total_tokens = read_u64(path, &mut r)?;
    if vocab_size < 2 {
        return Err(bad("checkpoint vocabulary is too small"));
    }
    let mut entries = Vec::with_capacity(vocab_size);
    let mut file_order = Vec::with_capacity(vocab_size);
    let mut seen = HashSet::with_capacity(vocab_size);
    for _ in 0..vocab_size {
        let len = read_u64(path, &mut r)? as usize;
        if len > 1 << 20 {
            return Err(bad("implausible word length"));
        }
        let mut bytes = vec![0u8; len];
        read_bytes(path, &mut r, &mut bytes)?;
        let word = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 { line: 0 })?;
        let count = read_u64(path, &mut r)?;
        if !seen.insert(word.clone()) {
            return Err(bad("duplicate words in checkpoint"));
        }
        file_order.push(word.clone());
        entries.push((word, count));
    }
    let node_count = read_u64(path, &mut r)? as usize;
    if node_count != vocab_size - 1 {
        return Err(bad("node count does not match vocabulary size"));
    }
    let mut codes = Vec::with_capacity(vocab_size);
    let mut paths = Vec::with_capacity(vocab_size);
    for _ in 0..vocab_size {
        let len = read_u64(path, &mut r)? as usize;
        if len > 64 {
            return Err(bad("implausible code length"));
        }
        let mut code = Vec::with_capacity(len);
        let mut byte = [0u8; 1];
        for _ in 0..len {
            read_bytes(path, &mut r, &mut byte)?;
            code.push(byte[0] != 0);
        }
        let mut node_path = Vec::with_capacity(len);
        for _ in 0..len {
            node_path.push(read_u32(path, &mut r)?);
        }
        codes.push(code);
        paths.push(node_path);
    }
    let mut input_vectors = vec![0.0f64; vocab_size * dim];
    read_f64s(path, &mut r, &mut input_vectors)?;
    let mut node_vectors = vec![0.0f64; node_count * dim];
    read_f64s(path, &mut r, &mut node_vectors)?;

    let vocab = Vocabulary::from_counts(entries, total_tokens, 1);
    for (id, word) in file_order.iter().enumerate() {
        if vocab.word(id) != word {
            return Err(bad("checkpoint words are not in canonical order"));
        }
    }
    let tree = HuffmanTree::from_parts(codes, paths)?;
    let model = EmbeddingModel::from_parts(input_vectors, node_vectors, dim, mode)?;
    Ok((model, vocab, tree))
}

fn read_bytes(path: &Path, r: &mut impl Read, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::format(path, 0, "truncated checkpoint")
        } else {
            Error::io(path, e)
        }
    })
}

fn read_u32(path: &Path, r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    read_bytes(path, r, &mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(path: &Path, r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    read_bytes(path, r, &mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64s(path: &Path, r: &mut impl Read, out: &mut [f64]) -> Result<()> {
    let mut buf = [0u8; 8];
    for slot in out.iter_mut() {
        read_bytes(path, r, &mut buf)?;
        *slot = f64::from_le_bytes(buf);
    }
    Ok(())
}
