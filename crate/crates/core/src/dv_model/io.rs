//! Text embedding files: a `N dim` header, then one `key v1 ... v_dim` row
//! per vector.

use std::fmt::Write as _;
use std::path::Path;

use super::EmbeddingMatrix;
use crate::{Error, Result};

pub(crate) fn format_embeddings(m: &EmbeddingMatrix, key: impl Fn(usize) -> String) -> String {
    let mut out = String::with_capacity(m.rows() * (m.dim() * 12 + 8) + 16);
    let _ = writeln!(out, "{} {}", m.rows(), m.dim());
    for (i, row) in m.iter_rows().enumerate().take(m.rows()) {
        out.push_str(&key(i));
        for x in row {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}

/// Embedding file keyed by row index (doc ids for a document table).
pub fn format_doc_vectors(m: &EmbeddingMatrix) -> String {
    format_embeddings(m, |i| i.to_string())
}

/// A parsed embedding file: keys in file order and their vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingFile {
    pub keys: Vec<String>,
    pub vectors: EmbeddingMatrix,
}

pub fn parse_embeddings(text: &str) -> Result<EmbeddingFile> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("embedding file", "missing `N dim` header"))?;
    let mut h = header.split_whitespace().map(str::parse::<usize>);
    let (Some(Ok(n)), Some(Ok(dim)), None) = (h.next(), h.next(), h.next()) else {
        return Err(Error::parse("embedding line 1", "expected `N dim`"));
    };
    if dim == 0 {
        return Err(Error::parse("embedding line 1", "dim must be positive"));
    }
    let mut keys = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * dim);
    for (ln, line) in lines {
        let mut fields = line.split_whitespace();
        let key = fields.next().expect("non-empty line");
        let before = data.len();
        for f in fields {
            data.push(f.parse::<f32>().map_err(|_| {
                Error::parse(format!("embedding line {}", ln + 1), format!("bad value {f:?}"))
            })?);
        }
        if data.len() - before != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: data.len() - before,
            });
        }
        keys.push(key.to_string());
    }
    if keys.len() != n {
        return Err(Error::parse(
            "embedding file",
            format!("header announces {n} rows, found {}", keys.len()),
        ));
    }
    Ok(EmbeddingFile {
        keys,
        vectors: EmbeddingMatrix::from_vec(data, dim)?,
    })
}

pub fn read_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_embeddings(&text)
}

/// Document vectors keyed by doc id, returned in doc-id order. Every id in
/// `0..n_docs` must appear exactly once.
pub fn read_doc_vectors(path: impl AsRef<Path>, n_docs: usize) -> Result<EmbeddingMatrix> {
    let file = read_embeddings(path)?;
    let mut order = vec![usize::MAX; n_docs];
    for (row, key) in file.keys.iter().enumerate() {
        let id: usize = key
            .parse()
            .map_err(|_| Error::parse("document vectors", format!("key {key:?} is not a doc id")))?;
        match order.get_mut(id) {
            Some(slot) if *slot == usize::MAX => *slot = row,
            Some(_) => return Err(Error::parse("document vectors", format!("duplicate id {id}"))),
            None => {
                return Err(Error::IdSetMismatch(format!(
                    "doc id {id} outside 0..{n_docs}"
                )))
            }
        }
    }
    if let Some(missing) = order.iter().position(|&r| r == usize::MAX) {
        return Err(Error::MissingIds(format!("document vector for doc id {missing}")));
    }
    Ok(file.vectors.select(&order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_three_is_three_lines() {
        let m = EmbeddingMatrix::from_vec(vec![0.5, -1.0, 2.25, 1e-7, 3.0, -0.125], 3).unwrap();
        let text = format_embeddings(&m, |i| i.to_string());
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next(), Some("2 3"));
        assert!(text.lines().nth(1).unwrap().starts_with("0 "));
        let back = parse_embeddings(&text).unwrap();
        assert_eq!(back.keys, vec!["0", "1"]);
        for (a, b) in back.vectors.as_slice().iter().zip(m.as_slice()) {
            assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn malformed_files() {
        assert!(parse_embeddings("").is_err());
        assert!(parse_embeddings("1 2\na 1.0\n").is_err());
        assert!(parse_embeddings("2 1\na 1.0\n").is_err());
        assert!(parse_embeddings("1 1\na x\n").is_err());
    }

    #[test]
    fn doc_vectors_are_reordered_by_id() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.txt");
        std::fs::write(&p, "2 2\n1 1 1\n0 0 0.5\n").unwrap();
        let m = read_doc_vectors(&p, 2).unwrap();
        assert_eq!(m.row(0), &[0.0, 0.5]);
        assert_eq!(m.row(1), &[1.0, 1.0]);
        assert!(matches!(read_doc_vectors(&p, 3), Err(Error::MissingIds(_))));
        assert!(matches!(read_doc_vectors(&p, 1), Err(Error::IdSetMismatch(_))));
    }
}
