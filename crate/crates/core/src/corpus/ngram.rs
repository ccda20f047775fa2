use std::fmt;

use super::Document;
use crate::{Error, Result};

/// Highest supported n-gram order (unigrams, bigrams, trigrams).
pub const MAX_ORDER: usize = 3;

/// A contiguous run of 1 to [`MAX_ORDER`] tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NGram {
    parts: Vec<String>,
}

impl NGram {
    pub fn new<S: Into<String>>(parts: impl IntoIterator<Item = S>) -> Result<Self> {
        let parts: Vec<String> = parts.into_iter().map(Into::into).collect();
        if parts.is_empty() || parts.len() > MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "n-gram order must be in 1..={MAX_ORDER}, got {}",
                parts.len()
            )));
        }
        Ok(NGram { parts })
    }

    pub fn parts(&self) -> &[String] {
        &self.parts
    }

    pub fn order(&self) -> usize {
        self.parts.len()
    }

    /// File key: tokens joined by `_`.
    ///
    /// `_` and `\` occurring inside a token are backslash-escaped so the key
    /// can be split again unambiguously.
    pub fn key(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                out.push('_');
            }
            for c in p.chars() {
                if c == '_' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
        }
        out
    }

    /// Inverse of [`NGram::key`].
    pub fn from_key(key: &str) -> Result<Self> {
        let mut parts = vec![String::new()];
        let mut chars = key.chars();
        while let Some(c) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some(n) => parts.last_mut().unwrap().push(n),
                    None => return Err(Error::parse(key, "dangling escape in n-gram key")),
                },
                '_' => parts.push(String::new()),
                c => parts.last_mut().unwrap().push(c),
            }
        }
        if parts.iter().any(String::is_empty) {
            return Err(Error::parse(key, "empty token in n-gram key"));
        }
        NGram::new(parts)
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parts.join(" "))
    }
}

/// All contiguous n-grams of orders `1..=max_order`, grouped by order and in
/// document order within each order. Repeated n-grams are kept.
///
/// # Panics
/// If `max_order` is not in `1..=3`.
pub fn extract_ngrams(doc: &Document, max_order: usize) -> Vec<NGram> {
    extract_from_tokens(&doc.tokens, max_order)
}

pub(crate) fn extract_from_tokens(tokens: &[String], max_order: usize) -> Vec<NGram> {
    assert!(
        (1..=MAX_ORDER).contains(&max_order),
        "max_order must be in 1..={MAX_ORDER}"
    );
    let mut out = Vec::new();
    for k in 1..=max_order {
        out.extend(tokens.windows(k).map(|w| NGram { parts: w.to_vec() }));
    }
    out
}
