use std::path::Path;

use super::{check_tags, normalize, Corpus, Document, Label, Split};
use crate::{Error, Result};

const METADATA_HEADER: [&str; 3] = ["doc_id", "label", "split"];

/// Parse a metadata table (`doc_id  label  split`, tab-separated, with
/// header) into tags indexed by `doc_id`.
pub fn parse_metadata(text: &str) -> Result<Vec<(Label, Split)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.split('\t').eq(METADATA_HEADER) => {}
        Some((_, header)) => {
            return Err(Error::parse(
                "metadata line 1",
                format!("expected header `doc_id\\tlabel\\tsplit`, got {header:?}"),
            ))
        }
        None => return Err(Error::parse("metadata", "missing header")),
    }

    let mut rows: Vec<(usize, Label, Split)> = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let loc = || format!("metadata line {}", n + 1);
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, label, split] = fields[..] else {
            return Err(Error::parse(loc(), "expected 3 tab-separated fields"));
        };
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| Error::parse(loc(), format!("bad doc_id {id:?}")))?;
        rows.push((id, label.trim().parse()?, split.trim().parse()?));
    }

    let n = rows.len();
    let mut tags: Vec<Option<(Label, Split)>> = vec![None; n];
    for (id, label, split) in rows {
        let slot = tags
            .get_mut(id)
            .ok_or_else(|| Error::parse("metadata", format!("doc_id {id} outside 0..{n}")))?;
        if slot.replace((label, split)).is_some() {
            return Err(Error::parse("metadata", format!("duplicate doc_id {id}")));
        }
    }
    Ok(tags.into_iter().map(|t| t.expect("ids form 0..N")).collect())
}

/// Build a corpus from a line-per-document source and its metadata table.
///
/// With `normalize_text`, each line goes through [`normalize`] first;
/// otherwise lines are taken as already tokenized on whitespace.
pub fn ingest(docs: &str, metadata: &str, normalize_text: bool) -> Result<Corpus> {
    let tags = parse_metadata(metadata)?;
    let lines: Vec<&str> = docs.lines().collect();
    if lines.len() != tags.len() {
        return Err(Error::CountMismatch {
            lines: lines.len(),
            rows: tags.len(),
        });
    }
    let documents = lines
        .into_iter()
        .zip(tags)
        .enumerate()
        .map(|(doc_id, (line, (label, split)))| {
            check_tags(doc_id, label, split)?;
            let tokens: Vec<String> = if normalize_text {
                normalize(line)
            } else {
                line.split_whitespace().map(str::to_owned).collect()
            };
            if tokens.is_empty() {
                return Err(Error::EmptyDocument { doc_id });
            }
            Ok(Document {
                doc_id,
                tokens,
                label,
                split,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(documents)
}

pub fn ingest_files(
    docs_path: impl AsRef<Path>,
    meta_path: impl AsRef<Path>,
    normalize_text: bool,
) -> Result<Corpus> {
    let docs = read(docs_path.as_ref())?;
    let meta = read(meta_path.as_ref())?;
    ingest(&docs, &meta, normalize_text)
}

/// Read a document order: one `doc_id` per line.
pub fn read_order_file(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let text = read(path.as_ref())?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            l.trim().parse().map_err(|_| {
                Error::parse(
                    format!("{}:{}", path.as_ref().display(), n + 1),
                    format!("bad doc_id {l:?}"),
                )
            })
        })
        .collect()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
