//! Documents, n-grams, and the block-ordered layout of a corpus file.

mod alignment;
mod ingest;
mod layout;
mod ngram;
mod normalize;

pub use alignment::{build_alignment, AlignmentClass, AlignmentMap};
pub use ingest::{ingest, ingest_files, parse_metadata, read_order_file};
pub use layout::{Block, BlockLayout, IMDB_BLOCK_LEN, IMDB_EXTRA_LEN};
pub use ngram::{extract_ngrams, NGram, MAX_ORDER};
pub use normalize::normalize;

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Class tag of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
    Unlabeled,
}

impl Label {
    pub fn as_tag(self) -> &'static str {
        match self {
            Label::Positive => "pos",
            Label::Negative => "neg",
            Label::Unlabeled => "unsup",
        }
    }

    /// `Some(true)` for positive, `Some(false)` for negative.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Label::Positive => Some(true),
            Label::Negative => Some(false),
            Label::Unlabeled => None,
        }
    }

    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" => Ok(Label::Positive),
            "neg" => Ok(Label::Negative),
            "unsup" => Ok(Label::Unlabeled),
            other => Err(Error::UnknownTag {
                field: "label",
                tag: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_tag())
    }
}

/// Which subset a document belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Validation,
    Test,
    Extra,
}

impl Split {
    pub fn as_tag(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "valid",
            Split::Test => "test",
            Split::Extra => "extra",
        }
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "valid" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            "extra" => Ok(Split::Extra),
            other => Err(Error::UnknownTag {
                field: "split",
                tag: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_tag())
    }
}

/// Check the `Unlabeled <=> Extra` pairing.
pub fn check_tags(doc_id: usize, label: Label, split: Split) -> Result<()> {
    if (label == Label::Unlabeled) != (split == Split::Extra) {
        return Err(Error::InvalidArgument(format!(
            "document {doc_id}: label {label} is incompatible with split {split}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: usize,
    pub tokens: Vec<String>,
    pub label: Label,
    pub split: Split,
}

/// Labels, splits and layout of a document collection, without the text.
///
/// Everything downstream of feature construction (classifier, ensembles,
/// experiments) only needs this view.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMeta {
    tags: Vec<(Label, Split)>,
    layout: BlockLayout,
}

impl CorpusMeta {
    pub fn from_tags(tags: Vec<(Label, Split)>) -> Result<Self> {
        for (i, &(l, s)) in tags.iter().enumerate() {
            check_tags(i, l, s)?;
        }
        let layout = BlockLayout::infer(&tags);
        Ok(CorpusMeta { tags, layout })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn label(&self, i: usize) -> Label {
        self.tags[i].0
    }

    pub fn split(&self, i: usize) -> Split {
        self.tags[i].1
    }

    pub fn tags(&self) -> &[(Label, Split)] {
        &self.tags
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    /// Indices of all documents in `split`, ascending.
    pub fn indices_in(&self, split: Split) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.split(i) == split).collect()
    }

    pub fn has_split(&self, split: Split) -> bool {
        self.tags.iter().any(|&(_, s)| s == split)
    }
}

/// An ingested collection of documents in file order.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    meta: CorpusMeta,
}

impl Corpus {
    /// Build a corpus from documents whose `doc_id`s are `0..N` in order.
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        for (i, d) in documents.iter().enumerate() {
            if d.doc_id != i {
                return Err(Error::InvalidArgument(format!(
                    "document at position {i} has doc_id {}",
                    d.doc_id
                )));
            }
            if d.tokens.is_empty() {
                return Err(Error::EmptyDocument { doc_id: i });
            }
        }
        let tags = documents.iter().map(|d| (d.label, d.split)).collect();
        let meta = CorpusMeta::from_tags(tags)?;
        Ok(Corpus { documents, meta })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn layout(&self) -> &BlockLayout {
        self.meta.layout()
    }

    pub fn meta(&self) -> &CorpusMeta {
        &self.meta
    }
}

/// Read access to documents, one field at a time.
///
/// Consumers that must not look at certain splits (Naive-Bayes fitting) go
/// through this trait so that an [`AccessTracker`] can audit them.
pub trait DocumentSource {
    fn num_documents(&self) -> usize;
    fn split_of(&self, i: usize) -> Split;
    fn label_of(&self, i: usize) -> Label;
    fn tokens_of(&self, i: usize) -> &[String];
}

impl DocumentSource for Corpus {
    fn num_documents(&self) -> usize {
        self.documents.len()
    }

    fn split_of(&self, i: usize) -> Split {
        self.documents[i].split
    }

    fn label_of(&self, i: usize) -> Label {
        self.documents[i].label
    }

    fn tokens_of(&self, i: usize) -> &[String] {
        &self.documents[i].tokens
    }
}

/// Records every document whose label or tokens were read.
pub struct AccessTracker<'a, S: DocumentSource> {
    inner: &'a S,
    touched: std::cell::RefCell<std::collections::BTreeSet<usize>>,
}

impl<'a, S: DocumentSource> AccessTracker<'a, S> {
    pub fn new(inner: &'a S) -> Self {
        AccessTracker {
            inner,
            touched: Default::default(),
        }
    }

    /// Indices whose content (label or tokens) was read, ascending.
    pub fn touched(&self) -> Vec<usize> {
        self.touched.borrow().iter().copied().collect()
    }
}

impl<S: DocumentSource> DocumentSource for AccessTracker<'_, S> {
    fn num_documents(&self) -> usize {
        self.inner.num_documents()
    }

    fn split_of(&self, i: usize) -> Split {
        self.inner.split_of(i)
    }

    fn label_of(&self, i: usize) -> Label {
        self.touched.borrow_mut().insert(i);
        self.inner.label_of(i)
    }

    fn tokens_of(&self, i: usize) -> &[String] {
        self.touched.borrow_mut().insert(i);
        self.inner.tokens_of(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for l in [Label::Positive, Label::Negative, Label::Unlabeled] {
            assert_eq!(l.as_tag().parse::<Label>().unwrap(), l);
        }
        for s in [Split::Train, Split::Validation, Split::Test, Split::Extra] {
            assert_eq!(s.as_tag().parse::<Split>().unwrap(), s);
        }
        assert!(matches!(
            "positive".parse::<Label>(),
            Err(Error::UnknownTag { field: "label", .. })
        ));
    }

    #[test]
    fn unlabeled_only_in_extra() {
        assert!(check_tags(0, Label::Unlabeled, Split::Extra).is_ok());
        assert!(check_tags(0, Label::Unlabeled, Split::Train).is_err());
        assert!(check_tags(0, Label::Positive, Split::Extra).is_err());
    }

    #[test]
    fn corpus_rejects_bad_ids_and_empty_docs() {
        let doc = |id, toks: &[&str]| Document {
            doc_id: id,
            tokens: toks.iter().map(|s| s.to_string()).collect(),
            label: Label::Positive,
            split: Split::Train,
        };
        assert!(Corpus::new(vec![doc(0, &["a"]), doc(1, &["b"])]).is_ok());
        assert!(Corpus::new(vec![doc(1, &["a"])]).is_err());
        assert!(matches!(
            Corpus::new(vec![doc(0, &[])]),
            Err(Error::EmptyDocument { doc_id: 0 })
        ));
    }
}
