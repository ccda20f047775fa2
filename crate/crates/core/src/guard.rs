//! Sealed labels: fitting code can read Train/Validation labels, while Test
//! labels are only consumed inside [`LabelGuard::score_test`].

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::corpus::{CorpusMeta, Label, Split};
use crate::{Error, Result};

#[derive(Debug)]
pub struct LabelGuard {
    labels: Vec<Label>,
    splits: Vec<Split>,
    reveals: AtomicUsize,
}

impl LabelGuard {
    pub fn new(meta: &CorpusMeta) -> Self {
        let (labels, splits) = meta.tags().iter().copied().unzip();
        LabelGuard {
            labels,
            splits,
            reveals: AtomicUsize::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn split(&self, i: usize) -> Split {
        self.splits[i]
    }

    /// Binary label of a non-test document.
    pub fn fit_label(&self, i: usize) -> Result<bool> {
        if self.splits[i] == Split::Test {
            return Err(Error::TestLabelAccess(i));
        }
        self.labels[i].as_bool().ok_or_else(|| {
            Error::InvalidArgument(format!("document {i} is unlabeled"))
        })
    }

    pub fn fit_labels(&self, indices: &[usize]) -> Result<Vec<bool>> {
        indices.iter().map(|&i| self.fit_label(i)).collect()
    }

    /// Accuracy of `predictions[k]` against the label of `indices[k]`; every
    /// index must be a test document. Each call counts as one reveal.
    pub fn score_test(&self, indices: &[usize], predictions: &[bool]) -> Result<f64> {
        if indices.len() != predictions.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                actual: predictions.len(),
            });
        }
        if indices.is_empty() {
            return Err(Error::InvalidArgument("no test documents to score".into()));
        }
        let mut correct = 0usize;
        for (&i, &p) in indices.iter().zip(predictions) {
            if self.splits[i] != Split::Test {
                return Err(Error::InvalidArgument(format!(
                    "document {i} is not a test document"
                )));
            }
            let y = self.labels[i]
                .as_bool()
                .ok_or_else(|| Error::InvalidArgument(format!("document {i} is unlabeled")))?;
            correct += usize::from(y == p);
        }
        self.reveals.fetch_add(1, Ordering::Relaxed);
        Ok(correct as f64 / indices.len() as f64)
    }

    /// Labels of test documents for post-hoc analysis of final predictions.
    /// Counts as one reveal.
    pub fn reveal_test_labels(&self, indices: &[usize]) -> Result<Vec<bool>> {
        let labels = indices
            .iter()
            .map(|&i| {
                if self.splits[i] != Split::Test {
                    return Err(Error::InvalidArgument(format!(
                        "document {i} is not a test document"
                    )));
                }
                self.labels[i]
                    .as_bool()
                    .ok_or_else(|| Error::InvalidArgument(format!("document {i} is unlabeled")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.reveals.fetch_add(1, Ordering::Relaxed);
        Ok(labels)
    }

    /// Number of completed test-label reads.
    pub fn reveals(&self) -> usize {
        self.reveals.load(Ordering::Relaxed)
    }
}
