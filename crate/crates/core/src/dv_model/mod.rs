//! Document and n-gram embeddings trained with the cosine-similarity
//! objective and negative sampling.
//!
//! For a document `d` and each n-gram `u` it contains, one SGD step lowers
//!
//! ```text
//! -log σ(α·cos(v_d, v_u)) - Σ_{u'} log σ(-α·cos(v_d, v_u'))
//! ```
//!
//! where the `u'` are negative n-grams drawn from the vocabulary. The
//! [`Objective::DotProduct`] mode replaces `α·cos` by the plain inner product
//! (the paragraph-vector objective) as a baseline.

mod io;
mod loss;
mod matrix;
mod train;

pub use io::{format_doc_vectors, parse_embeddings, read_doc_vectors, read_embeddings, EmbeddingFile};
pub use loss::{log_sigmoid, pair_loss, sigmoid, softplus, PairLoss, COSINE_EPS};
pub use matrix::EmbeddingMatrix;
pub use train::{
    train, train_encoded, Checkpoint, CheckpointCadence, FileCheckpointer, Monitor,
};

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Cosine,
    DotProduct,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(Objective::Cosine),
            "dot" | "dot-product" => Ok(Objective::DotProduct),
            other => Err(Error::UnknownTag {
                field: "objective",
                tag: other.into(),
            }),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Cosine => "cosine",
            Objective::DotProduct => "dot",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    /// Scale applied to the cosine before the sigmoid. Ignored by
    /// [`Objective::DotProduct`].
    pub alpha: f64,
    /// Negative samples per positive n-gram occurrence.
    pub negatives: usize,
    pub epochs: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    pub objective: Objective,
    /// Exponent of the negative-sampling distribution `count^power`.
    pub sampling_power: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 500,
            alpha: 6.0,
            negatives: 5,
            epochs: 20,
            lr_start: 0.025,
            lr_end: 1e-4,
            objective: Objective::Cosine,
            sampling_power: crate::vocab::DEFAULT_SAMPLING_POWER,
            seed: 1,
            workers: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be > 0, got {}", self.alpha));
        }
        if self.dim < 2 {
            return bad(format!("dim must be >= 2, got {}", self.dim));
        }
        if self.negatives < 1 {
            return bad("negatives must be >= 1".into());
        }
        if self.epochs < 1 {
            return bad("epochs must be >= 1".into());
        }
        if self.workers < 1 {
            return bad("workers must be >= 1".into());
        }
        if !(self.lr_end > 0.0 && self.lr_start >= self.lr_end && self.lr_start.is_finite()) {
            return bad(format!(
                "need lr_start >= lr_end > 0, got {} and {}",
                self.lr_start, self.lr_end
            ));
        }
        Ok(())
    }
}

/// Trained embeddings.
#[derive(Debug, Clone)]
pub struct DVModel {
    pub doc_vectors: EmbeddingMatrix,
    pub ngram_vectors: EmbeddingMatrix,
    pub config: TrainConfig,
    /// Mean pair loss per epoch.
    pub epoch_losses: Vec<f64>,
    /// Documents processed over all epochs.
    pub steps: u64,
}

/// Which matrix to export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    Documents,
    NGrams,
}

impl DVModel {
    /// Embedding file for one of the two matrices. Document keys are doc ids,
    /// n-gram keys are vocabulary keys.
    pub fn export_vectors(&self, which: VectorKind, vocab: &crate::vocab::Vocabulary) -> String {
        match which {
            VectorKind::Documents => {
                io::format_embeddings(&self.doc_vectors, |i| i.to_string())
            }
            VectorKind::NGrams => {
                io::format_embeddings(&self.ngram_vectors, |i| vocab.ngram(i as u32).key())
            }
        }
    }
}
