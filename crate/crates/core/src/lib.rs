//! Document-embedding laboratory.
//!
//! Trains document and n-gram embeddings under a cosine-similarity objective
//! with negative sampling, builds Naive-Bayes weighted bag-of-n-grams
//! features, and evaluates concatenated ensembles of the two under explicit
//! alignment schemes so that label leakage through misaligned rows can be
//! reproduced and audited.
//!
//! The pipeline is:
//!
//! 1. [`corpus`]: ingest a line-per-document file plus a metadata table,
//!    infer the block layout, extract n-grams.
//! 2. [`vocab`]: count n-grams, apply frequency thresholds, build the
//!    negative-sampling table.
//! 3. [`nb_features`]: fit Naive-Bayes importance weights on labeled training
//!    documents, build weighted sparse vectors and sub-sampling probabilities.
//! 4. [`dv_model`]: train document vectors.
//! 5. [`classifier`]: L2-regularized logistic regression.
//! 6. [`ensemble`]: concatenate both representations under a shuffling
//!    scheme and evaluate.
//! 7. [`experiments`]: learning curves, training-progress study, logit
//!    decomposition, SVG charts.

pub mod classifier;
pub mod corpus;
pub mod dv_model;
pub mod ensemble;
mod error;
pub mod experiments;
pub mod guard;
pub mod nb_features;
mod par;
pub mod seed;
pub mod synthetic;
pub mod vocab;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
