//! Studies built on the other modules: learning curves over training-set
//! sizes, accuracy during embedding training with and without NB
//! sub-sampling, and the decomposition of ensemble logits.

mod curve;
mod logits;
pub mod plot;
mod progress;

pub use curve::{
    learning_curve, sample_subset, CurveReport, CurveRow, CurveSpec, CURVE_HEADER,
    DEFAULT_CURVE_SIZES,
};
pub use logits::{
    logit_analysis, parse_logit_csv, summarize, LogitReport, LogitRow, LogitSummary, LOGIT_HEADER,
};
pub use progress::{
    evaluate_doc_vectors, parse_progress_csv, plateau_summary, progress_csv, progress_study,
    run_seed, ProgressRecord, ProgressSpec, Variant, PROGRESS_HEADER,
};
