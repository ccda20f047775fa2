//! Additive decomposition of ensemble logits into their dense and sparse
//! parts, each carrying half of the intercept.

use std::fmt::Write as _;

use statrs::statistics::Statistics;

use crate::corpus::Split;
use crate::ensemble::{EnsembleInputs, FittedEnsemble};
use crate::guard::LabelGuard;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct LogitRow {
    pub doc_id: usize,
    /// Dense contribution plus half the intercept.
    pub dense_logit: f64,
    /// Sparse contribution plus half the intercept.
    pub sparse_logit: f64,
    pub half_intercept: f64,
    pub label: bool,
    pub dense_correct: bool,
    pub sparse_correct: bool,
    pub correct: bool,
}

impl LogitRow {
    pub fn total(&self) -> f64 {
        self.dense_logit + self.sparse_logit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogitSummary {
    pub documents: usize,
    pub dense_error: f64,
    pub sparse_error: f64,
    pub total_error: f64,
    /// Share of documents where exactly one part is wrong and the ensemble
    /// is right.
    pub rescued: f64,
    /// Pearson correlation of the two part logits within the positive and
    /// the negative class.
    pub corr_positive: f64,
    pub corr_negative: f64,
}

impl LogitSummary {
    pub fn mean_within_class_corr(&self) -> f64 {
        0.5 * (self.corr_positive + self.corr_negative)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogitReport {
    pub rows: Vec<LogitRow>,
    pub summary: LogitSummary,
}

/// Decompose the logits of `split` documents. Test labels are read through
/// the guard after all logits have been computed.
pub fn logit_analysis(
    fitted: &FittedEnsemble,
    inputs: &EnsembleInputs<'_>,
    split: Split,
    guard: &LabelGuard,
) -> Result<LogitReport> {
    let idx = inputs.meta.indices_in(split);
    let x = fitted.features(inputs, &idx)?;
    let parts = (0..x.rows())
        .map(|k| fitted.model.logit_parts(&x.row(k)))
        .collect::<Result<Vec<_>>>()?;
    let labels = if split == Split::Test {
        guard.reveal_test_labels(&idx)?
    } else {
        guard.fit_labels(&idx)?
    };
    let rows: Vec<LogitRow> = idx
        .iter()
        .zip(&parts)
        .zip(&labels)
        .map(|((&doc_id, p), &label)| {
            let half = 0.5 * p.intercept;
            let (d, s) = (p.dense + half, p.sparse + half);
            LogitRow {
                doc_id,
                dense_logit: d,
                sparse_logit: s,
                half_intercept: half,
                label,
                dense_correct: (d > 0.0) == label,
                sparse_correct: (s > 0.0) == label,
                correct: (p.total() > 0.0) == label,
            }
        })
        .collect();
    let summary = summarize(&rows);
    Ok(LogitReport { rows, summary })
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    if x.len() < 2 {
        return f64::NAN;
    }
    x.covariance(y) / (x.std_dev() * y.std_dev())
}

pub fn summarize(rows: &[LogitRow]) -> LogitSummary {
    let n = rows.len().max(1) as f64;
    let share = |f: &dyn Fn(&LogitRow) -> bool| rows.iter().filter(|r| f(r)).count() as f64 / n;
    let corr = |class: bool| {
        let (d, s): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter(|r| r.label == class)
            .map(|r| (r.dense_logit, r.sparse_logit))
            .unzip();
        pearson(&d, &s)
    };
    LogitSummary {
        documents: rows.len(),
        dense_error: share(&|r| !r.dense_correct),
        sparse_error: share(&|r| !r.sparse_correct),
        total_error: share(&|r| !r.correct),
        rescued: share(&|r| r.correct && (r.dense_correct != r.sparse_correct)),
        corr_positive: corr(true),
        corr_negative: corr(false),
    }
}

pub const LOGIT_HEADER: &str =
    "doc_id,dense_logit,sparse_logit,half_intercept,label,dense_correct,sparse_correct,correct";

impl LogitReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{LOGIT_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.doc_id,
                r.dense_logit,
                r.sparse_logit,
                r.half_intercept,
                u8::from(r.label),
                u8::from(r.dense_correct),
                u8::from(r.sparse_correct),
                u8::from(r.correct)
            );
        }
        out
    }

    pub fn summary_text(&self) -> String {
        let s = &self.summary;
        format!(
            "documents={}\ndense_error={}\nsparse_error={}\ntotal_error={}\nrescued={}\ncorr_positive={}\ncorr_negative={}\n",
            s.documents,
            s.dense_error,
            s.sparse_error,
            s.total_error,
            s.rescued,
            s.corr_positive,
            s.corr_negative
        )
    }
}

pub fn parse_logit_csv(text: &str) -> Result<Vec<LogitRow>> {
    use crate::Error;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next() != Some(LOGIT_HEADER) {
        return Err(Error::parse("logit csv", "unexpected header"));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = || Error::parse(format!("logit csv row {}", n + 2), line.to_string());
            let f: Vec<&str> = line.split(',').collect();
            let [id, d, s, h, y, dc, sc, c] = f[..] else {
                return Err(bad());
            };
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad());
            let flag = |v: &str| Ok(v == "1");
            Ok(LogitRow {
                doc_id: id.parse().map_err(|_| bad())?,
                dense_logit: num(d)?,
                sparse_logit: num(s)?,
                half_intercept: num(h)?,
                label: flag(y)?,
                dense_correct: flag(dc)?,
                sparse_correct: flag(sc)?,
                correct: flag(c)?,
            })
        })
        .collect()
}
