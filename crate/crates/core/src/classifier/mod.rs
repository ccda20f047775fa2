//! L2-regularized binary logistic regression over dense, sparse, or
//! concatenated features.
//!
//! The minimized objective is
//! `(1/N) Σ log(1 + exp(-y_i z_i)) + ‖w‖² / (2 C N)` with `y ∈ {-1, +1}`,
//! `z = w·x + b` and an unregularized intercept `b`; it has the same minimizer
//! as the usual `C Σ loss + ‖w‖²/2`.

mod features;
mod lbfgs;

use std::fmt::Write as _;
use std::path::Path;

use crate::dv_model::{sigmoid, softplus};
use crate::par::map_indexed as map_rows;
use crate::{Error, Result};

pub use features::{FeatureMatrix, Row};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Stop once the gradient norm of the objective drops to this value.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tol: 1e-6,
            max_iter: 1000,
        }
    }
}

/// Optimizer trace of one fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitInfo {
    /// Objective value before the first and after every iteration.
    pub objective_history: Vec<f64>,
    pub grad_norm: f64,
    pub iterations: usize,
    /// False when `max_iter` was hit or the line search stalled first; the
    /// model is still the best point found.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    /// Dense-block weights followed by sparse-block weights.
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub c: f64,
    pub dense_dim: usize,
}

/// Additive split of a logit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogitParts {
    pub dense: f64,
    pub sparse: f64,
    pub intercept: f64,
}

impl LogitParts {
    pub fn total(&self) -> f64 {
        self.dense + self.sparse + self.intercept
    }
}

impl LogRegModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn sparse_dim(&self) -> usize {
        self.weights.len() - self.dense_dim
    }

    fn check(&self, row: &Row<'_>) -> Result<()> {
        if row.dense.len() != self.dense_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dense_dim,
                actual: row.dense.len(),
            });
        }
        if let Some(&(id, _)) = row.sparse.iter().max_by_key(|e| e.0) {
            if id as usize >= self.sparse_dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.sparse_dim(),
                    actual: id as usize + 1,
                });
            }
        }
        Ok(())
    }

    #[inline]
    fn parts_unchecked(&self, row: &Row<'_>) -> LogitParts {
        let (wd, ws) = self.weights.split_at(self.dense_dim);
        let dense: f64 = wd.iter().zip(row.dense).map(|(w, x)| w * x).sum();
        let sparse: f64 = row.sparse.iter().map(|&(id, v)| ws[id as usize] * v).sum();
        LogitParts {
            dense: row.dense_scale * dense,
            sparse,
            intercept: self.intercept,
        }
    }

    pub fn logit_parts(&self, row: &Row<'_>) -> Result<LogitParts> {
        self.check(row)?;
        Ok(self.parts_unchecked(row))
    }

    /// `w·x + b`.
    pub fn logit(&self, row: &Row<'_>) -> Result<f64> {
        Ok(self.logit_parts(row)?.total())
    }

    pub fn logits(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        if x.dense_dim() != self.dense_dim || x.sparse_dim() > self.sparse_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.dim(),
            });
        }
        Ok(map_rows(x.rows(), |i| self.parts_unchecked(&x.row(i)).total()))
    }

    /// Positive class where the logit is positive.
    pub fn predict(&self, x: &FeatureMatrix) -> Result<Vec<bool>> {
        Ok(self.logits(x)?.into_iter().map(|z| z > 0.0).collect())
    }

    /// Accuracy against the labels carried by `x`.
    pub fn accuracy(&self, x: &FeatureMatrix) -> Result<f64> {
        let labels = x
            .labels()
            .ok_or_else(|| Error::InvalidArgument("features carry no labels".into()))?;
        if labels.is_empty() {
            return Err(Error::InvalidArgument("no rows to score".into()));
        }
        let pred = self.predict(x)?;
        let hits = pred.iter().zip(labels).filter(|(p, y)| p == y).count();
        Ok(hits as f64 / labels.len() as f64)
    }

    /// Multiply the dense weights by `factor`. A model fitted with dense
    /// scale `s` and rescaled by `s / s'` gives identical logits on features
    /// with dense scale `s'`.
    pub fn rescale_dense(&mut self, factor: f64) {
        self.weights[..self.dense_dim]
            .iter_mut()
            .for_each(|w| *w *= factor);
    }

    /// `feature_id  weight` rows, then `intercept` and `C` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "# dense_dim={} sparse_dim={}\nfeature_id\tweight\n",
            self.dense_dim,
            self.sparse_dim()
        );
        for (i, w) in self.weights.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{w}");
        }
        let _ = writeln!(out, "intercept\t{}", self.intercept);
        let _ = writeln!(out, "C\t{}", self.c);
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut dense_dim = None;
        let mut weights = Vec::new();
        let (mut intercept, mut c) = (None, None);
        let mut header = false;
        for (n, line) in text.lines().enumerate() {
            let loc = || format!("model line {}", n + 1);
            if let Some(comment) = line.strip_prefix('#') {
                for kv in comment.split_whitespace() {
                    if let Some(v) = kv.strip_prefix("dense_dim=") {
                        dense_dim = Some(v.parse().map_err(|_| Error::parse(loc(), kv))?);
                    }
                }
                continue;
            }
            if !header {
                if line != "feature_id\tweight" {
                    return Err(Error::parse(loc(), "expected model header"));
                }
                header = true;
                continue;
            }
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(loc(), "expected 2 fields"))?;
            let value: f64 = value.parse().map_err(|_| Error::parse(loc(), "bad number"))?;
            match key {
                "intercept" => intercept = Some(value),
                "C" => c = Some(value),
                id => {
                    let id: usize = id.parse().map_err(|_| Error::parse(loc(), "bad feature id"))?;
                    if id != weights.len() {
                        return Err(Error::parse(loc(), "feature ids must be consecutive"));
                    }
                    weights.push(value);
                }
            }
        }
        let missing = |what: &str| Error::parse("model file", format!("missing {what}"));
        let model = LogRegModel {
            dense_dim: dense_dim.unwrap_or(0),
            weights,
            intercept: intercept.ok_or_else(|| missing("intercept"))?,
            c: c.ok_or_else(|| missing("C"))?,
        };
        if model.dense_dim > model.weights.len() {
            return Err(Error::parse("model file", "dense_dim exceeds weight count"));
        }
        if model.c.is_nan() || model.c <= 0.0 || !model.weights.iter().all(|w| w.is_finite()) {
            return Err(Error::parse("model file", "invalid parameters"));
        }
        Ok(model)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }
}

/// Regularized objective and its gradient at `theta = [w, b]`.
pub(crate) fn objective(x: &FeatureMatrix, y: &[bool], c: f64, theta: &[f64], grad: &mut [f64]) -> f64 {
    let d = x.dim();
    let dd = x.dense_dim();
    let n = x.rows() as f64;
    let (w, b) = (&theta[..d], theta[d]);
    // Per-row loss and dloss/dz, computed in parallel; everything summed in
    // row order so the result does not depend on the thread count.
    let per_row: Vec<(f64, f64)> = map_rows(x.rows(), |i| {
        let r = x.row(i);
        let dense: f64 = w[..dd].iter().zip(r.dense).map(|(w, v)| w * v).sum();
        let sparse: f64 = r.sparse.iter().map(|&(id, v)| w[dd + id as usize] * v).sum();
        let z = b + r.dense_scale * dense + sparse;
        let sign = if y[i] { 1.0 } else { -1.0 };
        (softplus(-sign * z), -sign * sigmoid(-sign * z))
    });
    grad.iter_mut().for_each(|g| *g = 0.0);
    let mut loss = 0.0;
    for (i, &(l, dz)) in per_row.iter().enumerate() {
        loss += l;
        let r = x.row(i);
        let sd = dz * r.dense_scale;
        for (g, v) in grad[..dd].iter_mut().zip(r.dense) {
            *g += sd * v;
        }
        for &(id, v) in r.sparse {
            grad[dd + id as usize] += dz * v;
        }
        grad[d] += dz;
    }
    let reg = 1.0 / (c * n);
    let mut penalty = 0.0;
    for (g, &wj) in grad[..d].iter_mut().zip(w) {
        *g = *g / n + reg * wj;
        penalty += wj * wj;
    }
    grad[d] /= n;
    loss / n + 0.5 * reg * penalty
}

fn check_fit_input(x: &FeatureMatrix, c: f64) -> Result<&[bool]> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("C must be > 0, got {c}")));
    }
    let y = x
        .labels()
        .ok_or_else(|| Error::InvalidArgument("training features carry no labels".into()))?;
    if !(y.iter().any(|&v| v) && y.iter().any(|&v| !v)) {
        return Err(Error::SingleClass);
    }
    Ok(y)
}

/// Fit from zero weights with full-batch L-BFGS. Deterministic for fixed
/// inputs.
pub fn fit(x: &FeatureMatrix, c: f64, options: &FitOptions) -> Result<LogRegModel> {
    fit_with_info(x, c, options).map(|(m, _)| m)
}

pub fn fit_with_info(x: &FeatureMatrix, c: f64, options: &FitOptions) -> Result<(LogRegModel, FitInfo)> {
    let y = check_fit_input(x, c)?;
    let d = x.dim();
    let out = lbfgs::minimize(vec![0.0; d + 1], options.tol, options.max_iter, |theta, g| {
        objective(x, y, c, theta, g)
    });
    if !out.x.iter().all(|v| v.is_finite()) || !out.history.last().is_some_and(|f| f.is_finite()) {
        return Err(Error::NonFinite("logistic regression parameters".into()));
    }
    let mut weights = out.x;
    let intercept = weights.pop().expect("intercept slot");
    Ok((
        LogRegModel {
            weights,
            intercept,
            c,
            dense_dim: x.dense_dim(),
        },
        FitInfo {
            objective_history: out.history,
            grad_norm: out.grad_norm,
            iterations: out.iterations,
            converged: out.converged,
        },
    ))
}

/// `k` points log-spaced over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..k)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (k - 1) as f64))
        .collect()
}

/// Ten points log-spaced over `[1e-4, 1e4]`.
pub fn default_c_grid() -> Vec<f64> {
    log_grid(1e-4, 1e4, 10)
}

/// Result of a C search.
#[derive(Debug, Clone)]
pub struct Tuned {
    pub c: f64,
    /// Held-out accuracy of the chosen C (validation or cross-validation).
    pub accuracy: f64,
    /// `(C, accuracy)` for every grid point, ascending in C.
    pub scores: Vec<(f64, f64)>,
    /// Fitted on the full training features with the chosen C.
    pub model: LogRegModel,
}

fn sorted_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty C grid".into()));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// First maximum over an ascending grid, so ties go to the smaller C.
fn best(scores: &[(f64, f64)]) -> (f64, f64) {
    let mut top = scores[0];
    for &s in &scores[1..] {
        if s.1 > top.1 {
            top = s;
        }
    }
    top
}

/// Refit on `train` for every C in `grid` and keep the one with the best
/// accuracy on `valid`.
pub fn tune_c(
    train: &FeatureMatrix,
    valid: &FeatureMatrix,
    grid: &[f64],
    options: &FitOptions,
) -> Result<Tuned> {
    let grid = sorted_grid(grid)?;
    let mut scores = Vec::with_capacity(grid.len());
    let mut models = Vec::with_capacity(grid.len());
    for &c in &grid {
        let m = fit(train, c, options)?;
        scores.push((c, m.accuracy(valid)?));
        models.push(m);
    }
    let (c, accuracy) = best(&scores);
    let model = models.swap_remove(grid.iter().position(|&g| g == c).expect("in grid"));
    Ok(Tuned {
        c,
        accuracy,
        scores,
        model,
    })
}

/// Stratified fold index (`0..folds`) of every row; each class is shuffled
/// with `rng` and dealt round-robin.
pub fn stratified_folds(labels: &[bool], folds: usize, rng: &mut impl rand::Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut out = vec![0; labels.len()];
    for class in [true, false] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(rng);
        for (k, i) in idx.into_iter().enumerate() {
            out[i] = k % folds;
        }
    }
    out
}

/// C search by stratified k-fold cross-validation on `train`, then a refit
/// on all of `train`.
pub fn tune_c_cv(
    train: &FeatureMatrix,
    grid: &[f64],
    folds: usize,
    seed: u64,
    options: &FitOptions,
) -> Result<Tuned> {
    let grid = sorted_grid(grid)?;
    if folds < 2 {
        return Err(Error::InvalidArgument("need at least 2 folds".into()));
    }
    let y = check_fit_input(train, grid[0])?;
    let assign = stratified_folds(y, folds, &mut crate::seed::rng(seed, "cv-folds", &[]));
    let splits: Vec<(FeatureMatrix, FeatureMatrix)> = (0..folds)
        .map(|f| {
            let (held, kept): (Vec<usize>, Vec<usize>) =
                (0..train.rows()).partition(|&i| assign[i] == f);
            (train.select(&kept), train.select(&held))
        })
        .collect();
    let mut scores = Vec::with_capacity(grid.len());
    for &c in &grid {
        let mut hits = 0.0;
        for (tr, te) in &splits {
            hits += fit(tr, c, options)?.accuracy(te)? * te.rows() as f64;
        }
        scores.push((c, hits / train.rows() as f64));
    }
    let (c, accuracy) = best(&scores);
    Ok(Tuned {
        c,
        accuracy,
        scores,
        model: fit(train, c, options)?,
    })
}
