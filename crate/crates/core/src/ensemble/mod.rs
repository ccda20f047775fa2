//! Concatenated dense + sparse ensembles under explicit alignment schemes.
//!
//! A scheme decides which document's dense vector is paired with each
//! document's sparse vector and label. Correct matching pairs every document
//! with itself; the shuffled schemes reproduce in-class and cross-class
//! misalignments of the dense table, which leak label information whenever
//! the two views of the same class are paired across documents.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::classifier::{self, FeatureMatrix, FitOptions, LogRegModel};
use crate::corpus::{AlignmentMap, BlockLayout, CorpusMeta, Split};
use crate::dv_model::{EmbeddingFile, EmbeddingMatrix};
use crate::guard::LabelGuard;
use crate::nb_features::BonVector;
use crate::{seed, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    CorrectMatching,
    /// Every block permuted within itself.
    OriginalMismatch,
    /// A: test blocks permuted within themselves.
    TestInClass,
    /// B: the test split permuted as a whole, across classes.
    TestCrossClass,
    /// C: train and test blocks permuted within themselves.
    TrainTestInClass,
    /// D: train and test splits each permuted as a whole.
    TrainTestCrossClass,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::CorrectMatching,
        SchemeKind::OriginalMismatch,
        SchemeKind::TestInClass,
        SchemeKind::TestCrossClass,
        SchemeKind::TrainTestInClass,
        SchemeKind::TrainTestCrossClass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::CorrectMatching => "correct",
            SchemeKind::OriginalMismatch => "original",
            SchemeKind::TestInClass => "A",
            SchemeKind::TestCrossClass => "B",
            SchemeKind::TrainTestInClass => "C",
            SchemeKind::TrainTestCrossClass => "D",
        }
    }

    /// Whether documents of `split` are permuted.
    pub fn touches(self, split: Split) -> bool {
        use SchemeKind::*;
        match self {
            CorrectMatching => false,
            OriginalMismatch => true,
            TestInClass | TestCrossClass => split == Split::Test,
            TrainTestInClass | TrainTestCrossClass => {
                matches!(split, Split::Train | Split::Test)
            }
        }
    }

    pub fn is_cross_class(self) -> bool {
        matches!(self, SchemeKind::TestCrossClass | SchemeKind::TrainTestCrossClass)
    }

    /// Single deterministic run for the unshuffled rows, `n` seeds otherwise.
    pub fn is_seeded(self) -> bool {
        !matches!(self, SchemeKind::CorrectMatching | SchemeKind::OriginalMismatch)
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "correct" => SchemeKind::CorrectMatching,
            "original" => SchemeKind::OriginalMismatch,
            "A" | "a" => SchemeKind::TestInClass,
            "B" | "b" => SchemeKind::TestCrossClass,
            "C" | "c" => SchemeKind::TrainTestInClass,
            "D" | "d" => SchemeKind::TrainTestCrossClass,
            other => {
                return Err(Error::UnknownTag {
                    field: "scheme",
                    tag: other.into(),
                })
            }
        })
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShuffleScheme {
    pub kind: SchemeKind,
    pub seed: u64,
}

impl ShuffleScheme {
    pub fn new(kind: SchemeKind, seed: u64) -> Self {
        ShuffleScheme { kind, seed }
    }
}

/// Permutation of the dense table under `scheme`: position `i` receives the
/// dense vector of document `map.get(i)`.
pub fn apply_scheme(scheme: &ShuffleScheme, layout: &BlockLayout) -> AlignmentMap {
    let mut perm: Vec<usize> = (0..layout.len()).collect();
    let kind = scheme.kind;
    if kind.is_cross_class() {
        for split in [Split::Train, Split::Validation, Split::Test, Split::Extra] {
            if !kind.touches(split) {
                continue;
            }
            let members: Vec<usize> = layout
                .blocks()
                .iter()
                .filter(|b| b.split == split)
                .flat_map(|b| b.range())
                .collect();
            let mut shuffled = members.clone();
            let tag = split_index(split);
            shuffled.shuffle(&mut seed::rng(scheme.seed, "scheme-cross", &[tag]));
            for (&slot, &src) in members.iter().zip(&shuffled) {
                perm[slot] = src;
            }
        }
    } else {
        for (k, b) in layout.blocks().iter().enumerate() {
            if kind.touches(b.split) {
                perm[b.range()].shuffle(&mut seed::rng(scheme.seed, "scheme-block", &[k as u64]));
            }
        }
    }
    AlignmentMap::from_perm(perm).expect("block shuffles are bijections")
}

fn split_index(split: Split) -> u64 {
    match split {
        Split::Train => 0,
        Split::Validation => 1,
        Split::Test => 2,
        Split::Extra => 3,
    }
}

/// Test positions from `test_map`, all others from `train_map`. Both maps
/// must keep every index inside its split.
pub fn merge_by_split(
    train_map: &AlignmentMap,
    test_map: &AlignmentMap,
    meta: &CorpusMeta,
) -> Result<AlignmentMap> {
    let perm = (0..meta.len())
        .map(|i| {
            if meta.split(i) == Split::Test {
                test_map.get(i)
            } else {
                train_map.get(i)
            }
        })
        .collect();
    AlignmentMap::from_perm(perm)
        .map_err(|_| Error::InvalidArgument("maps do not preserve splits".into()))
}

/// How `(s, C)` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Validation split if it holds both classes, cross-validation otherwise.
    Auto,
    /// Grid over `scale_grid × c_grid` scored on the validation split.
    Validation,
    /// `scale` fixed; C by stratified k-fold cross-validation on Train.
    CrossValidation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    /// Dense multiplier when not tuned.
    pub scale: f64,
    pub c_grid: Vec<f64>,
    pub scale_grid: Vec<f64>,
    pub protocol: Protocol,
    pub cv_folds: usize,
    /// Reuse one C for every scheme instead of tuning per scheme.
    pub fixed_c: Option<f64>,
    pub fit: FitOptions,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            scale: 1.0,
            c_grid: classifier::default_c_grid(),
            scale_grid: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
            protocol: Protocol::Auto,
            cv_folds: 5,
            fixed_c: None,
            fit: FitOptions::default(),
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: &f64| *v > 0.0 && v.is_finite();
        if !positive(&self.scale) || !self.scale_grid.iter().all(positive) {
            return Err(Error::InvalidArgument("scales must be > 0".into()));
        }
        if self.c_grid.is_empty() || !self.c_grid.iter().all(positive) {
            return Err(Error::InvalidArgument("C grid must be non-empty and > 0".into()));
        }
        if self.fixed_c.is_some_and(|c| !positive(&c)) {
            return Err(Error::InvalidArgument("fixed C must be > 0".into()));
        }
        if self.protocol == Protocol::Validation && self.scale_grid.is_empty() {
            return Err(Error::InvalidArgument("empty scale grid".into()));
        }
        Ok(())
    }
}

/// The two representations and the corpus they describe, row `i` being doc
/// id `i`.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleInputs<'a> {
    pub dense: &'a EmbeddingMatrix,
    pub sparse: &'a [BonVector],
    pub sparse_dim: usize,
    pub meta: &'a CorpusMeta,
}

/// Which representation(s) a model sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum View {
    Dense,
    Sparse,
    Both,
}

impl View {
    pub fn name(self) -> &'static str {
        match self {
            View::Dense => "DV",
            View::Sparse => "BON",
            View::Both => "DV+BON",
        }
    }

    fn uses_dense(self) -> bool {
        self != View::Sparse
    }

    fn uses_sparse(self) -> bool {
        self != View::Dense
    }
}

impl FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "DV" | "dv" => Ok(View::Dense),
            "BON" | "bon" => Ok(View::Sparse),
            "DV+BON" | "dv+bon" | "ensemble" => Ok(View::Both),
            other => Err(Error::UnknownTag {
                field: "model",
                tag: other.into(),
            }),
        }
    }
}

impl EnsembleInputs<'_> {
    fn check(&self, view: View) -> Result<()> {
        let n = self.meta.len();
        let dense_ok = !view.uses_dense() || self.dense.rows() == n;
        let sparse_ok = !view.uses_sparse() || self.sparse.len() == n;
        if !dense_ok || !sparse_ok {
            return Err(Error::IdSetMismatch(format!(
                "dense table has {} rows, sparse table {}, corpus {n}",
                self.dense.rows(),
                self.sparse.len()
            )));
        }
        Ok(())
    }

    /// Features `dense[map(i)] ‖ sparse[i]` for `indices`, dense scale 1.
    pub fn features(&self, map: &AlignmentMap, indices: &[usize]) -> Result<FeatureMatrix> {
        self.view_features(View::Both, map, indices)
    }

    pub fn view_features(
        &self,
        view: View,
        map: &AlignmentMap,
        indices: &[usize],
    ) -> Result<FeatureMatrix> {
        let dim = if view.uses_dense() { self.dense.dim() } else { 0 };
        let mut dense = Vec::with_capacity(indices.len() * dim);
        let mut sparse = Vec::with_capacity(indices.len());
        for &i in indices {
            if view.uses_dense() {
                dense.extend(self.dense.row(map.get(i)).iter().map(|&x| x as f64));
            }
            sparse.push(if view.uses_sparse() {
                self.sparse[i].entries.clone()
            } else {
                Vec::new()
            });
        }
        let sparse_dim = if view.uses_sparse() { self.sparse_dim } else { 0 };
        FeatureMatrix::from_parts(dim, dense, sparse_dim, sparse)
    }
}

/// A fitted ensemble and how it was chosen.
#[derive(Debug, Clone)]
pub struct FittedEnsemble {
    pub view: View,
    pub alignment: AlignmentMap,
    pub model: LogRegModel,
    pub scale: f64,
    pub c: f64,
    /// Held-out accuracy that selected `(scale, C)`; `None` with a fixed C
    /// and scale.
    pub tuning_accuracy: Option<f64>,
    pub protocol: &'static str,
}

impl FittedEnsemble {
    /// Features of `indices` as the model sees them.
    pub fn features(&self, inputs: &EnsembleInputs<'_>, indices: &[usize]) -> Result<FeatureMatrix> {
        inputs
            .view_features(self.view, &self.alignment, indices)?
            .with_dense_scale(self.scale)
    }
}

fn has_both_classes(guard: &LabelGuard, indices: &[usize]) -> Result<bool> {
    let labels = guard.fit_labels(indices)?;
    Ok(labels.iter().any(|&l| l) && labels.iter().any(|&l| !l))
}

/// Fit on Train with `alignment` applied to the dense table, choosing
/// `(s, C)` per `config`. Only Train and Validation labels are read.
pub fn fit_ensemble(
    inputs: &EnsembleInputs<'_>,
    alignment: AlignmentMap,
    config: &EnsembleConfig,
    guard: &LabelGuard,
    cv_seed: u64,
) -> Result<FittedEnsemble> {
    let train_idx = inputs.meta.indices_in(Split::Train);
    fit_view(inputs, View::Both, alignment, &train_idx, config, guard, cv_seed)
}

/// Fit a model over `view` on the documents `train_idx`. The dense scale is
/// only tuned when both views are used.
pub fn fit_view(
    inputs: &EnsembleInputs<'_>,
    view: View,
    alignment: AlignmentMap,
    train_idx: &[usize],
    config: &EnsembleConfig,
    guard: &LabelGuard,
    cv_seed: u64,
) -> Result<FittedEnsemble> {
    inputs.check(view)?;
    config.validate()?;
    if alignment.len() != inputs.meta.len() {
        return Err(Error::IdSetMismatch("alignment does not cover the corpus".into()));
    }
    let valid_idx = inputs.meta.indices_in(Split::Validation);
    let train = inputs
        .view_features(view, &alignment, train_idx)?
        .with_labels(guard.fit_labels(train_idx)?)?;
    let use_validation = match config.protocol {
        Protocol::Validation => true,
        Protocol::CrossValidation => false,
        Protocol::Auto => !valid_idx.is_empty() && has_both_classes(guard, &valid_idx)?,
    };

    if use_validation {
        if valid_idx.is_empty() {
            return Err(Error::InvalidArgument("no validation split to tune on".into()));
        }
        let mut train = train;
        let mut valid = inputs
            .view_features(view, &alignment, &valid_idx)?
            .with_labels(guard.fit_labels(&valid_idx)?)?;
        let c_grid = config.fixed_c.map_or_else(|| config.c_grid.clone(), |c| vec![c]);
        let mut scales = if view == View::Both {
            config.scale_grid.clone()
        } else {
            vec![1.0]
        };
        scales.sort_by(f64::total_cmp);
        scales.dedup();
        let mut best: Option<(f64, classifier::Tuned)> = None;
        for s in scales {
            train.set_dense_scale(s)?;
            valid.set_dense_scale(s)?;
            let tuned = classifier::tune_c(&train, &valid, &c_grid, &config.fit)?;
            if best.as_ref().is_none_or(|(_, b)| tuned.accuracy > b.accuracy) {
                best = Some((s, tuned));
            }
        }
        let (scale, tuned) = best.expect("non-empty scale grid");
        return Ok(FittedEnsemble {
            view,
            alignment,
            model: tuned.model,
            scale,
            c: tuned.c,
            tuning_accuracy: Some(tuned.accuracy),
            protocol: "validation",
        });
    }

    let scale = if view == View::Both { config.scale } else { 1.0 };
    let train = train.with_dense_scale(scale)?;
    if let Some(c) = config.fixed_c {
        return Ok(FittedEnsemble {
            view,
            alignment,
            model: classifier::fit(&train, c, &config.fit)?,
            scale,
            c,
            tuning_accuracy: None,
            protocol: "fixed",
        });
    }
    let tuned = classifier::tune_c_cv(&train, &config.c_grid, config.cv_folds, cv_seed, &config.fit)?;
    Ok(FittedEnsemble {
        view,
        alignment,
        model: tuned.model,
        scale,
        c: tuned.c,
        tuning_accuracy: Some(tuned.accuracy),
        protocol: "cv",
    })
}

/// One evaluated run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    /// `correct`, `A`, ... or `train>test` for mixed schemes.
    pub scheme: String,
    pub seed: u64,
    pub scale: f64,
    pub c: f64,
    pub tuning_accuracy: Option<f64>,
    pub test_accuracy: f64,
    pub protocol: &'static str,
}

/// Train under `train_scheme`, test under `test_scheme` (normally the same).
pub fn evaluate_mixed(
    inputs: &EnsembleInputs<'_>,
    train_scheme: &ShuffleScheme,
    test_scheme: &ShuffleScheme,
    config: &EnsembleConfig,
    guard: &LabelGuard,
) -> Result<EnsembleRun> {
    inputs.check(View::Both)?;
    let layout = inputs.meta.layout();
    let train_map = apply_scheme(train_scheme, layout);
    let alignment = if train_scheme == test_scheme {
        train_map
    } else {
        merge_by_split(&train_map, &apply_scheme(test_scheme, layout), inputs.meta)?
    };
    let fitted = fit_ensemble(inputs, alignment, config, guard, train_scheme.seed)?;
    let test_idx = inputs.meta.indices_in(Split::Test);
    let test = fitted.features(inputs, &test_idx)?;
    let predictions = fitted.model.predict(&test)?;
    let test_accuracy = guard.score_test(&test_idx, &predictions)?;
    let scheme = if train_scheme.kind == test_scheme.kind {
        train_scheme.kind.name().to_string()
    } else {
        format!("{}>{}", train_scheme.kind, test_scheme.kind)
    };
    Ok(EnsembleRun {
        scheme,
        seed: test_scheme.seed,
        scale: fitted.scale,
        c: fitted.c,
        tuning_accuracy: fitted.tuning_accuracy,
        test_accuracy,
        protocol: fitted.protocol,
    })
}

/// Permute the dense table by `scheme`, concatenate, tune, fit on Train and
/// report Test accuracy.
pub fn evaluate_ensemble(
    inputs: &EnsembleInputs<'_>,
    scheme: &ShuffleScheme,
    config: &EnsembleConfig,
    guard: &LabelGuard,
) -> Result<EnsembleRun> {
    evaluate_mixed(inputs, scheme, scheme, config, guard)
}

/// Seeds of a multi-seed replication: one run for the unshuffled rows,
/// `n` consecutive seeds from `base` for the shuffled schemes.
pub fn replication_seeds(kind: SchemeKind, base: u64, n: usize) -> Vec<u64> {
    if kind.is_seeded() {
        (0..n as u64).map(|k| base + k).collect()
    } else {
        vec![base]
    }
}

/// Independent runs over `seeds`, in parallel under the `parallel` feature.
/// Mixed mode when `train_kind` differs from `kind`.
pub fn evaluate_seeds(
    inputs: &EnsembleInputs<'_>,
    train_kind: SchemeKind,
    kind: SchemeKind,
    seeds: &[u64],
    config: &EnsembleConfig,
    guard: &LabelGuard,
) -> Result<EnsembleReport> {
    let runs = crate::par::map_indexed(seeds.len(), |k| {
        let s = seeds[k];
        evaluate_mixed(
            inputs,
            &ShuffleScheme::new(train_kind, s),
            &ShuffleScheme::new(kind, s),
            config,
            guard,
        )
    });
    Ok(EnsembleReport {
        runs: runs.into_iter().collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnsembleReport {
    pub runs: Vec<EnsembleRun>,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl EnsembleReport {
    pub fn extend(&mut self, other: EnsembleReport) {
        self.runs.extend(other.runs);
    }

    /// Mean and standard deviation of test accuracy per scheme, in first
    /// appearance order.
    pub fn summary(&self) -> Vec<(String, f64, f64, usize)> {
        let mut order: Vec<String> = Vec::new();
        let mut by: HashMap<&str, Vec<f64>> = HashMap::new();
        for r in &self.runs {
            if !by.contains_key(r.scheme.as_str()) {
                order.push(r.scheme.clone());
            }
            by.entry(&r.scheme).or_default().push(r.test_accuracy);
        }
        order
            .into_iter()
            .map(|s| {
                let v = &by[s.as_str()];
                let (m, sd) = mean_std(v);
                (s, m, sd, v.len())
            })
            .collect()
    }

    /// `scheme,seed,split,accuracy,std,scale,C,protocol`; run rows leave
    /// `std` empty, each scheme ends with a `summary` row holding the mean
    /// and standard deviation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,seed,split,accuracy,std,scale,C,protocol\n");
        for (scheme, mean, sd, _) in self.summary() {
            for r in self.runs.iter().filter(|r| r.scheme == scheme) {
                let _ = writeln!(
                    out,
                    "{},{},test,{},,{},{},{}",
                    r.scheme, r.seed, r.test_accuracy, r.scale, r.c, r.protocol
                );
            }
            let _ = writeln!(out, "{scheme},summary,test,{mean},{sd},,,");
        }
        out
    }
}

/// Dense table in doc-id order from an externally produced embedding file;
/// `id_map` resolves file keys to doc ids.
pub fn import_external_dense(
    file: &EmbeddingFile,
    id_map: &HashMap<String, usize>,
    n_docs: usize,
) -> Result<EmbeddingMatrix> {
    let dim = file.vectors.dim();
    let mut rows: Vec<Option<usize>> = vec![None; n_docs];
    for (r, key) in file.keys.iter().enumerate() {
        let id = *id_map
            .get(key)
            .ok_or_else(|| Error::MissingIds(format!("key {key:?} has no doc id")))?;
        let slot = rows
            .get_mut(id)
            .ok_or_else(|| Error::IdSetMismatch(format!("doc id {id} outside 0..{n_docs}")))?;
        if slot.replace(r).is_some() {
            return Err(Error::IdSetMismatch(format!("doc id {id} appears twice")));
        }
    }
    let mut data = Vec::with_capacity(n_docs * dim);
    for (id, r) in rows.iter().enumerate() {
        let r = r.ok_or_else(|| Error::MissingIds(format!("no vector for doc id {id}")))?;
        data.extend_from_slice(file.vectors.row(r));
    }
    EmbeddingMatrix::from_vec(data, dim)
}

#[cfg(test)]
mod tests;
