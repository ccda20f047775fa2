//! Accuracy as a function of the number of labeled training documents.

use std::fmt::Write as _;

use rand::seq::SliceRandom;

use crate::corpus::{AlignmentMap, Split};
use crate::ensemble::{fit_view, mean_std, EnsembleConfig, EnsembleInputs, View};
use crate::guard::LabelGuard;
use crate::{seed, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub models: Vec<View>,
    pub seed: u64,
    /// Sample `size/2` documents per class; otherwise sample uniformly.
    pub balanced: bool,
}

pub const DEFAULT_CURVE_SIZES: [usize; 11] =
    [10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, 20000];

impl Default for CurveSpec {
    fn default() -> Self {
        CurveSpec {
            sizes: DEFAULT_CURVE_SIZES.to_vec(),
            repeats: 30,
            models: vec![View::Dense, View::Sparse, View::Both],
            seed: 1,
            balanced: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub model: String,
    pub size: usize,
    pub repeat: usize,
    pub accuracy: f64,
    pub balanced: bool,
    /// `computed`, or `external` for imported rows.
    pub source: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurveReport {
    pub rows: Vec<CurveRow>,
}

/// Training subset of one cell, sorted by doc id. The same subset is used
/// for every model at a given `(size, repeat)`.
pub fn sample_subset(
    guard: &LabelGuard,
    train: &[usize],
    size: usize,
    repeat: usize,
    spec: &CurveSpec,
) -> Result<Vec<usize>> {
    let mut rng = seed::rng(spec.seed, "learning-curve", &[size as u64, repeat as u64]);
    let mut picked = if spec.balanced {
        if size % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "balanced subsets need an even size, got {size}"
            )));
        }
        let labels = guard.fit_labels(train)?;
        let mut picked = Vec::with_capacity(size);
        for class in [true, false] {
            let mut pool: Vec<usize> = train
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == class)
                .map(|(&i, _)| i)
                .collect();
            if pool.len() < size / 2 {
                return Err(Error::InvalidArgument(format!(
                    "size {size} needs {} documents per class, only {} available",
                    size / 2,
                    pool.len()
                )));
            }
            pool.shuffle(&mut rng);
            picked.extend_from_slice(&pool[..size / 2]);
        }
        picked
    } else {
        if size > train.len() {
            return Err(Error::InvalidArgument(format!(
                "size {size} exceeds the {} labeled training documents",
                train.len()
            )));
        }
        let mut pool = train.to_vec();
        pool.shuffle(&mut rng);
        pool.truncate(size);
        pool
    };
    picked.sort_unstable();
    Ok(picked)
}

/// Every `(model, size, repeat)` cell: sample a subset, tune on the
/// validation split (or cross-validate), score on Test. Cells run in
/// parallel and each is reproducible from `(seed, size, repeat)` alone.
pub fn learning_curve(
    spec: &CurveSpec,
    inputs: &EnsembleInputs<'_>,
    config: &EnsembleConfig,
    guard: &LabelGuard,
) -> Result<CurveReport> {
    if spec.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sizes must be strictly ascending".into()));
    }
    if spec.repeats == 0 || spec.models.is_empty() {
        return Err(Error::InvalidArgument("need at least one repeat and one model".into()));
    }
    let train: Vec<usize> = inputs
        .meta
        .indices_in(Split::Train)
        .into_iter()
        .filter(|&i| inputs.meta.label(i).as_bool().is_some())
        .collect();
    // Fail before any fitting if a size is impossible.
    if let Some(&largest) = spec.sizes.last() {
        sample_subset(guard, &train, largest, 0, spec)?;
    }
    let test_idx = inputs.meta.indices_in(Split::Test);
    let identity = AlignmentMap::identity(inputs.meta.len());
    let cells: Vec<(View, usize, usize)> = spec
        .models
        .iter()
        .flat_map(|&m| {
            spec.sizes
                .iter()
                .flat_map(move |&s| (0..spec.repeats).map(move |r| (m, s, r)))
        })
        .collect();
    let rows = crate::par::map_indexed(cells.len(), |k| -> Result<CurveRow> {
        let (view, size, repeat) = cells[k];
        let subset = sample_subset(guard, &train, size, repeat, spec)?;
        let cv_seed = seed::derive(spec.seed, "learning-curve-cv", &[size as u64, repeat as u64]);
        let folds = config.cv_folds.min(size / 2).max(2);
        let cfg = EnsembleConfig {
            cv_folds: folds,
            ..config.clone()
        };
        let fitted = fit_view(inputs, view, identity.clone(), &subset, &cfg, guard, cv_seed)?;
        let test = fitted.features(inputs, &test_idx)?;
        let accuracy = guard.score_test(&test_idx, &fitted.model.predict(&test)?)?;
        Ok(CurveRow {
            model: view.name().to_string(),
            size,
            repeat,
            accuracy,
            balanced: spec.balanced,
            source: "computed".into(),
        })
    });
    Ok(CurveReport {
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

pub const CURVE_HEADER: &str = "model,size,repeat,accuracy,balanced,source";

impl CurveReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CURVE_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.model, r.size, r.repeat, r.accuracy, r.balanced, r.source
            );
        }
        out
    }

    /// Parse rows written by [`to_csv`](Self::to_csv) or produced
    /// elsewhere; a missing `source` column defaults to `external`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("curve csv", "empty"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let col = |name: &str| cols.iter().position(|c| *c == name);
        let need = |name: &str| {
            col(name).ok_or_else(|| Error::parse("curve csv", format!("missing column {name}")))
        };
        let (m, s, r, a) = (need("model")?, need("size")?, need("repeat")?, need("accuracy")?);
        let (b, src) = (col("balanced"), col("source"));
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |what: &str| Error::parse(format!("curve csv row {}", n + 2), what.to_string());
            let get = |k: usize| f.get(k).copied().ok_or_else(|| bad("too few fields"));
            rows.push(CurveRow {
                model: get(m)?.to_string(),
                size: get(s)?.parse().map_err(|_| bad("bad size"))?,
                repeat: get(r)?.parse().map_err(|_| bad("bad repeat"))?,
                accuracy: get(a)?.parse().map_err(|_| bad("bad accuracy"))?,
                balanced: b.map_or(Ok(true), |k| get(k).map(|v| v == "true"))?,
                source: src.map_or(Ok("external"), get)?.to_string(),
            });
        }
        Ok(CurveReport { rows })
    }

    /// `(model, size, n, mean, std)` per cell, models in first-appearance
    /// order, sizes ascending.
    pub fn summary(&self) -> Vec<(String, usize, usize, f64, f64)> {
        let mut models: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !models.contains(&r.model.as_str()) {
                models.push(&r.model);
            }
        }
        let mut out = Vec::new();
        for m in models {
            let mut sizes: Vec<usize> = self.rows.iter().filter(|r| r.model == m).map(|r| r.size).collect();
            sizes.sort_unstable();
            sizes.dedup();
            for s in sizes {
                let acc: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.model == m && r.size == s)
                    .map(|r| r.accuracy)
                    .collect();
                let (mean, sd) = mean_std(&acc);
                out.push((m.to_string(), s, acc.len(), mean, sd));
            }
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("model,size,n,mean,std\n");
        for (m, s, n, mean, sd) in self.summary() {
            let _ = writeln!(out, "{m},{s},{n},{mean},{sd}");
        }
        out
    }
}
