//! Browser bindings for three small interactive views of `dvlab`.
//!
//! The `*_points` functions are plain Rust and are what the tests call; the
//! `#[wasm_bindgen]` wrappers only translate errors. Every curve comes back
//! as a flat `Float64Array` of fixed-width records.

use dvlab::corpus::Split;
use dvlab::dv_model::{pair_loss, Objective};
use dvlab::ensemble::{
    apply_scheme, evaluate_ensemble, fit_ensemble, EnsembleConfig, EnsembleInputs, Protocol,
    SchemeKind, ShuffleScheme,
};
use dvlab::experiments::logit_analysis;
use dvlab::guard::LabelGuard;
use dvlab::nb_features::keep_probability;
use dvlab::synthetic::{leakage_dataset, LeakageData, LeakageParams};
use wasm_bindgen::prelude::*;

/// Largest synthetic block the page may request; keeps a click under a few
/// seconds in the browser.
pub const MAX_BLOCK: usize = 2000;

/// `(h, keep)` pairs for `points` values of `h` evenly spaced on `[0, h_max]`.
pub fn keep_points(n_a: f64, n_b: f64, h_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || h_max.is_nan() || h_max <= 0.0 {
        return Err("need at least two points and h_max > 0".into());
    }
    let mut out = Vec::with_capacity(2 * points);
    for k in 0..points {
        let h = h_max * k as f64 / (points - 1) as f64;
        out.push(h);
        out.push(keep_probability(h, n_a, n_b).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `(cos, positive loss, negative loss)` triples for unit vectors at
/// `points` angles. In dot-product mode the score of unit vectors is the
/// cosine itself, so `alpha` has no effect there.
pub fn loss_points(alpha: f64, dot: bool, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least two points".into());
    }
    let objective = if dot { Objective::DotProduct } else { Objective::Cosine };
    let doc = [1.0, 0.0];
    let mut out = Vec::with_capacity(3 * points);
    for k in 0..points {
        let theta = std::f64::consts::PI * (1.0 - k as f64 / (points - 1) as f64);
        let u = [theta.cos(), theta.sin()];
        let pos = pair_loss(&doc, &u, &[], alpha, objective).map_err(|e| e.to_string())?;
        let both = pair_loss(&doc, &u, &[&u], alpha, objective).map_err(|e| e.to_string())?;
        out.extend([theta.cos(), pos.loss, both.loss - pos.loss]);
    }
    Ok(out)
}

fn leakage(block: usize, dense_error: f64, sparse_error: f64, seed: u64) -> Result<LeakageData, String> {
    if block == 0 || block > MAX_BLOCK {
        return Err(format!("block size must be in 1..={MAX_BLOCK}"));
    }
    leakage_dataset(
        &LeakageParams {
            block_len: block,
            dense_error,
            sparse_error,
            ..LeakageParams::default()
        },
        seed,
    )
    .map_err(|e| e.to_string())
}

fn demo_config() -> EnsembleConfig {
    EnsembleConfig {
        protocol: Protocol::CrossValidation,
        c_grid: vec![0.01, 0.1, 1.0, 10.0],
        cv_folds: 3,
        ..EnsembleConfig::default()
    }
}

fn inputs(d: &LeakageData) -> EnsembleInputs<'_> {
    EnsembleInputs {
        dense: &d.dense,
        sparse: &d.sparse,
        sparse_dim: d.sparse_dim,
        meta: &d.meta,
    }
}

/// Test accuracy of every scheme, in the order of [`scheme_names`].
pub fn leakage_accuracy_points(
    block: usize,
    dense_error: f64,
    sparse_error: f64,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let data = leakage(block, dense_error, sparse_error, seed)?;
    let guard = LabelGuard::new(&data.meta);
    let config = demo_config();
    SchemeKind::ALL
        .iter()
        .map(|&kind| {
            evaluate_ensemble(&inputs(&data), &ShuffleScheme::new(kind, seed), &config, &guard)
                .map(|r| r.test_accuracy)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// `(dense logit, sparse logit, label)` per test document of the ensemble
/// fitted under `scheme`; label is 1 or 0.
pub fn leakage_logit_points(
    block: usize,
    dense_error: f64,
    sparse_error: f64,
    seed: u64,
    scheme: &str,
) -> Result<Vec<f64>, String> {
    let kind: SchemeKind = scheme.parse().map_err(|e: dvlab::Error| e.to_string())?;
    let data = leakage(block, dense_error, sparse_error, seed)?;
    let guard = LabelGuard::new(&data.meta);
    let map = apply_scheme(&ShuffleScheme::new(kind, seed), data.meta.layout());
    let fitted = fit_ensemble(&inputs(&data), map, &demo_config(), &guard, seed).map_err(|e| e.to_string())?;
    let report = logit_analysis(&fitted, &inputs(&data), Split::Test, &guard).map_err(|e| e.to_string())?;
    Ok(report
        .rows
        .iter()
        .flat_map(|r| [r.dense_logit, r.sparse_logit, f64::from(u8::from(r.label))])
        .collect())
}

/// Scheme names in the order used by [`leakage_accuracies`].
#[wasm_bindgen]
pub fn scheme_names() -> Vec<String> {
    SchemeKind::ALL.iter().map(|k| k.name().to_string()).collect()
}

#[wasm_bindgen]
pub fn keep_curve(n_a: f64, n_b: f64, h_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    keep_points(n_a, n_b, h_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn loss_curve(alpha: f64, dot: bool, points: usize) -> Result<Vec<f64>, JsError> {
    loss_points(alpha, dot, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn leakage_accuracies(
    block: usize,
    dense_error: f64,
    sparse_error: f64,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    leakage_accuracy_points(block, dense_error, sparse_error, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn leakage_logits(
    block: usize,
    dense_error: f64,
    sparse_error: f64,
    seed: u32,
    scheme: &str,
) -> Result<Vec<f64>, JsError> {
    leakage_logit_points(block, dense_error, sparse_error, seed.into(), scheme).map_err(|e| JsError::new(&e))
}
