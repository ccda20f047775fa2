use super::Objective;
use crate::{Error, Result};

/// Lower clamp for norms in cosine denominators.
pub const COSINE_EPS: f64 = 1e-12;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log σ(x)`, stable for large `|x|`.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    -softplus(-x)
}

#[inline]
/// `log(1 + exp(x))` without overflow.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Loss of one (document, positive n-gram, negatives) triple and its exact
/// gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLoss {
    pub loss: f64,
    pub grad_doc: Vec<f64>,
    pub grad_pos: Vec<f64>,
    pub grad_negs: Vec<Vec<f64>>,
}

/// Loss `-log σ(s(d,u)) - Σ log σ(-s(d,u'))` and its gradients, where
/// `s = α·cos` for [`Objective::Cosine`] and `s = d·u` for
/// [`Objective::DotProduct`].
///
/// Fails on length mismatches and, in cosine mode, on zero-norm vectors.
pub fn pair_loss(
    doc: &[f64],
    pos: &[f64],
    negs: &[&[f64]],
    alpha: f64,
    objective: Objective,
) -> Result<PairLoss> {
    let dim = doc.len();
    for v in std::iter::once(pos).chain(negs.iter().copied()) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
    }
    let flat: Vec<f64> = negs.iter().flat_map(|n| n.iter().copied()).collect();
    let mut grads = Gradients::new(dim, negs.len());
    let loss = pair_loss_into(doc, pos, &flat, alpha, objective, &mut grads)?;
    Ok(PairLoss {
        loss,
        grad_doc: grads.doc,
        grad_pos: grads.pos,
        grad_negs: grads.negs.chunks_exact(dim.max(1)).map(<[f64]>::to_vec).collect(),
    })
}

/// Reusable gradient buffers; `negs` is row-major `k × dim`.
#[derive(Debug, Clone)]
pub(crate) struct Gradients {
    pub doc: Vec<f64>,
    pub pos: Vec<f64>,
    pub negs: Vec<f64>,
}

impl Gradients {
    pub fn new(dim: usize, k: usize) -> Self {
        Gradients {
            doc: vec![0.0; dim],
            pos: vec![0.0; dim],
            negs: vec![0.0; dim * k],
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Allocation-free core of [`pair_loss`]. `negs` is row-major `k × dim` and
/// `grads` must be sized for the same `k`.
pub(crate) fn pair_loss_into(
    doc: &[f64],
    pos: &[f64],
    negs: &[f64],
    alpha: f64,
    objective: Objective,
    grads: &mut Gradients,
) -> Result<f64> {
    let dim = doc.len();
    grads.doc.fill(0.0);
    match objective {
        Objective::DotProduct => {
            let s = dot(doc, pos);
            // d/ds of -log σ(s) is -σ(-s).
            let g = -sigmoid(-s);
            let mut loss = -log_sigmoid(s);
            for i in 0..dim {
                grads.doc[i] += g * pos[i];
                grads.pos[i] = g * doc[i];
            }
            for (neg, gneg) in negs.chunks_exact(dim).zip(grads.negs.chunks_exact_mut(dim)) {
                let s = dot(doc, neg);
                // d/ds of -log σ(-s) is σ(s).
                let g = sigmoid(s);
                loss -= log_sigmoid(-s);
                for i in 0..dim {
                    grads.doc[i] += g * neg[i];
                    gneg[i] = g * doc[i];
                }
            }
            Ok(loss)
        }
        Objective::Cosine => {
            let nd = norm_checked(doc, "document")?;
            let mut loss = 0.0;
            let np = norm_checked(pos, "positive n-gram")?;
            loss += cosine_term(doc, nd, pos, np, alpha, true, &mut grads.doc, &mut grads.pos);
            for (neg, gneg) in negs.chunks_exact(dim).zip(grads.negs.chunks_exact_mut(dim)) {
                let nn = norm_checked(neg, "negative n-gram")?;
                loss += cosine_term(doc, nd, neg, nn, alpha, false, &mut grads.doc, gneg);
            }
            Ok(loss)
        }
    }
}

fn norm_checked(v: &[f64], what: &str) -> Result<f64> {
    let n = dot(v, v).sqrt();
    if n == 0.0 {
        return Err(Error::DegenerateInput(format!("{what} vector has zero norm")));
    }
    if !n.is_finite() {
        return Err(Error::NonFinite(format!("{what} vector norm")));
    }
    Ok(n.max(COSINE_EPS))
}

/// One cosine term. Accumulates into `grad_doc`, overwrites `grad_other`.
///
/// With `c = cos(a, b)`:
/// `∂c/∂a = b/(|a||b|) - c·a/|a|²` and symmetrically for `b`.
#[allow(clippy::too_many_arguments)]
#[inline]
fn cosine_term(
    doc: &[f64],
    nd: f64,
    other: &[f64],
    no: f64,
    alpha: f64,
    positive: bool,
    grad_doc: &mut [f64],
    grad_other: &mut [f64],
) -> f64 {
    let inv = 1.0 / (nd * no);
    let c = dot(doc, other) * inv;
    let s = alpha * c;
    let (loss, dl_dc) = if positive {
        (-log_sigmoid(s), -alpha * sigmoid(-s))
    } else {
        (-log_sigmoid(-s), alpha * sigmoid(s))
    };
    let cd = c / (nd * nd);
    let co = c / (no * no);
    for i in 0..doc.len() {
        grad_doc[i] += dl_dc * (other[i] * inv - cd * doc[i]);
        grad_other[i] = dl_dc * (doc[i] * inv - co * other[i]);
    }
    loss
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn orthogonal_vectors_give_log2_per_term() {
        let d = [1.0, 0.0, 0.0, 0.0];
        let u = [0.0, 2.0, 0.0, 0.0];
        let n1 = [0.0, 0.0, 3.0, 0.0];
        let n2 = [0.0, 0.0, 0.0, 0.5];
        for alpha in [0.5, 6.0, 20.0] {
            let r = pair_loss(&d, &u, &[&n1, &n2], alpha, Objective::Cosine).unwrap();
            assert!((r.loss - 3.0 * LN2).abs() < 1e-12);
        }
    }

    #[test]
    fn dot_product_unit_example() {
        let d = [1.0, 0.0, 0.0];
        let neg = [-1.0, 0.0, 0.0];
        let r = pair_loss(&d, &d, &[&neg], 6.0, Objective::DotProduct).unwrap();
        let expected = -2.0 * (1.0 / (1.0 + (-1.0f64).exp())).ln();
        assert!((r.loss - expected).abs() < 1e-12);
        assert!((r.loss - 2.0 * 0.313_261_7).abs() < 1e-6);
    }

    #[test]
    fn zero_norm_is_degenerate_in_cosine_mode() {
        let z = [0.0, 0.0];
        let u = [1.0, 0.0];
        assert!(matches!(
            pair_loss(&z, &u, &[&u], 1.0, Objective::Cosine),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            pair_loss(&u, &u, &[&z], 1.0, Objective::Cosine),
            Err(Error::DegenerateInput(_))
        ));
        assert!(pair_loss(&z, &u, &[&u], 1.0, Objective::DotProduct).is_ok());
        assert!(matches!(
            pair_loss(&u, &[1.0], &[], 1.0, Objective::Cosine),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn saturation_at_large_alpha() {
        let d = [0.3, -1.2, 2.0];
        let r = pair_loss(&d, &d, &[], 20.0, Objective::Cosine).unwrap();
        assert!(r.loss < 1e-3);
    }

    #[test]
    fn positive_term_decreases_with_cosine() {
        let d = [1.0, 0.0];
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let theta = std::f64::consts::PI * (1.0 - k as f64 / 200.0);
            let u = [theta.cos(), theta.sin()];
            let l = pair_loss(&d, &u, &[], 6.0, Objective::Cosine).unwrap().loss;
            assert!(l < prev, "loss must strictly decrease as cos increases");
            prev = l;
        }
    }

    #[test]
    fn stable_sigmoid() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(log_sigmoid(-800.0).is_finite());
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
        assert_eq!(log_sigmoid(800.0), 0.0);
        assert!((sigmoid(-40.0) - (-40.0f64).exp() / (1.0 + (-40.0f64).exp())).abs() < 1e-30);
    }

    fn fd_check(objective: Objective, seed: u64) -> f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dim = 8;
        let k = rng.random_range(1..=5);
        let alpha = rng.random_range(0.5..10.0);
        let mut v = |scale: f64| -> Vec<f64> {
            (0..dim).map(|_| rng.random_range(-1.0..1.0) * scale).collect()
        };
        let d = v(1.0);
        let u = v(1.0);
        let negs: Vec<Vec<f64>> = (0..k).map(|_| v(1.0)).collect();
        let loss = |d: &[f64], u: &[f64], negs: &[Vec<f64>]| {
            let refs: Vec<&[f64]> = negs.iter().map(Vec::as_slice).collect();
            pair_loss(d, u, &refs, alpha, objective).unwrap().loss
        };
        let refs: Vec<&[f64]> = negs.iter().map(Vec::as_slice).collect();
        let r = pair_loss(&d, &u, &refs, alpha, objective).unwrap();

        let h = 1e-5;
        let mut num = Vec::new();
        let mut ana = Vec::new();
        for which in 0..2 + k {
            for i in 0..dim {
                let (mut dp, mut up, mut np) = (d.clone(), u.clone(), negs.clone());
                let (mut dm, mut um, mut nm) = (d.clone(), u.clone(), negs.clone());
                match which {
                    0 => {
                        dp[i] += h;
                        dm[i] -= h;
                        ana.push(r.grad_doc[i]);
                    }
                    1 => {
                        up[i] += h;
                        um[i] -= h;
                        ana.push(r.grad_pos[i]);
                    }
                    j => {
                        np[j - 2][i] += h;
                        nm[j - 2][i] -= h;
                        ana.push(r.grad_negs[j - 2][i]);
                    }
                }
                num.push((loss(&dp, &up, &np) - loss(&dm, &um, &nm)) / (2.0 * h));
            }
        }
        let diff: f64 = num.iter().zip(&ana).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = ana.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
        diff / scale
    }

    #[test]
    fn gradients_match_finite_differences() {
        for seed in 0..20 {
            for obj in [Objective::Cosine, Objective::DotProduct] {
                let rel = fd_check(obj, seed);
                assert!(rel < 1e-6, "{obj} seed {seed}: relative error {rel}");
            }
        }
    }
}
