//! Limited-memory BFGS with Armijo backtracking, for smooth convex objectives.

use std::collections::VecDeque;

const MEMORY: usize = 10;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub history: Vec<f64>,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimize `f` from `x0`. `eval(x, grad)` returns `f(x)` and writes `∇f(x)`.
/// Every accepted step strictly decreases `f`, so `history` is
/// non-increasing.
pub(crate) fn minimize(
    x0: Vec<f64>,
    tol: f64,
    max_iter: usize,
    mut eval: impl FnMut(&[f64], &mut [f64]) -> f64,
) -> Outcome {
    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut f = eval(&x, &mut g);
    let mut history = vec![f];
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut d = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut alpha = [0.0; MEMORY];
    let mut iterations = 0;

    loop {
        let grad_norm = dot(&g, &g).sqrt();
        if grad_norm <= tol || iterations >= max_iter || !f.is_finite() {
            return Outcome {
                x,
                history,
                grad_norm,
                iterations,
                converged: grad_norm <= tol,
            };
        }

        // Two-loop recursion: d = -H g.
        d.iter_mut().zip(&g).for_each(|(d, g)| *d = -g);
        for (k, (s, y, rho)) in pairs.iter().enumerate().rev() {
            alpha[k] = rho * dot(s, &d);
            d.iter_mut().zip(y).for_each(|(d, y)| *d -= alpha[k] * y);
        }
        if let Some((s, y, _)) = pairs.back() {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|d| *d *= gamma);
        }
        for (k, (s, y, rho)) in pairs.iter().enumerate() {
            let beta = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(d, s)| *d += (alpha[k] - beta) * s);
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            pairs.clear();
            d.iter_mut().zip(&g).for_each(|(d, g)| *d = -g);
            slope = -grad_norm * grad_norm;
        }

        let mut step = if pairs.is_empty() {
            (1.0 / grad_norm).min(1.0)
        } else {
            1.0
        };
        let f_new = loop {
            for ((xn, x), d) in x_new.iter_mut().zip(&x).zip(&d) {
                *xn = x + step * d;
            }
            let f_new = eval(&x_new, &mut g_new);
            if f_new <= f + ARMIJO * step * slope && f_new < f {
                break Some(f_new);
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some(f_new) = f_new else {
            // No further decrease representable in floating point.
            return Outcome {
                x,
                history,
                grad_norm,
                iterations,
                converged: false,
            };
        };
        iterations += 1;

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() && sy > 0.0 {
            if pairs.len() == MEMORY {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        f = f_new;
        history.push(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let out = minimize(vec![-1.2, 1.0], 1e-8, 1000, |x, g| {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        });
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
    }
}
