//! Adaptive tanh-sinh (double exponential) quadrature.
//!
//! The substitution `x = c + d tanh(π/2 sinh t)` clusters nodes doubly
//! exponentially towards both endpoints, which absorbs algebraic endpoint
//! singularities. Each interval is refined by halving the step; intervals that
//! fail to converge by the deepest level are bisected.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_evaluations: 1_000_000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }
}

const T_MAX: f64 = 6.5;
const MIN_LEVEL: usize = 3;
const MAX_LEVEL: usize = 8;
const MAX_DEPTH: usize = 24;

/// Integrand sample at abscissa `t` on the canonical interval, already weighted.
fn weighted_sample<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, t: f64, evals: &mut usize) -> f64 {
    let half = 0.5 * (b - a);
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let weight = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    if weight == 0.0 {
        return 0.0;
    }
    // Distance from the nearer endpoint, computed without cancellation.
    let dist = half * 2.0 * e / (1.0 + e);
    let x = if u >= 0.0 { b - dist } else { a + dist };
    if x <= a || x >= b {
        return 0.0;
    }
    *evals += 1;
    weight * f(x)
}

/// Single tanh-sinh pass on `[a, b]`; returns (value, error estimate, converged).
fn tanh_sinh<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    evals: &mut usize,
) -> (f64, f64, bool) {
    let mut h = 1.0;
    let mut sum = weighted_sample(f, a, b, 0.0, evals);
    let mut k = 1.0;
    while k <= T_MAX {
        sum += weighted_sample(f, a, b, k, evals) + weighted_sample(f, a, b, -k, evals);
        k += 1.0;
    }
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += weighted_sample(f, a, b, t, evals) + weighted_sample(f, a, b, -t, evals);
            t += 2.0 * h;
        }
        let next = sum * h;
        err = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            return (estimate, f64::INFINITY, false);
        }
        if level >= MIN_LEVEL && err <= abs_tol.max(rel_tol * estimate.abs()) {
            return (estimate, err, true);
        }
    }
    (estimate, err, false)
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
    abs_tol: f64,
    depth: usize,
    evals: &mut usize,
) -> (f64, f64, bool) {
    let (value, err, ok) = tanh_sinh(f, a, b, opts.rel_tol, abs_tol, evals);
    if ok || depth >= MAX_DEPTH || *evals >= opts.max_evaluations || !value.is_finite() {
        return (value, err, ok);
    }
    let mid = 0.5 * (a + b);
    let (lv, le, lok) = adaptive(f, a, mid, opts, 0.5 * abs_tol, depth + 1, evals);
    let (rv, re, rok) = adaptive(f, mid, b, opts, 0.5 * abs_tol, depth + 1, evals);
    (lv + rv, le + re, lok && rok)
}

/// Integrates `f` over `[a, b]`.
///
/// On success `|value - I| <= max(abs_tol, rel_tol |value|)` up to the
/// reliability of the level-difference error estimate. Non-convergence
/// within the evaluation budget yields [`Error::Quadrature`] carrying the best
/// estimate.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    integrate_with(&f, a, b, &QuadratureOptions::with_tolerances(rel_tol, abs_tol))
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "integration interval must satisfy a < b with finite ends, got [{a}, {b}]"
        )));
    }
    let mut evals = 0;
    let (value, err, ok) = adaptive(f, a, b, opts, opts.abs_tol, 0, &mut evals);
    let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
    if ok || err <= tol {
        Ok(QuadratureResult {
            value,
            abs_error_estimate: err,
            evaluations: evals.max(1),
        })
    } else {
        Err(Error::Quadrature {
            estimate: value,
            error: err,
            evaluations: evals,
        })
    }
}

/// Integrates over consecutive intervals `[breaks[i], breaks[i+1]]` and sums.
///
/// Each piece gets the full relative tolerance; absolute tolerance is shared.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if breaks.len() < 2 {
        return Err(Error::InvalidParameter("need at least two breakpoints".into()));
    }
    let pieces = (breaks.len() - 1) as f64;
    let piece_opts = QuadratureOptions {
        abs_tol: opts.abs_tol / pieces,
        ..*opts
    };
    let mut total = QuadratureResult {
        value: 0.0,
        abs_error_estimate: 0.0,
        evaluations: 0,
    };
    // A piece that misses its own tolerance is still acceptable when its error
    // is negligible against the tolerance on the whole sum.
    let mut unconverged = false;
    for w in breaks.windows(2) {
        let r = match integrate_with(f, w[0], w[1], &piece_opts) {
            Ok(r) => r,
            Err(Error::Quadrature {
                estimate,
                error,
                evaluations,
            }) if error.is_finite() => {
                unconverged = true;
                QuadratureResult {
                    value: estimate,
                    abs_error_estimate: error,
                    evaluations,
                }
            }
            Err(e) => return Err(e),
        };
        total.value += r.value;
        total.abs_error_estimate += r.abs_error_estimate;
        total.evaluations += r.evaluations;
    }
    if unconverged && total.abs_error_estimate > opts.abs_tol.max(opts.rel_tol * total.value.abs()) {
        return Err(Error::Quadrature {
            estimate: total.value,
            error: total.abs_error_estimate,
            evaluations: total.evaluations,
        });
    }
    Ok(total)
}
