//! Contour placement for Mellin-Barnes integrals on vertical lines.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::foxh::spec::{FoxHSpec, Location};
use crate::numerics::{ln_gamma_unchecked, ComplexValue};

/// Smallest admissible distance between a contour and a gamma pole.
pub const MIN_MARGIN: f64 = 0.05;
pub const MIN_NODES: usize = 32;

/// Margins beyond this do not improve the trapezoid rule noticeably.
const MARGIN_CAP: f64 = 1.0;

/// How far past a one-sided pole family the anchor search looks for the saddle.
const SADDLE_REACH: f64 = 40.0;

/// How the contour must sit relative to the poles of each numerator gamma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationRule {
    /// Every numerator argument keeps a positive real part: the contour
    /// separates the left and right pole families.
    Strict,
    /// Numerator arguments only stay off the poles at `0, -1, -2, ...`.
    PoleAvoiding,
}

impl fmt::Display for SeparationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationRule::Strict => write!(f, "strict"),
            SeparationRule::PoleAvoiding => write!(f, "pole-avoiding"),
        }
    }
}

/// Vertical contours `s_i = anchors[i] + j t`, `t ∈ [-half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPlan {
    pub anchors: Vec<f64>,
    pub half_width: f64,
    pub nodes_per_axis: usize,
    pub rule: SeparationRule,
}

impl fmt::Display for ContourPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let anchors: Vec<String> = self.anchors.iter().map(|c| format!("{c:.4}")).collect();
        write!(
            f,
            "anchors=[{}] T={:.2} n={} rule={}",
            anchors.join(","),
            self.half_width,
            self.nodes_per_axis,
            self.rule
        )
    }
}

/// Knobs for [`ContourPlan::auto`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions {
    /// Target `2π·margin/h`, i.e. the exponent of the trapezoid discretization error.
    pub discretization_exponent: f64,
    /// Target log-decay of the integrand envelope at `|t| = T`.
    pub truncation_exponent: f64,
    /// Cap on `nodes_per_axis^dimension` for the base grid.
    pub max_points: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            discretization_exponent: 25.0,
            truncation_exponent: 40.0,
            max_points: 1_500_000,
        }
    }
}

fn factor_margin(arg: f64, rule: SeparationRule) -> f64 {
    match rule {
        SeparationRule::Strict => arg,
        SeparationRule::PoleAvoiding => {
            if arg > 0.0 {
                arg
            } else {
                (arg - arg.round()).abs()
            }
        }
    }
}

/// Distance (in contour-variable units) from the anchors to the nearest
/// offending pole, capped at [`MARGIN_CAP`]; negative when a factor is on the
/// wrong side under `rule`.
fn scaled_margins(spec: &FoxHSpec, anchors: &[f64], rule: SeparationRule) -> (f64, f64) {
    let mut min = MARGIN_CAP;
    let mut sum = 0.0;
    for f in spec.numerators() {
        let scale = f.coeffs.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        let m = if scale == 0.0 {
            MARGIN_CAP
        } else {
            (factor_margin(f.argument_at(anchors), rule) / scale).min(MARGIN_CAP)
        };
        min = min.min(m);
        sum += m;
    }
    (min, sum)
}

/// `ln |integrand|` at `s_i = anchors[i] + j t[i]`, without the prefactor.
fn log_magnitude(spec: &FoxHSpec, anchors: &[f64], t: &[f64]) -> f64 {
    let s: Vec<ComplexValue> = anchors.iter().zip(t).map(|(c, t)| ComplexValue::new(*c, *t)).collect();
    let mut acc = 0.0;
    for (a, si) in spec.arguments.iter().zip(&s) {
        acc += (a.sign * si * a.log).re;
    }
    for f in &spec.factors {
        let mut z = ComplexValue::new(f.offset, 0.0);
        for (b, si) in f.coeffs.iter().zip(&s) {
            z += b * si;
        }
        let sign = if f.location == Location::Numerator { 1.0 } else { -1.0 };
        acc += sign * ln_gamma_unchecked(z).re;
    }
    acc
}

/// Checks that every numerator gamma keeps its argument at least
/// [`MIN_MARGIN`] away from the forbidden region, listing every violation.
pub fn validate_contours(spec: &FoxHSpec, plan: &ContourPlan) -> Result<()> {
    spec.check()?;
    if plan.anchors.len() != spec.dimension() {
        return Err(Error::Contour(format!(
            "{}: plan has {} anchors for a {}-fold integral",
            spec.name,
            plan.anchors.len(),
            spec.dimension()
        )));
    }
    if !(plan.half_width > 0.0) || plan.nodes_per_axis < MIN_NODES {
        return Err(Error::Contour(format!(
            "{}: need T > 0 and at least {MIN_NODES} nodes, got T={} n={}",
            spec.name, plan.half_width, plan.nodes_per_axis
        )));
    }
    let mut report = Vec::new();
    for (idx, f) in spec.factors.iter().enumerate() {
        if f.location != Location::Numerator {
            continue;
        }
        let arg = f.argument_at(&plan.anchors);
        if factor_margin(arg, plan.rule) < MIN_MARGIN {
            report.push(format!("factor #{idx} {f}: Re argument {arg:.4}"));
        }
    }
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::Contour(format!(
            "{} ({} rule): {}",
            spec.name,
            plan.rule,
            report.join("; ")
        )))
    }
}

/// Per-variable search interval from the single-variable numerator factors.
fn search_range(spec: &FoxHSpec, var: usize) -> (f64, f64) {
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for f in spec.numerators() {
        let vars = f.variables();
        if vars.len() == 1 && vars[0] == var {
            let pole = -f.offset / f.coeffs[var];
            if f.coeffs[var] > 0.0 {
                lower = lower.max(pole);
            } else {
                upper = upper.min(pole);
            }
        }
    }
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => (lower.min(upper) - 1.0, lower.max(upper) + 1.0),
        (true, false) => (lower - 1.0, lower + SADDLE_REACH),
        (false, true) => (upper - SADDLE_REACH, upper + 1.0),
        (false, false) => (-10.0, 10.0),
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Grid point with the largest capped pole margin; ties go to the smallest
/// integrand magnitude on the real axis (the saddle), which limits cancellation.
fn best_on_grid(spec: &FoxHSpec, axes: &[Vec<f64>], rule: SeparationRule) -> (Vec<f64>, (f64, f64)) {
    let d = axes.len();
    let zeros = vec![0.0; d];
    let mut best = (vec![0.0; d], (f64::NEG_INFINITY, f64::NEG_INFINITY));
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    loop {
        for i in 0..d {
            point[i] = axes[i][idx[i]];
        }
        let (margin, _) = scaled_margins(spec, &point, rule);
        let size = -log_magnitude(spec, &point, &zeros);
        let size = if size.is_nan() { f64::NEG_INFINITY } else { size };
        let score = (margin, size);
        if score.0 > best.1 .0 + 1e-12 || ((score.0 - best.1 .0).abs() <= 1e-12 && score.1 > best.1 .1) {
            best = (point.clone(), score);
        }
        let mut k = 0;
        loop {
            if k == d {
                return best;
            }
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Anchors maximizing the smallest pole margin under `rule`, with the margin found.
pub fn choose_anchors(spec: &FoxHSpec, rule: SeparationRule) -> (Vec<f64>, f64) {
    let d = spec.dimension();
    let per_axis = match d {
        1 => 2001,
        2 => 241,
        _ => 61,
    };
    let ranges: Vec<(f64, f64)> = (0..d).map(|i| search_range(spec, i)).collect();
    let coarse: Vec<Vec<f64>> = ranges.iter().map(|&(lo, hi)| grid(lo, hi, per_axis)).collect();
    let (anchors, _) = best_on_grid(spec, &coarse, rule);
    let fine: Vec<Vec<f64>> = anchors
        .iter()
        .zip(&ranges)
        .map(|(c, (lo, hi))| {
            let step = (hi - lo) / (per_axis - 1) as f64;
            grid(c - 2.0 * step, c + 2.0 * step, 21)
        })
        .collect();
    let (anchors, (margin, _)) = best_on_grid(spec, &fine, rule);
    (anchors, margin)
}

/// Smallest `T` such that, along axis `var` with the other variables on the
/// real axis, `ln |integrand|` stays `drop` below its running maximum for all
/// `|t| ≥ T` (checked on a marching grid in both directions).
fn truncation_width(spec: &FoxHSpec, anchors: &[f64], var: usize, drop: f64) -> Result<f64> {
    const STEP: f64 = 0.25;
    const LIMIT: f64 = 5000.0;
    let mut width: f64 = 0.0;
    let mut t = vec![0.0; anchors.len()];
    let peak0 = log_magnitude(spec, anchors, &t);
    for dir in [1.0, -1.0] {
        let mut peak = peak0;
        let mut last_high = 0.0;
        let mut x = 0.0;
        // March until the envelope has been below peak - drop for a stretch of 20.
        while x < LIMIT {
            x += STEP;
            t[var] = dir * x;
            let l = log_magnitude(spec, anchors, &t);
            if !l.is_finite() {
                continue;
            }
            peak = peak.max(l);
            if l > peak - drop {
                last_high = x;
            } else if x - last_high > 20.0 {
                break;
            }
        }
        if x >= LIMIT {
            return Err(Error::Contour(format!(
                "{}: integrand does not decay along s{}",
                spec.name,
                var + 1
            )));
        }
        width = width.max(last_high + STEP);
    }
    Ok(width)
}

impl ContourPlan {
    /// Plan with anchors from [`choose_anchors`] (strict separation, falling back
    /// to pole avoidance), step sized from the pole margin and width from the
    /// observed decay of the integrand.
    pub fn auto(spec: &FoxHSpec, opts: &PlanOptions) -> Result<Self> {
        spec.check()?;
        let (mut anchors, mut margin) = choose_anchors(spec, SeparationRule::Strict);
        let mut rule = SeparationRule::Strict;
        if margin < MIN_MARGIN {
            let (a, m) = choose_anchors(spec, SeparationRule::PoleAvoiding);
            if m < MIN_MARGIN {
                return Err(Error::Contour(format!(
                    "{}: no contour keeps every numerator pole {MIN_MARGIN} away (best {m:.3})",
                    spec.name
                )));
            }
            anchors = a;
            margin = m;
            rule = SeparationRule::PoleAvoiding;
        }
        let mut half_width: f64 = 0.0;
        for var in 0..spec.dimension() {
            half_width = half_width.max(truncation_width(spec, &anchors, var, opts.truncation_exponent)?);
        }
        // Shifting the line by `margin` scales |z^{-s}| by up to e^{margin·|ln|z||},
        // which eats into the discretization exponent.
        let growth = spec.arguments.iter().fold(0.0f64, |m, a| m.max(a.log.re.abs()));
        let step = 2.0 * PI * margin / (opts.discretization_exponent + margin * growth);
        let mut nodes = 2 * (half_width / step).ceil() as usize + 1;
        let cap = (opts.max_points as f64).powf(1.0 / spec.dimension() as f64).floor() as usize;
        nodes = nodes.min(cap | 1).max(MIN_NODES + 1);
        Ok(Self {
            anchors,
            half_width,
            nodes_per_axis: nodes,
            rule,
        })
    }

    /// Plan with `factor`-times the width and `2×` the nodes, used for error estimation.
    pub fn refined(&self, factor: f64) -> Self {
        Self {
            half_width: self.half_width * factor,
            nodes_per_axis: 2 * self.nodes_per_axis - 1,
            ..self.clone()
        }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.nodes_per_axis - 1) as f64
    }
}
