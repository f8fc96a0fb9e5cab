//! Tensor-product trapezoid evaluation of Mellin-Barnes integrals.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::foxh::contour::{validate_contours, ContourPlan, PlanOptions};
use crate::foxh::spec::{FoxHSpec, Location};
use crate::numerics::{ln_gamma_unchecked, ComplexValue};

/// Width multiplier of the refined grid used for the error estimate.
pub const REFINE_WIDTH: f64 = 1.5;

/// Relative disagreement between base and refined grids treated as divergence.
const DIVERGENCE_RATIO: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct MellinBarnesValue {
    pub value: f64,
    pub error_estimate: f64,
    /// Imaginary part of the refined sum; zero for a real-valued integral.
    pub imaginary_part: f64,
    pub evaluations: usize,
    pub plan: ContourPlan,
}

struct Coupled {
    offset: f64,
    coeffs: Vec<f64>,
    sign: f64,
}

/// Log-integrand split into per-axis cached parts and coupled factors.
struct Prepared {
    axes: Vec<Vec<ComplexValue>>,
    coupled: Vec<Coupled>,
    constant: ComplexValue,
    anchors: Vec<f64>,
    nodes: Vec<f64>,
}

fn prepare(spec: &FoxHSpec, plan: &ContourPlan) -> Prepared {
    let d = spec.dimension();
    let n = plan.nodes_per_axis;
    let h = plan.step();
    let nodes: Vec<f64> = (0..n).map(|j| -plan.half_width + h * j as f64).collect();
    let mut axes = vec![vec![ComplexValue::new(0.0, 0.0); n]; d];
    let mut coupled = Vec::new();
    let mut constant = ComplexValue::new(0.0, 0.0);
    for (i, arg) in spec.arguments.iter().enumerate() {
        for (j, t) in nodes.iter().enumerate() {
            let s = ComplexValue::new(plan.anchors[i], *t);
            axes[i][j] += arg.sign * s * arg.log;
        }
    }
    for f in &spec.factors {
        let sign = if f.location == Location::Numerator { 1.0 } else { -1.0 };
        let vars = f.variables();
        match vars.len() {
            0 => constant += sign * ln_gamma_unchecked(ComplexValue::new(f.offset, 0.0)),
            1 => {
                let i = vars[0];
                let b = f.coeffs[i];
                let base = f.offset + b * plan.anchors[i];
                for (j, t) in nodes.iter().enumerate() {
                    axes[i][j] += sign * ln_gamma_unchecked(ComplexValue::new(base, b * t));
                }
            }
            _ => coupled.push(Coupled {
                offset: f.offset,
                coeffs: f.coeffs.clone(),
                sign,
            }),
        }
    }
    Prepared {
        axes,
        coupled,
        constant,
        anchors: plan.anchors.clone(),
        nodes,
    }
}

impl Prepared {
    fn coupled_log(&self, idx: &[usize]) -> ComplexValue {
        let mut acc = ComplexValue::new(0.0, 0.0);
        for c in &self.coupled {
            let mut re = c.offset;
            let mut im = 0.0;
            for (i, &j) in idx.iter().enumerate() {
                re += c.coeffs[i] * self.anchors[i];
                im += c.coeffs[i] * self.nodes[j];
            }
            acc += c.sign * ln_gamma_unchecked(ComplexValue::new(re, im));
        }
        acc
    }

    fn weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.nodes.len() {
            0.5
        } else {
            1.0
        }
    }

    /// Sum over all inner axes for a fixed outermost index.
    fn slab(&self, j0: usize, log_scale: f64) -> ComplexValue {
        let n = self.nodes.len();
        let d = self.axes.len();
        let base = self.axes[0][j0] + self.constant + log_scale;
        let w0 = self.weight(j0);
        match d {
            1 => w0 * (base + self.coupled_log(&[j0])).exp(),
            2 => {
                let mut acc = ComplexValue::new(0.0, 0.0);
                for j1 in 0..n {
                    let l = base + self.axes[1][j1] + self.coupled_log(&[j0, j1]);
                    acc += self.weight(j1) * l.exp();
                }
                w0 * acc
            }
            _ => {
                let mut acc = ComplexValue::new(0.0, 0.0);
                for j1 in 0..n {
                    let b1 = base + self.axes[1][j1];
                    let mut inner = ComplexValue::new(0.0, 0.0);
                    for j2 in 0..n {
                        let l = b1 + self.axes[2][j2] + self.coupled_log(&[j0, j1, j2]);
                        inner += self.weight(j2) * l.exp();
                    }
                    acc += self.weight(j1) * inner;
                }
                w0 * acc
            }
        }
    }
}

/// Trapezoid sum for one plan, including prefactor and `(h/2π)^d`.
fn trapezoid(spec: &FoxHSpec, plan: &ContourPlan) -> (ComplexValue, usize) {
    let d = spec.dimension();
    let prepared = prepare(spec, plan);
    let h = plan.step();
    let log_scale = spec.prefactor.abs().ln() + d as f64 * (h / (2.0 * PI)).ln();
    let slabs: Vec<ComplexValue> = (0..plan.nodes_per_axis)
        .into_par_iter()
        .map(|j0| prepared.slab(j0, log_scale))
        .collect();
    let total: ComplexValue = slabs.iter().sum();
    let sign = if spec.prefactor < 0.0 { -1.0 } else { 1.0 };
    (sign * total, plan.nodes_per_axis.pow(d as u32))
}

/// Coarse and refined sums; the refined value is reported, `|refined - base|`
/// is its error estimate.
fn eval_unchecked(spec: &FoxHSpec, plan: &ContourPlan) -> Result<(MellinBarnesValue, f64)> {
    validate_contours(spec, plan)?;
    if spec.prefactor == 0.0 {
        let v = MellinBarnesValue {
            value: 0.0,
            error_estimate: 0.0,
            imaginary_part: 0.0,
            evaluations: 0,
            plan: plan.clone(),
        };
        return Ok((v, 0.0));
    }
    let (coarse, n1) = trapezoid(spec, plan);
    let refined_plan = plan.refined(REFINE_WIDTH);
    let (fine, n2) = trapezoid(spec, &refined_plan);
    if !(fine.re.is_finite() && fine.im.is_finite()) {
        return Err(Error::MellinBarnes(format!(
            "{}: gamma products overflowed on {plan}",
            spec.name
        )));
    }
    let v = MellinBarnesValue {
        value: fine.re,
        error_estimate: (fine.re - coarse.re).abs(),
        imaginary_part: fine.im,
        evaluations: n1 + n2,
        plan: plan.clone(),
    };
    Ok((v, coarse.re))
}

fn diverged(name: &str, coarse: f64, fine: f64, plan: &dyn std::fmt::Display) -> Error {
    Error::MellinBarnes(format!(
        "{name}: refinement changed the value from {coarse:e} to {fine:e} on {plan}"
    ))
}

/// Evaluates `spec` on `plan` and on the refined plan `(1.5T, 2n)`; the refined
/// value is returned with `|refined - base|` as its error estimate.
pub fn eval_mellin_barnes(spec: &FoxHSpec, plan: &ContourPlan) -> Result<MellinBarnesValue> {
    let (v, coarse) = eval_unchecked(spec, plan)?;
    if v.error_estimate > DIVERGENCE_RATIO * v.value.abs() {
        return Err(diverged(&spec.name, coarse, v.value, plan));
    }
    Ok(v)
}

/// Plans each term automatically and sums the values. Divergence is judged on
/// the sum, so a negligible term may carry a large relative error.
pub fn eval_sum(terms: &[FoxHSpec], opts: &PlanOptions) -> Result<(f64, f64, Vec<MellinBarnesValue>)> {
    let mut value = 0.0;
    let mut coarse = 0.0;
    let mut error = 0.0;
    let mut parts = Vec::with_capacity(terms.len());
    for spec in terms {
        let plan = ContourPlan::auto(spec, opts)?;
        let (v, c) = eval_unchecked(spec, &plan)?;
        value += v.value;
        coarse += c;
        error += v.error_estimate;
        parts.push(v);
    }
    if error > DIVERGENCE_RATIO * value.abs() {
        let names: Vec<&str> = terms.iter().map(|t| t.name.as_str()).collect();
        let plans: Vec<String> = parts.iter().map(|p| p.plan.to_string()).collect();
        return Err(diverged(&names.join("+"), coarse, value, &plans.join("; ")));
    }
    Ok((value, error, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxh::contour::SeparationRule;
    use crate::foxh::spec::{Argument, GammaFactor};

    fn exp_spec(z: f64) -> FoxHSpec {
        FoxHSpec {
            name: "exp".into(),
            prefactor: 1.0,
            arguments: vec![Argument::real(z, -1.0)],
            factors: vec![GammaFactor::num(0.0, &[1.0])],
        }
    }

    #[test]
    fn exponential_representation() {
        let spec = exp_spec(1.0);
        let plan = ContourPlan {
            anchors: vec![0.5],
            half_width: 60.0,
            nodes_per_axis: 1025,
            rule: SeparationRule::Strict,
        };
        let v = eval_mellin_barnes(&spec, &plan).unwrap();
        assert!((v.value - (-1.0f64).exp()).abs() < 1e-8, "{v:?}");
        assert!(v.imaginary_part.abs() < 1e-10);
    }

    #[test]
    fn pole_on_contour_is_rejected() {
        let spec = FoxHSpec {
            name: "gamma(-s)".into(),
            prefactor: 1.0,
            arguments: vec![Argument::real(1.0, -1.0)],
            factors: vec![GammaFactor::num(0.0, &[-1.0]), GammaFactor::num(1.0, &[1.0])],
        };
        let plan = ContourPlan {
            anchors: vec![0.0],
            half_width: 30.0,
            nodes_per_axis: 129,
            rule: SeparationRule::Strict,
        };
        let err = eval_mellin_barnes(&spec, &plan).unwrap_err();
        assert!(matches!(err, Error::Contour(ref m) if m.contains("factor #0")), "{err}");
    }
}
