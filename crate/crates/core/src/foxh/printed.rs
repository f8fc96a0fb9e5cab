//! Multivariable H-functions in the usual parameter-block shorthand, and the
//! reference closed forms for BER, capacity and moments written in it.
//!
//! These transcriptions are kept as fixtures: they are evaluated and compared
//! with quadrature, and any disagreement is recorded in the discrepancy
//! ledger. The metric paths use the derivations in `specs`.

use crate::channel::{ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::foxh::spec::{Argument, FoxHSpec, GammaFactor};
use crate::foxh::specs::b_argument;
use crate::numerics::ln_gamma_real;

/// `(a; α_1, …, α_r)` entry of the joint parameter block.
#[derive(Debug, Clone, PartialEq)]
pub struct JointParam {
    pub value: f64,
    pub coeffs: Vec<f64>,
}

/// Parameters of one variable: `H^{m, n}_{p, q}` with upper `(c, γ)` and lower `(d, δ)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableBlock {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

/// `H^{0, n: m_1, n_1: …}_{p, q: p_1, q_1: …}(x_1, …, x_r)` with kernel
///
/// ```text
/// Π_{j≤n} Γ(1 - a_j + Σ α_j s) / (Π_{j>n} Γ(a_j - Σ α_j s) Π_j Γ(1 - b_j + Σ β_j s))
/// × Π_i [Π_{j≤m_i} Γ(d_j - δ_j s_i) Π_{j≤n_i} Γ(1 - c_j + γ_j s_i)
///        / (Π_{j>m_i} Γ(1 - d_j + δ_j s_i) Π_{j>n_i} Γ(c_j - γ_j s_i))] x_i^{s_i}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct MultiH {
    pub n: usize,
    pub joint_upper: Vec<JointParam>,
    pub joint_lower: Vec<JointParam>,
    pub variables: Vec<VariableBlock>,
}

impl MultiH {
    pub fn to_spec(&self, name: &str, prefactor: f64, arguments: &[Argument]) -> Result<FoxHSpec> {
        let r = self.variables.len();
        if arguments.len() != r {
            return Err(Error::InvalidParameter(format!(
                "{name}: {} arguments for {r} variables",
                arguments.len()
            )));
        }
        let mut factors = Vec::new();
        for (j, a) in self.joint_upper.iter().enumerate() {
            if a.coeffs.len() != r {
                return Err(Error::InvalidParameter(format!("{name}: joint entry {j} has wrong arity")));
            }
            let neg: Vec<f64> = a.coeffs.iter().map(|c| -c).collect();
            if j < self.n {
                factors.push(GammaFactor::num(1.0 - a.value, &a.coeffs));
            } else {
                factors.push(GammaFactor::den(a.value, &neg));
            }
        }
        for b in &self.joint_lower {
            factors.push(GammaFactor::den(1.0 - b.value, &b.coeffs));
        }
        for (i, v) in self.variables.iter().enumerate() {
            let unit = |x: f64| {
                let mut c = vec![0.0; r];
                c[i] = x;
                c
            };
            for (j, &(d, delta)) in v.lower.iter().enumerate() {
                if j < v.m {
                    factors.push(GammaFactor::num(d, &unit(-delta)));
                } else {
                    factors.push(GammaFactor::den(1.0 - d, &unit(delta)));
                }
            }
            for (j, &(c, gamma)) in v.upper.iter().enumerate() {
                if j < v.n {
                    factors.push(GammaFactor::num(1.0 - c, &unit(gamma)));
                } else {
                    factors.push(GammaFactor::den(c, &unit(-gamma)));
                }
            }
        }
        let spec = FoxHSpec {
            name: name.to_string(),
            prefactor,
            arguments: arguments.iter().map(|a| Argument { sign: 1.0, ..*a }).collect(),
            factors,
        };
        spec.check()?;
        Ok(spec)
    }
}

fn joint(value: f64, coeffs: &[f64]) -> JointParam {
    JointParam {
        value,
        coeffs: coeffs.to_vec(),
    }
}

fn block(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)]) -> VariableBlock {
    VariableBlock {
        m,
        n,
        upper: upper.to_vec(),
        lower: lower.to_vec(),
    }
}

fn require_k(hw: &HardwareParams) -> Result<f64> {
    if hw.k_sq > 0.0 {
        Ok(hw.k_sq)
    } else {
        Err(Error::InvalidParameter("printed closed forms need k² > 0".into()))
    }
}

/// The bracketed pair of trivariate H-functions for the average BER, as printed,
/// with arguments `(B, 1, -k²/q)` and prefactor `ζ^{φ/α} q^p / (γ0^{φ/2} k^φ 2Γ(p))`.
pub fn printed_ber_specs(
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
    p: f64,
    q: f64,
) -> Result<Vec<FoxHSpec>> {
    let k_sq = require_k(hw)?;
    let (a2, phi) = (0.5 * ch.alpha(), ch.phi());
    let pre = (ch.b() * ch.zeta().ln() + p * q.ln()
        - 0.5 * phi * (gamma0 * k_sq).ln()
        - (2.0f64).ln()
        - ln_gamma_real(p)?)
    .exp();
    let args = [
        Argument::real(b_argument(ch, k_sq, gamma0), 1.0),
        Argument::real(1.0, 1.0),
        Argument::real(-k_sq / q, 1.0),
    ];
    let var2 = block(1, 1, &[(0.0, 1.0)], &[(4.0 - p, 1.0)]);
    let var3 = block(0, 2, &[(1.0, 1.0), (0.0, 1.0)], &[]);
    let first = MultiH {
        n: 2,
        joint_upper: vec![joint(0.0, &[a2, 1.0, 0.0]), joint(2.0, &[a2, 1.0, 1.0])],
        joint_lower: vec![],
        variables: vec![
            block(1, 1, &[(1.0, 1.0)], &[(ch.mu(), 1.0), (0.0, 1.0)]),
            var2.clone(),
            var3.clone(),
        ],
    };
    let second = MultiH {
        n: 2,
        joint_upper: vec![
            joint(0.5 * phi, &[a2, 1.0, 0.0]),
            joint(2.0 - 0.5 * phi, &[a2, 1.0, 1.0]),
        ],
        joint_lower: vec![],
        variables: vec![
            block(2, 0, &[(1.0, 1.0)], &[(ch.c_order(), 1.0), (0.0, 1.0)]),
            var2,
            var3,
        ],
    };
    Ok(vec![
        first.to_spec("printed_ber_first", pre, &args)?,
        second.to_spec("printed_ber_second", pre, &args)?,
    ])
}

/// The trivariate H-function for the ergodic capacity, as printed, with
/// arguments `(1/B, 1, 1/k²)` and prefactor `ψ / (8 γ0^{φ/2} k^{φ+2})`.
pub fn printed_capacity_spec(ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<FoxHSpec> {
    let k_sq = require_k(hw)?;
    let (alpha, phi) = (ch.alpha(), ch.phi());
    let (a2, a) = (0.5 * alpha, 2.0 / alpha);
    let pre = (ch.psi().ln() - (8.0f64).ln() - 0.5 * phi * gamma0.ln() - (0.5 * phi + 1.0) * k_sq.ln()).exp();
    let args = [
        Argument::real(1.0 / b_argument(ch, k_sq, gamma0), 1.0),
        Argument::real(1.0, 1.0),
        Argument::real(1.0 / k_sq, 1.0),
    ];
    let h = MultiH {
        n: 2,
        joint_upper: vec![
            joint(1.0 - (1.0 - 0.5 * phi + alpha - a) / a, &[a2, 1.0, 0.0]),
            joint(1.0 - (-2.0 - 0.5 * phi + alpha - a) / a, &[a2, 1.0, 1.0]),
        ],
        joint_lower: vec![],
        variables: vec![
            block(2, 0, &[(1.0, 1.0)], &[(ch.c_order(), 1.0), (0.0, 1.0)]),
            block(1, 1, &[(1.0, 1.0)], &[(2.0, 1.0)]),
            block(1, 2, &[(1.0, 1.0), (1.0, 1.0)], &[(1.0, 1.0), (0.0, 1.0), (2.0, 1.0)]),
        ],
    };
    h.to_spec("printed_capacity", pre, &args)
}

/// The two bivariate Mellin-Barnes integrals for `E[γ^n]` obtained from the
/// printed double integral with the printed `z`-integral substituted, prefactor
/// `-ψ / (8 γ0^{φ/2} k^{φ+2n} Γ(n))`.
pub fn printed_moment_specs(
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
    n: u32,
) -> Result<Vec<FoxHSpec>> {
    let k_sq = require_k(hw)?;
    if n == 0 {
        return Err(Error::InvalidParameter("moment order must be >= 1".into()));
    }
    let nf = n as f64;
    let (a2, phi, c) = (0.5 * ch.alpha(), ch.phi(), ch.c_order());
    let pre = -(ch.psi().ln()
        - (8.0f64).ln()
        - 0.5 * phi * gamma0.ln()
        - (0.5 * phi + nf) * k_sq.ln()
        - ln_gamma_real(nf)?)
    .exp();
    let b_arg = Argument::real(b_argument(ch, k_sq, gamma0), 1.0);
    let common = [
        GammaFactor::num(c, &[-1.0, 0.0]),
        GammaFactor::num(0.0, &[-1.0, 0.0]),
        GammaFactor::den(1.0, &[-1.0, 0.0]),
        GammaFactor::num(0.0, &[0.0, 1.0]),
        GammaFactor::num(nf + 1.0, &[0.0, -1.0]),
        GammaFactor::num(1.0, &[0.0, -1.0]),
    ];
    // (-1/2)^{-s2} 2^{s2} = e^{s2 (ln 4 - iπ)} on the principal branch.
    let mut first = common.to_vec();
    first.extend([
        GammaFactor::num(-1.0 - 0.5 * phi, &[a2, 1.0]),
        GammaFactor::num(1.0, &[0.0, 1.0]),
        GammaFactor::den(-0.5 * phi, &[a2, 0.0]),
    ]);
    let mut second = common.to_vec();
    second.extend([
        GammaFactor::num(1.0 + 0.5 * phi, &[-a2, 0.0]),
        GammaFactor::den(2.0 - 0.5 * phi, &[a2, -1.0]),
    ]);
    let four = (4.0f64).ln();
    Ok(vec![
        FoxHSpec {
            name: format!("printed_moment_{n}_first"),
            prefactor: pre,
            arguments: vec![b_arg, Argument::polar(4.0, -std::f64::consts::PI, 1.0)],
            factors: first,
        },
        FoxHSpec {
            name: format!("printed_moment_{n}_second"),
            prefactor: pre,
            arguments: vec![b_arg, Argument { log: four.into(), sign: 1.0 }],
            factors: second,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxh::spec::Location;

    #[test]
    fn block_conversion_follows_the_kernel() {
        let h = MultiH {
            n: 1,
            joint_upper: vec![joint(0.5, &[1.0]), joint(2.0, &[0.5])],
            joint_lower: vec![joint(3.0, &[2.0])],
            variables: vec![block(1, 1, &[(1.0, 1.0), (4.0, 1.0)], &[(0.25, 1.0), (7.0, 1.0)])],
        };
        let s = h.to_spec("t", 1.0, &[Argument::real(2.0, 1.0)]).unwrap();
        let got: Vec<(Location, f64, f64)> =
            s.factors.iter().map(|f| (f.location, f.offset, f.coeffs[0])).collect();
        use Location::*;
        assert_eq!(
            got,
            vec![
                (Numerator, 0.5, 1.0),
                (Denominator, 2.0, -0.5),
                (Denominator, -2.0, 2.0),
                (Numerator, 0.25, -1.0),
                (Denominator, -6.0, 1.0),
                (Numerator, 0.0, 1.0),
                (Denominator, 4.0, -1.0),
            ]
        );
    }

    #[test]
    fn printed_ber_prefactor_hand_value() {
        // ζ = µ = 1, φ = 2, k = 0.3, γ0 = 1, p = 0.5, q = 1: 1/(0.09 · 2√π).
        let ch = ChannelParams::normalized(1.0, 1.0, 2.0).unwrap();
        let hw = HardwareParams::aggregate(0.3).unwrap();
        let specs = printed_ber_specs(&ch, &hw, 1.0, 0.5, 1.0).unwrap();
        let expected = 1.0 / (0.09 * 2.0 * std::f64::consts::PI.sqrt());
        assert!((specs[0].prefactor - expected).abs() < 1e-12 * expected);
        assert_eq!(specs[0].arguments[2].phase(), std::f64::consts::PI);
    }
}
