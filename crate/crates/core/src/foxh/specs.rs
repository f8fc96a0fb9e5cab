//! Mellin-Barnes encodings of the average BER, ergodic capacity and SNR moments.
//!
//! All three follow the same route. With `z = 1 + 1/(k² γ0 |h|²)` the impaired
//! SNR becomes `γ = 1/(k² z)` on `z ∈ (1, ∞)` and the incomplete-gamma argument
//! becomes `ζ|h|^α = B (z-1)^{-α/2}` with `B = ζ / (γ0^{α/2} k^α)`. Replacing the
//! incomplete gammas, the exponential and the logarithm by their Mellin-Barnes
//! integrals leaves a `z`-integral of the form
//!
//! ```text
//! ∫_1^∞ z^{-λ} (z-1)^{ν-1} dz = Γ(ν) Γ(λ-ν) / Γ(λ)
//! ```
//!
//! which closes each metric as a sum of 1- or 2-fold Mellin-Barnes integrals in
//! the variables `s1` (incomplete gamma, argument `B`) and `s2` (exponential or
//! logarithm, argument `k²/q` or `1/k²`).

use crate::channel::{ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::foxh::spec::{Argument, FoxHSpec, GammaFactor};
use crate::numerics::ln_gamma_real;

fn require_impairment(hw: &HardwareParams) -> Result<f64> {
    if hw.k_sq > 0.0 {
        Ok(hw.k_sq)
    } else {
        Err(Error::InvalidParameter(
            "the Mellin-Barnes forms need k² > 0 (finite SNR ceiling); use the quadrature path".into(),
        ))
    }
}

fn require_positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
    }
}

/// `B = ζ / (γ0^{α/2} k^α)`.
pub fn b_argument(ch: &ChannelParams, k_sq: f64, gamma0: f64) -> f64 {
    (ch.zeta().ln() - 0.5 * ch.alpha() * (gamma0 * k_sq).ln()).exp()
}

/// Two bivariate terms for the average BER of the `{p, q}` modulation family:
/// the lower-incomplete-gamma part and the pointing-error part of the CDF.
/// Together they give `(q^p/2Γ(p)) ∫_0^{1/k²} e^{-qγ} γ^{p-1} F_γ(γ) dγ`; the
/// BER also has the boundary term `Q(p, q/k²)/2` (see `metrics::ber_foxh`).
pub fn ber_foxh_spec(
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
    p: f64,
    q: f64,
) -> Result<Vec<FoxHSpec>> {
    let k_sq = require_impairment(hw)?;
    let gamma0 = require_positive("gamma0", gamma0)?;
    let p = require_positive("p", p)?;
    let q = require_positive("q", q)?;
    let (a2, mu, phi, c) = (0.5 * ch.alpha(), ch.mu(), ch.phi(), ch.c_order());
    let b_arg = b_argument(ch, k_sq, gamma0);
    // q^p k^{-2p} / (2 Γ(p) Γ(µ))
    let ln_common = p * q.ln() - p * k_sq.ln() - std::f64::consts::LN_2 - ln_gamma_real(p)?
        - ch.ln_gamma_mu();
    let arguments = vec![Argument::real(b_arg, -1.0), Argument::real(k_sq / q, 1.0)];

    let incomplete = FoxHSpec {
        name: "ber_lower_incomplete".into(),
        prefactor: ln_common.exp(),
        arguments: arguments.clone(),
        factors: vec![
            GammaFactor::num(mu, &[1.0, 0.0]),
            GammaFactor::num(0.0, &[-1.0, 0.0]),
            GammaFactor::den(1.0, &[-1.0, 0.0]),
            GammaFactor::num(1.0, &[a2, 0.0]),
            GammaFactor::num(0.0, &[0.0, 1.0]),
            GammaFactor::num(p, &[-a2, -1.0]),
            GammaFactor::den(1.0 + p, &[0.0, -1.0]),
        ],
    };
    let pointing = FoxHSpec {
        name: "ber_pointing".into(),
        prefactor: (ln_common + ch.b() * b_arg.ln()).exp(),
        arguments,
        factors: vec![
            GammaFactor::num(c, &[1.0, 0.0]),
            GammaFactor::num(0.0, &[1.0, 0.0]),
            GammaFactor::den(1.0, &[1.0, 0.0]),
            GammaFactor::num(1.0 - 0.5 * phi, &[a2, 0.0]),
            GammaFactor::num(0.0, &[0.0, 1.0]),
            GammaFactor::num(p + 0.5 * phi, &[-a2, -1.0]),
            GammaFactor::den(1.0 + p, &[0.0, -1.0]),
        ],
    };
    Ok(vec![incomplete, pointing])
}

/// Bivariate term for the ergodic capacity in bits/s/Hz.
pub fn capacity_foxh_spec(ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<Vec<FoxHSpec>> {
    let k_sq = require_impairment(hw)?;
    let gamma0 = require_positive("gamma0", gamma0)?;
    let (a2, phi, c) = (0.5 * ch.alpha(), ch.phi(), ch.c_order());
    let b_arg = b_argument(ch, k_sq, gamma0);
    // ψ / (2 ln2 γ0^{φ/2} k^φ)
    let ln_pre = ch.psi().ln()
        - (2.0 * std::f64::consts::LN_2).ln()
        - 0.5 * phi * (gamma0 * k_sq).ln();
    Ok(vec![FoxHSpec {
        name: "capacity".into(),
        prefactor: ln_pre.exp(),
        arguments: vec![Argument::real(b_arg, -1.0), Argument::real(1.0 / k_sq, -1.0)],
        factors: vec![
            GammaFactor::num(c, &[1.0, 0.0]),
            GammaFactor::num(0.0, &[1.0, 0.0]),
            GammaFactor::den(1.0, &[1.0, 0.0]),
            GammaFactor::num(-0.5 * phi, &[a2, 0.0]),
            GammaFactor::num(1.0, &[0.0, 1.0]),
            GammaFactor::num(0.0, &[0.0, -1.0]),
            GammaFactor::den(1.0, &[0.0, -1.0]),
            GammaFactor::num(0.5 * phi, &[-a2, -1.0]),
        ],
    }])
}

/// Univariate term for the `n`-th moment `E[γ^n]`, `n ≥ 1`.
pub fn moment_foxh_spec(
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
    n: u32,
) -> Result<Vec<FoxHSpec>> {
    let k_sq = require_impairment(hw)?;
    let gamma0 = require_positive("gamma0", gamma0)?;
    if n == 0 {
        return Err(Error::InvalidParameter("moment order must be >= 1".into()));
    }
    let nf = n as f64;
    let (a2, phi, c) = (0.5 * ch.alpha(), ch.phi(), ch.c_order());
    let b_arg = b_argument(ch, k_sq, gamma0);
    // ψ / (2 γ0^{φ/2} k^{φ+2n} Γ(n))
    let ln_pre = ch.psi().ln()
        - std::f64::consts::LN_2
        - 0.5 * phi * gamma0.ln()
        - (0.5 * phi + nf) * k_sq.ln()
        - ln_gamma_real(nf)?;
    Ok(vec![FoxHSpec {
        name: format!("moment_{n}"),
        prefactor: ln_pre.exp(),
        arguments: vec![Argument::real(b_arg, -1.0)],
        factors: vec![
            GammaFactor::num(c, &[1.0]),
            GammaFactor::num(0.0, &[1.0]),
            GammaFactor::den(1.0, &[1.0]),
            GammaFactor::num(-0.5 * phi, &[a2]),
            GammaFactor::num(nf + 0.5 * phi, &[-a2]),
        ],
    }])
}
