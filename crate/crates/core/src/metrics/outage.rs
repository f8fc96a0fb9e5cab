use crate::channel::{cdf_snr, ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::metrics::{Bounds, Method, MetricResult};
use crate::numerics::ln_gamma_signed;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Distance below which `C = µ - φ/α` is treated as a non-positive integer.
const INTEGER_ORDER_TOL: f64 = 1e-9;

fn check_inputs(gamma_th: f64, gamma0: f64) -> Result<()> {
    if !(gamma_th.is_finite() && gamma_th > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma_th must be > 0, got {gamma_th}")));
    }
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma0 must be > 0, got {gamma0}")));
    }
    Ok(())
}

/// `P(γ ≤ γ_th)`, which is 1 at and above the ceiling `1/k²`.
pub fn outage_exact(
    gamma_th: f64,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<MetricResult> {
    check_inputs(gamma_th, gamma0)?;
    if gamma_th >= hw.ceiling() {
        return Ok(MetricResult::new(1.0, Method::Quadrature, 0.0, "gamma_th at or above the SNR ceiling"));
    }
    let p = cdf_snr(gamma_th, gamma0, ch, hw);
    Bounds::Probability.enforce(p, 0.0, hw)?;
    Ok(MetricResult::new(p, Method::Quadrature, 0.0, "closed-form cdf"))
}

/// Diversity order `min(αµ/2, φ/2)`.
pub fn diversity_order(ch: &ChannelParams) -> f64 {
    (0.5 * ch.alpha() * ch.mu()).min(0.5 * ch.phi())
}

/// Squared gain that puts the impaired SNR exactly at `gamma_th`.
fn threshold_gain_sq(gamma_th: f64, gamma0: f64, hw: &HardwareParams) -> Result<f64> {
    let u = 1.0 - gamma_th * hw.k_sq;
    if u <= 0.0 {
        return Err(Error::Domain(format!(
            "asymptotic outage needs gamma_th < 1/k², got gamma_th={gamma_th} with k²={}",
            hw.k_sq
        )));
    }
    Ok(gamma_th / (gamma0 * u))
}

/// Two leading terms of the small-argument expansion of the gain CDF at
/// `z = ζ x^α`:
///
/// ```text
/// F ≈ z^µ (1/µ - 1/C) / Γ(µ) + Γ(C) z^{φ/α} / Γ(µ)
/// ```
///
/// For `C = -m` the second term becomes `(-1)^m (ψ(m+1) - ln z) z^{φ/α} / (m! Γ(µ))`
/// and the `-1/C` contribution is absent when `m = 0`.
fn leading_terms(z: f64, ch: &ChannelParams) -> Result<(f64, f64, String)> {
    let (mu, b, c) = (ch.mu(), ch.b(), ch.c_order());
    let lg_mu = ch.ln_gamma_mu();
    let ln_z = z.ln();
    let nearest = c.round();
    let integer_order = c <= INTEGER_ORDER_TOL && (c - nearest).abs() < INTEGER_ORDER_TOL;
    if integer_order {
        let m = (-nearest) as u32;
        let first = if m == 0 { 1.0 / mu } else { 1.0 / mu + 1.0 / m as f64 };
        let harmonic: f64 = (1..=m).map(|j| 1.0 / j as f64).sum();
        let (lg_fact, _) = ln_gamma_signed(m as f64 + 1.0)?;
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let second = sign * (harmonic - EULER_GAMMA - ln_z) * (b * ln_z - lg_fact - lg_mu).exp();
        let t1 = first * (mu * ln_z - lg_mu).exp();
        return Ok((t1, second, format!("C={c} is a non-positive integer; logarithmic second term")));
    }
    let (lg_c, sign_c) = ln_gamma_signed(c)?;
    let t1 = (1.0 / mu - 1.0 / c) * (mu * ln_z - lg_mu).exp();
    let t2 = sign_c * (lg_c + b * ln_z - lg_mu).exp();
    let note = if sign_c < 0.0 { format!("Gamma(C) < 0 at C={c:.4}") } else { String::new() };
    Ok((t1, t2, note))
}

/// High-SNR outage from the two leading terms of the CDF expansion, evaluated
/// at the exact threshold gain `x² = γ_th / (γ0 (1 - γ_th k²))`.
pub fn outage_asymptotic(
    gamma_th: f64,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<MetricResult> {
    check_inputs(gamma_th, gamma0)?;
    let x_sq = threshold_gain_sq(gamma_th, gamma0, hw)?;
    let z = ch.zeta() * x_sq.powf(0.5 * ch.alpha());
    let (t1, t2, mut note) = leading_terms(z, ch)?;
    let value = t1 + t2;
    if value < 0.0 {
        note = format!("{note}; negative asymptotic probability {value:e}");
    }
    Ok(MetricResult::new(value, Method::Asymptotic, 0.0, note.trim_start_matches("; ").to_string()))
}

/// The two-term expression as commonly printed:
///
/// ```text
/// ζ^µ/(µΓ(µ)) X^{αµ/2} + Γ(C) ζ^{φ/α}/Γ(µ) X^{φ/2},   X = γ_th / (γ0 (1 - k²))
/// ```
///
/// Differs from [`outage_asymptotic`] in the missing `-1/C` coefficient and the
/// `(1 - k²)` denominator; kept for comparison.
pub fn outage_asymptotic_printed(
    gamma_th: f64,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<MetricResult> {
    check_inputs(gamma_th, gamma0)?;
    if hw.k_sq >= 1.0 {
        return Err(Error::Domain(format!("printed asymptotic needs k² < 1, got {}", hw.k_sq)));
    }
    let (mu, b, c, alpha) = (ch.mu(), ch.b(), ch.c_order(), ch.alpha());
    let ln_x = (gamma_th / (gamma0 * (1.0 - hw.k_sq))).ln();
    let ln_zeta = ch.zeta().ln();
    let (lg_c, sign_c) = ln_gamma_signed(c)
        .map_err(|_| Error::Domain(format!("Gamma(C) has a pole at C={c}")))?;
    let t1 = (mu * ln_zeta - mu.ln() - ch.ln_gamma_mu() + 0.5 * alpha * mu * ln_x).exp();
    let t2 = sign_c * (lg_c + b * ln_zeta - ch.ln_gamma_mu() + 0.5 * ch.phi() * ln_x).exp();
    let value = t1 + t2;
    let note = if value < 0.0 { format!("negative asymptotic probability {value:e}") } else { String::new() };
    Ok(MetricResult::new(value, Method::Asymptotic, 0.0, note))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diversity_order_examples() {
        let d = |a, m, p| diversity_order(&ChannelParams::normalized(a, m, p).unwrap());
        assert_eq!(d(2.0, 1.0, 14.41), 1.0);
        assert_eq!(d(2.0, 3.0, 14.41), 3.0);
        assert_eq!(d(1.0, 2.0, 1.5), 0.75);
    }

    #[test]
    fn outage_above_ceiling_is_one() {
        let ch = ChannelParams::normalized(2.0, 1.0, 14.41).unwrap();
        let hw = HardwareParams::aggregate(0.3).unwrap();
        assert_eq!(outage_exact(1.0 / 0.09, &ch, &hw, 1e3).unwrap().value, 1.0);
        assert_eq!(outage_exact(20.0, &ch, &hw, 1e3).unwrap().value, 1.0);
        assert!(outage_exact(1e-12, &ch, &hw, 1e3).unwrap().value < 1e-12);
    }

    #[test]
    fn asymptotic_ratio_tends_to_one() {
        for (a, m, p) in [(2.0, 1.0, 14.41), (2.0, 3.0, 14.41), (1.0, 2.0, 3.0), (2.0, 2.0, 1.5)] {
            let ch = ChannelParams::normalized(a, m, p).unwrap();
            let hw = HardwareParams::aggregate(0.6).unwrap();
            let e = outage_exact(2.0, &ch, &hw, 1e9).unwrap().value;
            let s = outage_asymptotic(2.0, &ch, &hw, 1e9).unwrap().value;
            assert!((s / e - 1.0).abs() < 1e-3, "({a},{m},{p}): {s} vs {e}");
        }
    }

    #[test]
    fn printed_asymptotic_hand_value() {
        // α=2, µ=1, φ=4, S=Ω=1: ζ=1, C=-1 → Γ(C) pole; use φ=3 (C=-0.5, Γ(C)=-2√π).
        let ch = ChannelParams::normalized(2.0, 1.0, 3.0).unwrap();
        let hw = HardwareParams::aggregate(0.5).unwrap();
        let x: f64 = 1.0 / (100.0 * 0.75);
        let expected = x + (-2.0 * std::f64::consts::PI.sqrt()) * x.powf(1.5);
        let got = outage_asymptotic_printed(1.0, &ch, &hw, 100.0).unwrap().value;
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
    }
}
