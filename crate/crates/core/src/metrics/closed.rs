//! Mellin-Barnes (Fox H) evaluations and the high-SNR BER expression.

use crate::channel::{ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::foxh::{
    b_argument, ber_foxh_spec, capacity_foxh_spec, eval_sum, moment_foxh_spec, FoxHSpec,
    PlanOptions,
};
use crate::metrics::{Bounds, Method, MetricResult, ModulationParams};
use crate::numerics::{ln_gamma_real, ln_gamma_signed, regularized_upper};

/// Sums the Mellin-Barnes terms plus a closed-form `constant`.
fn evaluate(terms: &[FoxHSpec], constant: f64, bounds: Bounds, hw: &HardwareParams) -> Result<MetricResult> {
    let (sum, err, parts) = eval_sum(terms, &PlanOptions::default())?;
    let mut diag: Vec<String> = parts
        .iter()
        .zip(terms)
        .map(|(v, s)| format!("{}: {:.6e} [{}]", s.name, v.value, v.plan))
        .collect();
    if constant != 0.0 {
        diag.push(format!("ceiling term: {constant:.6e}"));
    }
    let value = sum + constant;
    let value = bounds.settle(value, err.max(1e-9 * value.abs()), hw)?;
    Ok(MetricResult::new(value, Method::FoxH, err, diag.join("; ")))
}

/// The Mellin-Barnes terms integrate `F_γ` against the BER kernel up to the
/// ceiling `1/k²`; the integration by parts leaves `Q(p, q/k²)/2` at that end.
pub fn ber_foxh(
    modulation: &ModulationParams,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<MetricResult> {
    let terms = ber_foxh_spec(ch, hw, gamma0, modulation.p, modulation.q)?;
    let ceiling = 0.5 * regularized_upper(modulation.p, modulation.q * hw.ceiling())?;
    evaluate(&terms, ceiling, Bounds::BitErrorRate, hw)
}

pub fn capacity_foxh(ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<MetricResult> {
    let terms = capacity_foxh_spec(ch, hw, gamma0)?;
    evaluate(&terms, 0.0, Bounds::Capacity, hw)
}

pub fn moment_foxh(n: u32, ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<MetricResult> {
    let terms = moment_foxh_spec(ch, hw, gamma0, n)?;
    evaluate(&terms, 0.0, Bounds::Moment(n), hw)
}

/// The three terms of the reference high-SNR BER expression, in order:
///
/// ```text
/// T1 =  q^p/(2Γ(p)) · ψ ζ^{-φ/α}/φ · B^µ
/// T2 = -ζ^{φ/α} q^p/(γ0^{φ/2} k^φ 2Γ(p)) · B^µ Γ(1-φ/2) Γ(-1+φ/2)
/// T3 = -3 ζ^{φ/α} q^p/(γ0^{φ/2} k^φ 2Γ(p)) · Γ(1-φ/2) Γ(-1+φ/2)
/// ```
///
/// with `B = ζ/(γ0^{α/2} k^α)`. `T1 ∝ γ0^{-αµ/2}` and `T3 ∝ γ0^{-φ/2}` carry the
/// diversity order.
pub fn ber_asymptotic_terms(
    modulation: &ModulationParams,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<[f64; 3]> {
    if hw.k_sq <= 0.0 {
        return Err(Error::InvalidParameter("asymptotic BER needs k² > 0".into()));
    }
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma0 must be > 0, got {gamma0}")));
    }
    let ModulationParams { p, q } = *modulation;
    let half_phi = 0.5 * ch.phi();
    let singular = |e: &dyn std::fmt::Display| {
        Error::Domain(format!(
            "Gamma(1-φ/2)Gamma(-1+φ/2) is singular at φ={} (φ/2 must not be an integer): {e}",
            ch.phi()
        ))
    };
    if (half_phi - half_phi.round()).abs() < 1e-12 {
        return Err(singular(&"pole"));
    }
    let (lg1, s1) = ln_gamma_signed(1.0 - half_phi).map_err(|e| singular(&e))?;
    let (lg2, s2) = ln_gamma_signed(half_phi - 1.0).map_err(|e| singular(&e))?;
    let ln_b = b_argument(ch, hw.k_sq, gamma0).ln();
    let ln_base = p * q.ln() - (2.0f64).ln() - ln_gamma_real(p)?;
    let t1 = (ln_base + ch.psi().ln() - ch.b() * ch.zeta().ln() - ch.phi().ln() + ch.mu() * ln_b).exp();
    let ln_common = ch.b() * ch.zeta().ln() + ln_base - half_phi * (gamma0 * hw.k_sq).ln() + lg1 + lg2;
    let sign = s1 * s2;
    let t2 = -sign * (ln_common + ch.mu() * ln_b).exp();
    let t3 = -3.0 * sign * ln_common.exp();
    Ok([t1, t2, t3])
}

/// Reference high-SNR BER expression, evaluated as printed. Only its
/// slope in `γ0` is meaningful; negative totals are reported in diagnostics.
pub fn ber_asymptotic(
    modulation: &ModulationParams,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<MetricResult> {
    let [t1, t2, t3] = ber_asymptotic_terms(modulation, ch, hw, gamma0)?;
    let value = t1 + t2 + t3;
    let mut diag = format!("terms {t1:e} {t2:e} {t3:e}");
    if value < 0.0 {
        diag.push_str("; negative asymptotic BER");
    }
    Ok(MetricResult::new(value, Method::Asymptotic, 0.0, diag))
}
