//! Quadrature of the closed-form densities.
//!
//! Every metric is an expectation over the gain, integrated in `ln h` between
//! tail cutoffs. This is the same integral as over `γ ∈ (0, 1/k²)` but stays
//! well conditioned when the SNR piles up just below the ceiling at high `γ0`.

use std::f64::consts::LN_2;

use crate::channel::{pdf_gain, snr_of_gain, ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::metrics::{Bounds, Method, MetricResult, ModulationParams};
use crate::numerics::{integrate_pieces, regularized_upper, QuadratureOptions};

const REL_TOL: f64 = 1e-10;
const ABS_TOL: f64 = 1e-300;
/// Probability mass left out on either side of the gain integration range.
const TAIL_MASS: f64 = 1e-30;
/// BER is dominated by the lower gain tail, so it is cut much deeper.
const BER_LOWER_MASS: f64 = 1e-80;
/// Width of the pieces in `ln h`.
const LOG_PIECE: f64 = 1.0;

fn options() -> QuadratureOptions {
    QuadratureOptions {
        rel_tol: REL_TOL,
        abs_tol: ABS_TOL,
        max_evaluations: 2_000_000,
    }
}

fn check_gamma0(gamma0: f64) -> Result<()> {
    if gamma0.is_finite() && gamma0 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma0 must be > 0, got {gamma0}")))
    }
}

fn diagnostics(evaluations: usize, pieces: usize, hw: &HardwareParams) -> String {
    let tail = if hw.is_ideal() { "; k=0 large-cutoff path" } else { "" };
    format!("tanh-sinh, {pieces} pieces, {evaluations} evaluations{tail}")
}

/// Average BER of the `{p, q}` family, `E[Γ(p, qγ)/2Γ(p)]`.
pub fn ber_quadrature(
    modulation: &ModulationParams,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<MetricResult> {
    check_gamma0(gamma0)?;
    let ModulationParams { p, q } = *modulation;
    regularized_upper(p, 0.0)?;
    let (value, err, diag) = expect_over_gain(
        |g| 0.5 * regularized_upper(p, q * g).unwrap_or(f64::NAN),
        BER_LOWER_MASS,
        ch,
        hw,
        gamma0,
    )?;
    if !value.is_finite() {
        return Err(Error::Domain(format!("BER integrand not finite for p={p}, q={q}")));
    }
    let value = Bounds::BitErrorRate.settle(value, err, hw)?;
    Ok(MetricResult::new(value, Method::Quadrature, err, diag))
}

/// `E[g(γ)]` over the gain distribution, integrated in `ln h`; the gain mass
/// below the lower cutoff is `lower_mass`.
fn expect_over_gain<G: Fn(f64) -> f64>(
    g: G,
    lower_mass: f64,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<(f64, f64, String)> {
    let lo = ch.gain_lower_cutoff(lower_mass).max(f64::MIN_POSITIVE).ln();
    let hi = ch.gain_upper_cutoff(TAIL_MASS).ln();
    let pieces = ((hi - lo) / LOG_PIECE).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces)
        .map(|i| lo + (hi - lo) * i as f64 / pieces as f64)
        .collect();
    let f = |u: f64| {
        let h = u.exp();
        g(snr_of_gain(h, gamma0, hw)) * pdf_gain(h, ch) * h
    };
    let r = integrate_pieces(&f, &breaks, &options())?;
    Ok((r.value, r.abs_error_estimate, diagnostics(r.evaluations, pieces, hw)))
}

/// Ergodic capacity `E[log2(1 + γ)]` in bits/s/Hz.
pub fn capacity_quadrature(ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<MetricResult> {
    check_gamma0(gamma0)?;
    let (value, err, diag) = expect_over_gain(|g| g.ln_1p() / LN_2, TAIL_MASS, ch, hw, gamma0)?;
    let value = Bounds::Capacity.settle(value, err.max(1e-12 * value), hw)?;
    Ok(MetricResult::new(value, Method::Quadrature, err, diag))
}

/// `E[γ^n]`; `n = 0` returns the numerical normalization.
pub fn moment_quadrature(n: u32, ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<MetricResult> {
    check_gamma0(gamma0)?;
    let (value, err, diag) = expect_over_gain(|g| g.powi(n as i32), TAIL_MASS, ch, hw, gamma0)?;
    let slack = err.max(1e-12 * value);
    let value = if n == 0 {
        Bounds::Probability.enforce(value, slack, hw)?;
        value
    } else {
        Bounds::Moment(n).settle(value, slack, hw)?
    };
    Ok(MetricResult::new(value, Method::Quadrature, err, diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(a: f64, m: f64, phi: f64, k: f64) -> (ChannelParams, HardwareParams) {
        (ChannelParams::normalized(a, m, phi).unwrap(), HardwareParams::aggregate(k).unwrap())
    }

    #[test]
    fn normalization() {
        for (a, m, phi, k) in [(2.0, 1.0, 14.41, 0.3), (1.0, 3.0, 1.5, 0.6), (3.0, 2.0, 6.0, 0.0)] {
            let (ch, hw) = setup(a, m, phi, k);
            let v = moment_quadrature(0, &ch, &hw, 1e3).unwrap().value;
            assert!((v - 1.0).abs() < 1e-8, "{v}");
        }
    }

    #[test]
    fn ber_tends_to_half_at_vanishing_snr() {
        let (ch, hw) = setup(2.0, 1.0, 14.41, 0.3);
        let v = ber_quadrature(&ModulationParams::BPSK, &ch, &hw, 1e-9).unwrap().value;
        assert!((v - 0.5).abs() < 1e-3, "{v}");
    }

    #[test]
    fn ber_matches_rayleigh_closed_form_with_negligible_pointing() {
        // Γ(1, qγ)/2 averaged over an exponential SNR of mean γ̄ is 1/(2(1+qγ̄)).
        let ch = ChannelParams::new(2.0, 1.0, 1.0, 1.0, 2000.0).unwrap();
        let hw = HardwareParams::ideal();
        let m = ModulationParams::new(1.0, 1.0).unwrap();
        let mean = moment_quadrature(1, &ch, &hw, 10.0).unwrap().value;
        let v = ber_quadrature(&m, &ch, &hw, 10.0).unwrap().value;
        assert!((v - 0.5 / (1.0 + mean)).abs() < 1e-5 * v, "{v} vs {}", 0.5 / (1.0 + mean));
    }

    #[test]
    fn capacity_below_ceiling() {
        let (ch, hw) = setup(2.0, 2.0, 14.41, 0.6);
        for g0 in [1e0, 1e3, 1e6, 1e9] {
            let c = capacity_quadrature(&ch, &hw, g0).unwrap().value;
            assert!(c < (1.0f64 / 0.36).ln_1p() / LN_2);
        }
    }
}
