use crate::channel::{ChannelParams, HardwareParams};
use crate::error::Result;
use crate::metrics::{capacity_quadrature, moment_quadrature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedStats {
    pub avg_snr: f64,
    pub snr_variance: f64,
    /// Amount of fading, `Var[γ] / E[γ]²`.
    pub aof: f64,
    /// `E[γ]` without impairment over `E[γ]` with it.
    pub snr_loss_ratio: f64,
    /// Capacity without impairment over capacity with it.
    pub capacity_loss_ratio: f64,
}

/// Average SNR, variance, amount of fading and the impairment loss ratios.
/// Baselines (`k = 0`) use the large-cutoff quadrature path.
pub fn derived_stats(ch: &ChannelParams, hw: &HardwareParams, gamma0: f64) -> Result<DerivedStats> {
    let ideal = HardwareParams::ideal();
    let m1 = moment_quadrature(1, ch, hw, gamma0)?.value;
    let m2 = moment_quadrature(2, ch, hw, gamma0)?.value;
    let snr_variance = (m2 - m1 * m1).max(0.0);
    let base_m1 = moment_quadrature(1, ch, &ideal, gamma0)?.value;
    let base_c = capacity_quadrature(ch, &ideal, gamma0)?.value;
    let c = capacity_quadrature(ch, hw, gamma0)?.value;
    Ok(DerivedStats {
        avg_snr: m1,
        snr_variance,
        aof: snr_variance / (m1 * m1),
        snr_loss_ratio: base_m1 / m1,
        capacity_loss_ratio: base_c / c,
    })
}
