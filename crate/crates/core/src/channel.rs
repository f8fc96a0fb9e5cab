//! Channel, hardware and link-budget parameters, and the closed-form statistics
//! of the composite gain `|h|` and of the hardware-impaired SNR.
//!
//! The gain combines alpha-mu fading with zero-boresight pointing errors:
//!
//! ```text
//! f(x) = ψ x^{φ-1} Γ(µ - φ/α, ζ x^α)
//! F(x) = [γ(µ, ζx^α) + (ζx^α)^{φ/α} Γ(µ - φ/α, ζx^α)] / Γ(µ)
//! ψ = φ S^{-φ} µ^{φ/α} / (Ω^φ Γ(µ)),   ζ = µ S^{-α} / Ω^α
//! ```
//!
//! and the impaired SNR is `γ = γ0 |h|² / (k² γ0 |h|² + 1)`, bounded by `1/k²`.

use crate::error::{Error, Result};
use crate::numerics::{ln_gamma_real, regularized_lower, regularized_upper, upper_gamma_scaled};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Representative molecular absorption coefficient in the 275 GHz window, 1/m.
pub const DEFAULT_KAPPA: f64 = 0.0033;

/// Incomplete-gamma arguments beyond this make every density term underflow.
const UNDERFLOW_ARGUMENT: f64 = 800.0;

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Fading (α, µ, Ω) and pointing-error (S, φ) parameters of the composite gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    alpha: f64,
    mu: f64,
    omega: f64,
    s_cap: f64,
    phi: f64,
    psi: f64,
    zeta: f64,
    ln_gamma_mu: f64,
}

impl ChannelParams {
    pub fn new(alpha: f64, mu: f64, omega: f64, s_cap: f64, phi: f64) -> Result<Self> {
        let alpha = positive("alpha", alpha)?;
        let mu = positive("mu", mu)?;
        let omega = positive("omega", omega)?;
        let s_cap = positive("S", s_cap)?;
        let phi = positive("phi", phi)?;
        let ln_gamma_mu = ln_gamma_real(mu)?;
        let ln_psi = phi.ln() - phi * s_cap.ln() + (phi / alpha) * mu.ln()
            - phi * omega.ln()
            - ln_gamma_mu;
        let ln_zeta = mu.ln() - alpha * s_cap.ln() - alpha * omega.ln();
        let (psi, zeta) = (ln_psi.exp(), ln_zeta.exp());
        if !(psi.is_finite() && psi > 0.0 && zeta.is_finite() && zeta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "derived psi={psi:e}, zeta={zeta:e} are not finite and positive"
            )));
        }
        Ok(Self {
            alpha,
            mu,
            omega,
            s_cap,
            phi,
            psi,
            zeta,
            ln_gamma_mu,
        })
    }

    /// Unit-mean-power channel (`Ω = S = 1`) with the given shape parameters.
    pub fn normalized(alpha: f64, mu: f64, phi: f64) -> Result<Self> {
        Self::new(alpha, mu, 1.0, 1.0, phi)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn s_cap(&self) -> f64 {
        self.s_cap
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn psi(&self) -> f64 {
        self.psi
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub(crate) fn ln_gamma_mu(&self) -> f64 {
        self.ln_gamma_mu
    }
    /// `φ/α`
    pub fn b(&self) -> f64 {
        self.phi / self.alpha
    }
    /// Order `µ - φ/α` of the upper incomplete gamma in the density.
    pub fn c_order(&self) -> f64 {
        self.mu - self.phi / self.alpha
    }

    /// Smallest gain `x` found with `1 - F(x) < eps` (doubling search on `ζx^α`).
    pub fn gain_upper_cutoff(&self, eps: f64) -> f64 {
        let mut z = self.mu + 1.0;
        while z < UNDERFLOW_ARGUMENT {
            match regularized_upper(self.mu, z) {
                Ok(q) if q < eps => break,
                _ => z *= 1.25,
            }
        }
        (z / self.zeta).powf(1.0 / self.alpha)
    }

    /// Largest gain `x` (decade search) with `F(x) < eps`.
    pub fn gain_lower_cutoff(&self, eps: f64) -> f64 {
        let mut x = (self.mu / self.zeta).powf(1.0 / self.alpha);
        for _ in 0..600 {
            if cdf_gain(x, self) < eps {
                return x;
            }
            x *= 0.1;
        }
        x
    }
}

/// Transceiver hardware impairment levels; `k² = k_t² + k_r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareParams {
    pub k_t: f64,
    pub k_r: f64,
    pub k_sq: f64,
}

impl HardwareParams {
    pub fn new(k_t: f64, k_r: f64) -> Result<Self> {
        for (name, v) in [("k_t", k_t), ("k_r", k_r)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(Self {
            k_t,
            k_r,
            k_sq: k_t * k_t + k_r * k_r,
        })
    }

    /// Aggregate impairment `k`, attributed to the transmitter.
    pub fn aggregate(k: f64) -> Result<Self> {
        Self::new(k, 0.0)
    }

    pub fn ideal() -> Self {
        Self {
            k_t: 0.0,
            k_r: 0.0,
            k_sq: 0.0,
        }
    }

    pub fn k(&self) -> f64 {
        self.k_sq.sqrt()
    }

    pub fn is_ideal(&self) -> bool {
        self.k_sq == 0.0
    }

    /// SNR ceiling `1/k²`, infinite without impairment.
    pub fn ceiling(&self) -> f64 {
        if self.k_sq == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.k_sq
        }
    }
}

/// Deterministic link budget in linear SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Carrier frequency, Hz.
    pub f_c: f64,
    /// Transmit antenna gain, linear.
    pub g_t: f64,
    /// Receive antenna gain, linear.
    pub g_r: f64,
    /// Link distance, m.
    pub l: f64,
    /// Molecular absorption coefficient, 1/m.
    pub kappa: f64,
    /// Transmit power, W.
    pub p_tx: f64,
    /// Noise variance, W.
    pub noise_var: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        positive("f_c", self.f_c)?;
        positive("g_t", self.g_t)?;
        positive("g_r", self.g_r)?;
        positive("l", self.l)?;
        positive("p_tx", self.p_tx)?;
        positive("noise_var", self.noise_var)?;
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        Ok(())
    }
}

/// Path gain `h_l = c √(G_t G_r) / (4π f_c l) · exp(-κl/2)`.
pub fn path_gain(link: &LinkBudget) -> Result<f64> {
    link.validate()?;
    Ok(SPEED_OF_LIGHT * (link.g_t * link.g_r).sqrt()
        / (4.0 * std::f64::consts::PI * link.f_c * link.l)
        * (-0.5 * link.kappa * link.l).exp())
}

/// Reference SNR `γ0 = P h_l² / σ_w²`.
pub fn reference_snr(link: &LinkBudget) -> Result<f64> {
    let h = path_gain(link)?;
    Ok(link.p_tx * h * h / link.noise_var)
}

/// Impaired SNR for a gain realisation `h`.
pub fn snr_of_gain(h: f64, gamma0: f64, hw: &HardwareParams) -> f64 {
    let p = gamma0 * h * h;
    let g = if p.is_infinite() { hw.ceiling() } else { p / (hw.k_sq * p + 1.0) };
    // Rounding can land on the ceiling itself for very large gains.
    if hw.k_sq > 0.0 && g >= hw.ceiling() {
        hw.ceiling().next_down()
    } else {
        g
    }
}

/// Below this `z` the scaled incomplete gamma of negative or zero order is
/// replaced by its limit.
const SMALL_ARGUMENT: f64 = 1e-280;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln S(C, z)` with `S = e^z z^{-C} Γ(C, z)`, taking `ln z` so that tiny or
/// underflowed `z` stay finite.
fn ln_scaled_upper(c: f64, ln_z: f64) -> f64 {
    let z = ln_z.exp();
    if c > 0.0 && z < 1.0 {
        // Γ(C, z) ≤ Γ(C), so only the z^{-C} factor needs log space.
        return match (ln_gamma_real(c), regularized_upper(c, z)) {
            (Ok(lg), Ok(q)) if q > 0.0 => lg + q.ln() - c * ln_z + z,
            _ => f64::NAN,
        };
    }
    if z < SMALL_ARGUMENT {
        return if c < 0.0 { -(-c).ln() } else { (-ln_z - EULER_GAMMA).ln() };
    }
    match upper_gamma_scaled(c, z) {
        Ok(s) if s > 0.0 => s.ln(),
        _ => f64::NEG_INFINITY,
    }
}

/// `(ζx^α)^{φ/α} Γ(µ - φ/α, ζx^α) / Γ(µ)`, evaluated as `z^µ e^{-z} S(C, z) / Γ(µ)`.
fn pointing_term(ln_z: f64, ch: &ChannelParams) -> f64 {
    let z = ln_z.exp();
    if z > UNDERFLOW_ARGUMENT {
        return 0.0;
    }
    (ch.mu * ln_z - z - ch.ln_gamma_mu + ln_scaled_upper(ch.c_order(), ln_z)).exp()
}

/// Density of the composite gain.
pub fn pdf_gain(x: f64, ch: &ChannelParams) -> f64 {
    if !(x > 0.0) || x.is_infinite() {
        return 0.0;
    }
    ln_pdf_gain(x.ln(), ch).exp()
}

/// `ln f(x)` from `ln x`: `ln(φ/Γ(µ)) + µ ln ζ + (αµ - 1) ln x - z + ln S(C, z)` with `z = ζ x^α`.
fn ln_pdf_gain(ln_x: f64, ch: &ChannelParams) -> f64 {
    let ln_z = ch.zeta.ln() + ch.alpha * ln_x;
    let z = ln_z.exp();
    if z > UNDERFLOW_ARGUMENT {
        return f64::NEG_INFINITY;
    }
    ch.phi.ln() - ch.ln_gamma_mu + ch.mu * ch.zeta.ln() + (ch.alpha * ch.mu - 1.0) * ln_x - z
        + ln_scaled_upper(ch.c_order(), ln_z)
}

/// Distribution function of the composite gain.
pub fn cdf_gain(x: f64, ch: &ChannelParams) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let ln_z = ch.zeta.ln() + ch.alpha * x.ln();
    let z = ln_z.exp();
    if z > UNDERFLOW_ARGUMENT {
        return 1.0;
    }
    let p = regularized_lower(ch.mu, z).unwrap_or(1.0);
    (p + pointing_term(ln_z, ch)).clamp(0.0, 1.0)
}

/// Gain `x` that maps to SNR `g`, i.e. `x² = g / (γ0 (1 - g k²))`.
fn gain_of_snr(g: f64, gamma0: f64, hw: &HardwareParams) -> f64 {
    (g / (gamma0 * (1.0 - g * hw.k_sq))).sqrt()
}

/// Density of the impaired SNR on `(0, 1/k²)`, zero elsewhere.
pub fn pdf_snr(g: f64, gamma0: f64, ch: &ChannelParams, hw: &HardwareParams) -> f64 {
    if !(g > 0.0) || g >= hw.ceiling() {
        return 0.0;
    }
    let u = 1.0 - g * hw.k_sq;
    // In logs so that subnormal g keeps a finite ln x.
    let (ln_g0, ln_u) = (gamma0.ln(), u.ln());
    let ln_x = 0.5 * (g.ln() - ln_g0 - ln_u);
    // dx/dg = 1 / (2 x γ0 u²)
    (ln_pdf_gain(ln_x, ch) - (std::f64::consts::LN_2 + ln_x + ln_g0 + 2.0 * ln_u)).exp()
}

/// Distribution function of the impaired SNR.
pub fn cdf_snr(g: f64, gamma0: f64, ch: &ChannelParams, hw: &HardwareParams) -> f64 {
    if !(g > 0.0) {
        return 0.0;
    }
    if g >= hw.ceiling() {
        return 1.0;
    }
    cdf_gain(gain_of_snr(g, gamma0, hw), ch)
}
