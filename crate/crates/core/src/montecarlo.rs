//! Monte Carlo sampling of the composite channel and empirical metrics.
//!
//! Samples are produced in fixed-size batches. Batch `i` draws from a ChaCha
//! stream keyed by `(seed, i)`, and per-batch statistics are merged in batch
//! order, so results are bit-identical for any number of worker threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Open01};
use rayon::prelude::*;

use crate::channel::{snr_of_gain, ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::metrics::ModulationParams;
use crate::numerics::regularized_upper;

pub const MIN_SAMPLES: usize = 10_000;
pub const DEFAULT_BATCH: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: usize,
    pub seed: u64,
    pub batch: usize,
}

impl SimConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            samples,
            seed,
            batch: DEFAULT_BATCH,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_batch(self, batch: usize) -> Result<Self> {
        let cfg = Self { batch, ..self };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        if self.batch == 0 {
            return Err(Error::InvalidParameter("batch size must be positive".into()));
        }
        Ok(())
    }

    fn batches(&self) -> impl IndexedParallelIterator<Item = (u64, usize)> + '_ {
        let count = self.samples.div_ceil(self.batch);
        (0..count).into_par_iter().map(move |i| {
            let len = self.batch.min(self.samples - i * self.batch);
            (i as u64, len)
        })
    }

    fn rng(&self, batch: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(batch);
        rng
    }
}

/// Sample mean with its standard error `s / √n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

/// Running mean and sum of squared deviations (Welford), mergeable.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }

    fn estimate(&self) -> EmpiricalEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        EmpiricalEstimate {
            mean: self.mean,
            std_error: (var.max(0.0) / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

/// Draws from the α-µ envelope and the pointing loss.
struct Sampler {
    gamma: Gamma<f64>,
    alpha_inv: f64,
    mu: f64,
    omega: f64,
    s_cap: f64,
    phi_inv: f64,
}

impl Sampler {
    fn new(ch: &ChannelParams) -> Result<Self> {
        let gamma = Gamma::new(ch.mu(), 1.0)
            .map_err(|e| Error::InvalidParameter(format!("gamma variate with shape {}: {e}", ch.mu())))?;
        Ok(Self {
            gamma,
            alpha_inv: 1.0 / ch.alpha(),
            mu: ch.mu(),
            omega: ch.omega(),
            s_cap: ch.s_cap(),
            phi_inv: 1.0 / ch.phi(),
        })
    }

    /// `R = Ω (G/µ)^{1/α}`, `G ~ Gamma(µ, 1)`.
    fn fading<R: Rng>(&self, rng: &mut R) -> f64 {
        self.omega * (self.gamma.sample(rng) / self.mu).powf(self.alpha_inv)
    }

    /// `h_p = S U^{1/φ}`, `U ~ U(0, 1)`.
    fn pointing<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = Open01.sample(rng);
        self.s_cap * u.powf(self.phi_inv)
    }

    fn gain<R: Rng>(&self, rng: &mut R) -> f64 {
        let r = self.fading(rng);
        r * self.pointing(rng)
    }
}

fn collect<F>(cfg: &SimConfig, ch: &ChannelParams, n: usize, draw: F) -> Result<Vec<f64>>
where
    F: Fn(&Sampler, &mut ChaCha12Rng) -> f64 + Sync,
{
    let cfg = SimConfig { samples: n, ..*cfg };
    if cfg.batch == 0 {
        return Err(Error::InvalidParameter("batch size must be positive".into()));
    }
    let sampler = Sampler::new(ch)?;
    let parts: Vec<Vec<f64>> = cfg
        .batches()
        .map(|(i, len)| {
            let mut rng = cfg.rng(i);
            (0..len).map(|_| draw(&sampler, &mut rng)).collect()
        })
        .collect();
    Ok(parts.concat())
}

fn stream_config(seed: u64) -> SimConfig {
    SimConfig {
        samples: 0,
        seed,
        batch: DEFAULT_BATCH,
    }
}

/// `n` α-µ envelope samples.
pub fn sample_fading(n: usize, ch: &ChannelParams, seed: u64) -> Result<Vec<f64>> {
    collect(&stream_config(seed), ch, n, |s, rng| s.fading(rng))
}

/// `n` pointing-loss samples on `(0, S]`.
pub fn sample_pointing(n: usize, ch: &ChannelParams, seed: u64) -> Result<Vec<f64>> {
    collect(&stream_config(seed), ch, n, |s, rng| s.pointing(rng))
}

/// `n` composite gains `h = R · h_p`.
pub fn sample_gain(n: usize, ch: &ChannelParams, seed: u64) -> Result<Vec<f64>> {
    collect(&stream_config(seed), ch, n, |s, rng| s.gain(rng))
}

/// `n` impaired SNRs; the gain stream depends only on `seed`, not on `hw`.
pub fn sample_snr(
    n: usize,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    collect(&stream_config(seed), ch, n, |s, rng| snr_of_gain(s.gain(rng), gamma0, hw))
}

/// Sample mean of `f(γ)` over `cfg.samples` impaired SNRs.
pub fn empirical_mean<F>(
    f: F,
    cfg: &SimConfig,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<EmpiricalEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    if !(gamma0.is_finite() && gamma0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma0 must be >= 0, got {gamma0}")));
    }
    let sampler = Sampler::new(ch)?;
    let parts: Vec<Moments> = cfg
        .batches()
        .map(|(i, len)| {
            let mut rng = cfg.rng(i);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(f(snr_of_gain(sampler.gain(&mut rng), gamma0, hw)));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    Ok(total.estimate())
}

/// Fraction of samples with `γ < γ_th`.
pub fn empirical_outage(
    gamma_th: f64,
    cfg: &SimConfig,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<EmpiricalEstimate> {
    empirical_mean(|g| if g < gamma_th { 1.0 } else { 0.0 }, cfg, ch, hw, gamma0)
}

/// Mean conditional BER `Γ(p, qγ) / (2Γ(p))`.
pub fn empirical_ber(
    modulation: &ModulationParams,
    cfg: &SimConfig,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<EmpiricalEstimate> {
    let ModulationParams { p, q } = *modulation;
    empirical_mean(
        |g| 0.5 * regularized_upper(p, q * g).unwrap_or(0.0),
        cfg,
        ch,
        hw,
        gamma0,
    )
}

/// Mean of `log2(1 + γ)`.
pub fn empirical_capacity(
    cfg: &SimConfig,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<EmpiricalEstimate> {
    empirical_mean(|g| g.ln_1p() / std::f64::consts::LN_2, cfg, ch, hw, gamma0)
}

/// Mean of `γ^order`.
pub fn empirical_moment(
    order: u32,
    cfg: &SimConfig,
    ch: &ChannelParams,
    hw: &HardwareParams,
    gamma0: f64,
) -> Result<EmpiricalEstimate> {
    empirical_mean(|g| g.powi(order as i32), cfg, ch, hw, gamma0)
}

/// One-sample Kolmogorov-Smirnov statistic; sorts `samples` in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// KS rejection threshold `1.63/√n` at the 1% level.
pub fn ks_critical(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..333].iter().for_each(|&x| a.push(x));
        xs[333..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn rayleigh_envelope_passes_ks() {
        let ch = ChannelParams::new(2.0, 1.0, 1.5, 1.0, 10.0).unwrap();
        let mut r = sample_fading(100_000, &ch, 3).unwrap();
        let d = ks_statistic(&mut r, |x| 1.0 - (-(x * x) / 2.25).exp());
        assert!(d < ks_critical(r.len()), "{d}");
    }

    #[test]
    fn pointing_support_and_ks() {
        let ch = ChannelParams::new(2.0, 1.0, 1.0, 0.8, 3.0).unwrap();
        let mut h = sample_pointing(100_000, &ch, 11).unwrap();
        assert!(h.iter().all(|&x| x > 0.0 && x <= 0.8));
        let d = ks_statistic(&mut h, |x| (x / 0.8).powf(3.0));
        assert!(d < ks_critical(h.len()), "{d}");
    }
}
