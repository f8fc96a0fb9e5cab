//! JSON run configuration. Decibel and GHz inputs are converted to linear SI here;
//! nothing past this module sees logarithmic units.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use thz_core::channel::{reference_snr, ChannelParams, HardwareParams, LinkBudget};
use thz_core::metrics::{Method, ModulationParams};

use crate::CliError;

pub const DEFAULT_KAPPA: f64 = 0.0033;
/// Thermal noise over a 10 GHz bandwidth at 290 K.
pub const DEFAULT_NOISE_DBM: f64 = -74.0;
pub const DEFAULT_SAMPLES: usize = 1_000_000;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub channel: RawChannel,
    pub hardware: RawHardware,
    #[serde(default)]
    pub link: RawLink,
    #[serde(default)]
    pub simulation: RawSimulation,
    pub sweep: Option<RawSweep>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChannel {
    pub alpha: f64,
    pub mu: f64,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "one")]
    pub s: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHardware {
    pub k: Option<f64>,
    pub k_t: Option<f64>,
    pub k_r: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLink {
    #[serde(default = "default_fc")]
    pub f_c_ghz: f64,
    #[serde(default = "default_gain")]
    pub g_t_dbi: f64,
    #[serde(default = "default_gain")]
    pub g_r_dbi: f64,
    #[serde(default = "default_distance")]
    pub distance_m: f64,
    #[serde(default = "default_kappa")]
    pub kappa_per_m: f64,
    #[serde(default)]
    pub p_tx_dbm: f64,
    #[serde(default = "default_noise")]
    pub noise_dbm: f64,
    /// Overrides the link budget when present.
    pub gamma0_db: Option<f64>,
}

impl Default for RawLink {
    fn default() -> Self {
        Self {
            f_c_ghz: default_fc(),
            g_t_dbi: default_gain(),
            g_r_dbi: default_gain(),
            distance_m: default_distance(),
            kappa_per_m: default_kappa(),
            p_tx_dbm: 0.0,
            noise_dbm: default_noise(),
            gamma0_db: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSimulation {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "one_u64")]
    pub seed: u64,
    pub batch: Option<usize>,
}

impl Default for RawSimulation {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 1,
            batch: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RawModulation {
    Preset(String),
    Custom { p: f64, q: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub metric: Option<String>,
    pub axis: Option<String>,
    #[serde(default)]
    pub values: Vec<f64>,
    pub methods: Option<Vec<String>>,
    #[serde(default = "default_threshold")]
    pub gamma_th_db: f64,
    pub modulation: Option<RawModulation>,
    #[serde(default = "one_u32")]
    pub order: u32,
    pub quantity: Option<String>,
}

fn one() -> f64 {
    1.0
}
fn one_u64() -> u64 {
    1
}
fn one_u32() -> u32 {
    1
}
fn default_fc() -> f64 {
    275.0
}
fn default_gain() -> f64 {
    55.0
}
fn default_distance() -> f64 {
    50.0
}
fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}
fn default_noise() -> f64 {
    DEFAULT_NOISE_DBM
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_threshold() -> f64 {
    4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Outage,
    Ber,
    Capacity,
    Moment,
    Derived,
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "outage" => Metric::Outage,
            "ber" => Metric::Ber,
            "capacity" => Metric::Capacity,
            "moment" => Metric::Moment,
            "derived" => Metric::Derived,
            _ => return Err(format!("unknown metric `{s}` (outage, ber, capacity, moment, derived)")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Gamma0Db,
    PTxDbm,
    DistanceM,
    K,
}

impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "gamma0_db" => Axis::Gamma0Db,
            "p_tx_dbm" => Axis::PTxDbm,
            "distance_m" => Axis::DistanceM,
            "k" => Axis::K,
            _ => return Err(format!("unknown axis `{s}` (gamma0_db, p_tx_dbm, distance_m, k)")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    AvgSnr,
    SnrVariance,
    Aof,
    SnrLossRatio,
    CapacityLossRatio,
}

impl FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "avg_snr" => Quantity::AvgSnr,
            "snr_variance" => Quantity::SnrVariance,
            "aof" => Quantity::Aof,
            "snr_loss_ratio" => Quantity::SnrLossRatio,
            "capacity_loss_ratio" => Quantity::CapacityLossRatio,
            _ => {
                return Err(format!(
                    "unknown quantity `{s}` (avg_snr, snr_variance, aof, snr_loss_ratio, capacity_loss_ratio)"
                ))
            }
        })
    }
}

/// Fully resolved parameters for one evaluation point, linear SI units.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub channel: ChannelParams,
    pub hardware: HardwareParams,
    pub link: LinkBudget,
    /// Fixed reference SNR; `None` means "derive from `link`".
    pub gamma0_override: Option<f64>,
    pub gamma_th: f64,
    pub modulation: ModulationParams,
    pub order: u32,
    pub quantity: Quantity,
}

impl Point {
    pub fn gamma0(&self) -> Result<f64, String> {
        match self.gamma0_override {
            Some(g) => Ok(g),
            None => reference_snr(&self.link).map_err(|e| e.to_string()),
        }
    }

    /// Copy with the axis coordinate set to `v` (in the axis' own units).
    pub fn at(&self, axis: Axis, v: f64) -> Result<Self, String> {
        let mut p = *self;
        match axis {
            Axis::Gamma0Db => p.gamma0_override = Some(db_to_linear(v)),
            Axis::PTxDbm => p.link.p_tx = dbm_to_watts(v),
            Axis::DistanceM => p.link.l = v,
            Axis::K => p.hardware = HardwareParams::aggregate(v).map_err(|e| e.to_string())?,
        }
        Ok(p)
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub metric: Metric,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub methods: Vec<Method>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub point: Point,
    pub samples: usize,
    pub seed: u64,
    pub batch: Option<usize>,
    pub sweep: Option<RawSweep>,
}

pub fn parse_methods(list: &[String]) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for m in list {
        let m: Method = m.trim().parse().map_err(|e| format!("{e}"))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err("method list is empty".into());
    }
    Ok(out)
}

pub const ALL_METHODS: [Method; 4] = [Method::FoxH, Method::Quadrature, Method::MonteCarlo, Method::Asymptotic];

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        raw.resolve().map_err(CliError::Config)
    }

    /// The sweep section, validated.
    pub fn sweep(&self, methods_override: Option<&[String]>) -> Result<Sweep, CliError> {
        let raw = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::Config("`sweep` section is required for the sweep command".into()))?;
        let metric: Metric = raw
            .metric
            .as_deref()
            .ok_or_else(|| "sweep.metric is required".to_string())
            .and_then(|m| m.parse())
            .map_err(CliError::Config)?;
        let axis: Axis = raw
            .axis
            .as_deref()
            .ok_or_else(|| "sweep.axis is required".to_string())
            .and_then(|a| a.parse())
            .map_err(CliError::Config)?;
        if raw.values.is_empty() {
            return Err(CliError::Usage("sweep.values is empty".into()));
        }
        if raw.values.iter().any(|v| !v.is_finite()) || raw.values.windows(2).any(|w| w[0] > w[1]) {
            return Err(CliError::Config("sweep.values must be finite and sorted ascending".into()));
        }
        let methods = match (methods_override, &raw.methods) {
            (Some(list), _) => parse_methods(list),
            (None, Some(list)) => parse_methods(list),
            (None, None) => Ok(ALL_METHODS.to_vec()),
        }
        .map_err(CliError::Usage)?;
        Ok(Sweep {
            metric,
            axis,
            values: raw.values.clone(),
            methods,
        })
    }
}

impl RawConfig {
    fn resolve(self) -> Result<Config, String> {
        let c = &self.channel;
        let channel = ChannelParams::new(c.alpha, c.mu, c.omega, c.s, c.phi).map_err(|e| format!("channel: {e}"))?;
        let h = &self.hardware;
        let hardware = match (h.k, h.k_t, h.k_r) {
            (Some(k), None, None) => HardwareParams::aggregate(k),
            (None, Some(t), Some(r)) => HardwareParams::new(t, r),
            _ => return Err("hardware: give either `k` or both `k_t` and `k_r`".into()),
        }
        .map_err(|e| format!("hardware: {e}"))?;
        let l = &self.link;
        let link = LinkBudget {
            f_c: l.f_c_ghz * 1e9,
            g_t: db_to_linear(l.g_t_dbi),
            g_r: db_to_linear(l.g_r_dbi),
            l: l.distance_m,
            kappa: l.kappa_per_m,
            p_tx: dbm_to_watts(l.p_tx_dbm),
            noise_var: dbm_to_watts(l.noise_dbm),
        };
        link.validate().map_err(|e| format!("link: {e}"))?;
        let sweep = self.sweep;
        let modulation = match sweep.as_ref().and_then(|s| s.modulation.clone()) {
            None => ModulationParams::BPSK,
            Some(RawModulation::Preset(name)) => ModulationParams::preset(&name)
                .ok_or_else(|| format!("sweep.modulation: unknown preset `{name}` (bpsk, qpsk, dbpsk, bfsk)"))?,
            Some(RawModulation::Custom { p, q }) => {
                ModulationParams::new(p, q).map_err(|e| format!("sweep.modulation: {e}"))?
            }
        };
        let quantity = match sweep.as_ref().and_then(|s| s.quantity.as_deref()) {
            None => Quantity::CapacityLossRatio,
            Some(q) => q.parse().map_err(|e| format!("sweep.quantity: {e}"))?,
        };
        let gamma_th = db_to_linear(sweep.as_ref().map_or(default_threshold(), |s| s.gamma_th_db));
        let order = sweep.as_ref().map_or(1, |s| s.order);
        if order == 0 {
            return Err("sweep.order must be >= 1".into());
        }
        let sim = &self.simulation;
        Ok(Config {
            point: Point {
                channel,
                hardware,
                link,
                gamma0_override: l.gamma0_db.map(db_to_linear),
                gamma_th,
                modulation,
                order,
                quantity,
            },
            samples: sim.samples,
            seed: sim.seed,
            batch: sim.batch,
            sweep,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"channel": {"alpha": 2, "mu": 1, "phi": 14.41}, "hardware": {"k": 0.1}}"#;

    #[test]
    fn defaults_fill_the_link_budget() {
        let cfg = Config::parse(MINIMAL).unwrap();
        assert_eq!(cfg.point.link.f_c, 275e9);
        assert!((cfg.point.link.noise_var - 10f64.powf(-10.4)).abs() < 1e-20);
        assert_eq!(cfg.point.link.kappa, DEFAULT_KAPPA);
        assert_eq!(cfg.samples, DEFAULT_SAMPLES);
        assert!(cfg.point.gamma0().unwrap() > 0.0);
    }

    #[test]
    fn json_errors_carry_line_and_column() {
        let text = "{\n  \"channel\": {\"alpha\": 2,, }\n}";
        let err = Config::parse(text).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let unknown = MINIMAL.replace("\"k\": 0.1", "\"kk\": 0.1");
        let err = Config::parse(&unknown).unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn axis_values_are_converted() {
        let cfg = Config::parse(MINIMAL).unwrap();
        let p = cfg.point.at(Axis::Gamma0Db, 30.0).unwrap();
        assert!((p.gamma0().unwrap() - 1e3).abs() < 1e-9);
        let p = cfg.point.at(Axis::PTxDbm, 10.0).unwrap();
        assert!((p.link.p_tx - 1e-2).abs() < 1e-15);
        let p = cfg.point.at(Axis::K, 0.6).unwrap();
        assert!((p.hardware.k() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn hardware_needs_one_form() {
        let both = MINIMAL.replace("\"k\": 0.1", "\"k\": 0.1, \"k_t\": 0.1");
        assert!(Config::parse(&both).is_err());
        let split = MINIMAL.replace("\"k\": 0.1", "\"k_t\": 0.3, \"k_r\": 0.4");
        let cfg = Config::parse(&split).unwrap();
        assert!((cfg.point.hardware.k() - 0.5).abs() < 1e-12);
    }
}
