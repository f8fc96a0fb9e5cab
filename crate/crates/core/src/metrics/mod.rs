//! End-user performance metrics of the impaired link.

mod closed;
mod derived;
mod integrals;
mod outage;

use std::fmt;

use crate::channel::HardwareParams;
use crate::error::{Error, Result};

pub use closed::{ber_asymptotic, ber_asymptotic_terms, ber_foxh, capacity_foxh, moment_foxh};
pub use derived::{derived_stats, DerivedStats};
pub use integrals::{ber_quadrature, capacity_quadrature, moment_quadrature};
pub use outage::{
    diversity_order, outage_asymptotic, outage_asymptotic_printed, outage_exact,
};

/// The `{p, q}` family in `P_e(γ) = Γ(p, qγ) / (2Γ(p))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationParams {
    pub p: f64,
    pub q: f64,
}

impl ModulationParams {
    pub const BPSK: Self = Self { p: 0.5, q: 1.0 };

    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0 && q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "modulation needs p > 0 and q > 0, got p={p} q={q}"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bpsk" => Some(Self::BPSK),
            "qpsk" => Some(Self { p: 0.5, q: 0.5 }),
            "dbpsk" => Some(Self { p: 1.0, q: 1.0 }),
            "bfsk" => Some(Self { p: 0.5, q: 0.5 }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    FoxH,
    Quadrature,
    MonteCarlo,
    Asymptotic,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::FoxH => "foxh",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "montecarlo",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "foxh" => Ok(Method::FoxH),
            "quadrature" | "quad" => Ok(Method::Quadrature),
            "montecarlo" | "mc" => Ok(Method::MonteCarlo),
            "asymptotic" | "asym" => Ok(Method::Asymptotic),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub diagnostics: String,
}

impl MetricResult {
    pub fn new(value: f64, method: Method, error_estimate: f64, diagnostics: impl Into<String>) -> Self {
        Self {
            value,
            method,
            error_estimate: error_estimate.abs(),
            diagnostics: diagnostics.into(),
        }
    }
}

/// Range every value of a metric must fall in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bounds {
    Probability,
    /// `(0, 1/2]`.
    BitErrorRate,
    /// `[0, log2(1 + 1/k²)]`.
    Capacity,
    /// `(0, (1/k²)^n]`; `n = 0` is the normalization.
    Moment(u32),
}

impl Bounds {
    pub fn range(&self, hw: &HardwareParams) -> (f64, f64) {
        match *self {
            Bounds::Probability => (0.0, 1.0),
            Bounds::BitErrorRate => (0.0, 0.5),
            Bounds::Capacity => (0.0, hw.ceiling().ln_1p() / std::f64::consts::LN_2),
            Bounds::Moment(n) => (0.0, hw.ceiling().powi(n as i32)),
        }
    }

    /// Errors with [`Error::Domain`] when `value` lies outside the range, allowing
    /// `slack` (absolute) for the numerical error of the method.
    pub fn enforce(&self, value: f64, slack: f64, hw: &HardwareParams) -> Result<()> {
        let (lo, hi) = self.range(hw);
        let low_ok = if self.strict_low() { value > lo - slack } else { value >= lo - slack };
        if value.is_finite() && low_ok && value <= hi + slack {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{self:?} value {value:e} outside [{lo:e}, {hi:e}] (slack {slack:e})"
            )))
        }
    }

    /// Clamps a value that lies within `slack` of the range back into it.
    pub(crate) fn settle(&self, value: f64, slack: f64, hw: &HardwareParams) -> Result<f64> {
        self.enforce(value, slack, hw)?;
        let (lo, hi) = self.range(hw);
        let lo = if self.strict_low() { lo.max(f64::MIN_POSITIVE) } else { lo };
        Ok(value.clamp(lo, hi))
    }

    fn strict_low(&self) -> bool {
        matches!(self, Bounds::BitErrorRate | Bounds::Moment(_))
    }
}
