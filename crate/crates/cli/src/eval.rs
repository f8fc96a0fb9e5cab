//! One (point, metric, method) evaluation, mapped onto the library calls.

use thz_core::metrics::{
    ber_asymptotic, ber_foxh, ber_quadrature, capacity_foxh, capacity_quadrature, derived_stats,
    moment_foxh, moment_quadrature, outage_asymptotic, outage_exact, Bounds, Method, MetricResult,
};
use thz_core::montecarlo::{
    empirical_ber, empirical_capacity, empirical_moment, empirical_outage, EmpiricalEstimate, SimConfig,
};

use crate::config::{Metric, Point, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotApplicable,
    /// Asymptotic expression evaluated outside the metric's range (low SNR).
    OutOfRegime,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub diag: String,
    pub status: Status,
}

impl Cell {
    fn ok(value: f64, stderr: f64, diag: impl Into<String>) -> Self {
        Self {
            value: Some(value),
            stderr: Some(stderr),
            diag: diag.into(),
            status: Status::Ok,
        }
    }

    fn na(status: Status, diag: impl Into<String>) -> Self {
        Self {
            value: None,
            stderr: None,
            diag: diag.into(),
            status,
        }
    }

    pub fn not_applicable() -> Self {
        Self::na(Status::NotApplicable, "not applicable")
    }

    pub fn failed(diag: impl Into<String>) -> Self {
        Self::na(Status::Failed, diag)
    }

    pub fn is_failure(&self) -> bool {
        self.status == Status::Failed
    }
}

pub fn applicable(metric: Metric, method: Method, point: &Point) -> bool {
    match (metric, method) {
        (Metric::Derived, m) => m == Method::Quadrature,
        (Metric::Outage, Method::FoxH) => false,
        (Metric::Capacity | Metric::Moment, Method::Asymptotic) => false,
        (_, Method::FoxH) | (Metric::Ber, Method::Asymptotic) => !point.hardware.is_ideal(),
        _ => true,
    }
}

fn bounds(metric: Metric, point: &Point) -> Option<Bounds> {
    match metric {
        Metric::Outage => Some(Bounds::Probability),
        Metric::Ber => Some(Bounds::BitErrorRate),
        Metric::Capacity => Some(Bounds::Capacity),
        Metric::Moment => Some(Bounds::Moment(point.order)),
        Metric::Derived => None,
    }
}

fn from_result(r: thz_core::Result<MetricResult>) -> Result<(f64, f64, String), String> {
    r.map(|m| (m.value, m.error_estimate, m.diagnostics)).map_err(|e| e.to_string())
}

fn from_estimate(r: thz_core::Result<EmpiricalEstimate>) -> Result<(f64, f64, String), String> {
    r.map(|e| (e.mean, e.std_error, format!("n={}", e.n))).map_err(|e| e.to_string())
}

fn derived(point: &Point, gamma0: f64) -> Result<(f64, f64, String), String> {
    let d = derived_stats(&point.channel, &point.hardware, gamma0).map_err(|e| e.to_string())?;
    let v = match point.quantity {
        Quantity::AvgSnr => d.avg_snr,
        Quantity::SnrVariance => d.snr_variance,
        Quantity::Aof => d.aof,
        Quantity::SnrLossRatio => d.snr_loss_ratio,
        Quantity::CapacityLossRatio => d.capacity_loss_ratio,
    };
    Ok((v, 0.0, String::new()))
}

/// Evaluates one cell; bounds are checked here, before the value is emitted.
pub fn evaluate(metric: Metric, method: Method, point: &Point, sim: &SimConfig) -> Cell {
    if !applicable(metric, method, point) {
        return Cell::not_applicable();
    }
    let gamma0 = match point.gamma0() {
        Ok(g) => g,
        Err(e) => return Cell::failed(e),
    };
    let (ch, hw, m) = (&point.channel, &point.hardware, &point.modulation);
    let out = match (metric, method) {
        (Metric::Outage, Method::Quadrature) => from_result(outage_exact(point.gamma_th, ch, hw, gamma0)),
        (Metric::Outage, Method::MonteCarlo) => from_estimate(empirical_outage(point.gamma_th, sim, ch, hw, gamma0)),
        (Metric::Outage, Method::Asymptotic) => from_result(outage_asymptotic(point.gamma_th, ch, hw, gamma0)),
        (Metric::Ber, Method::FoxH) => from_result(ber_foxh(m, ch, hw, gamma0)),
        (Metric::Ber, Method::Quadrature) => from_result(ber_quadrature(m, ch, hw, gamma0)),
        (Metric::Ber, Method::MonteCarlo) => from_estimate(empirical_ber(m, sim, ch, hw, gamma0)),
        (Metric::Ber, Method::Asymptotic) => from_result(ber_asymptotic(m, ch, hw, gamma0)),
        (Metric::Capacity, Method::FoxH) => from_result(capacity_foxh(ch, hw, gamma0)),
        (Metric::Capacity, Method::Quadrature) => from_result(capacity_quadrature(ch, hw, gamma0)),
        (Metric::Capacity, Method::MonteCarlo) => from_estimate(empirical_capacity(sim, ch, hw, gamma0)),
        (Metric::Moment, Method::FoxH) => from_result(moment_foxh(point.order, ch, hw, gamma0)),
        (Metric::Moment, Method::Quadrature) => from_result(moment_quadrature(point.order, ch, hw, gamma0)),
        (Metric::Moment, Method::MonteCarlo) => from_estimate(empirical_moment(point.order, sim, ch, hw, gamma0)),
        (Metric::Derived, Method::Quadrature) => derived(point, gamma0),
        _ => return Cell::not_applicable(),
    };
    let (value, err, diag) = match out {
        Ok(v) => v,
        Err(e) => return Cell::failed(e),
    };
    let in_range = match bounds(metric, point) {
        Some(b) => b.enforce(value, err, hw).map_err(|e| e.to_string()),
        None if value.is_finite() => Ok(()),
        None => Err(format!("non-finite value {value}")),
    };
    match in_range {
        Ok(()) => Cell::ok(value, err, diag),
        Err(e) if method == Method::Asymptotic => {
            Cell::na(Status::OutOfRegime, format!("asymptotic outside metric range: {e}"))
        }
        Err(e) => Cell::failed(e),
    }
}
