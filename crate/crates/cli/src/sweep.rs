//! Sweep and single-point runners; rows are computed in parallel and written in order.

use std::io::Write;

use rayon::prelude::*;
use thz_core::metrics::Method;
use thz_core::montecarlo::SimConfig;

use crate::config::{Metric, Point, Sweep};
use crate::eval::{evaluate, Cell};
use crate::CliError;

pub const NA: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub method: Method,
    pub cell: Cell,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), |x| format!("{x}"))
}

pub fn write_csv<W: Write>(out: W, first: &str, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record([first, "method", "value", "stderr", "diag"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.label.as_str(),
            r.method.as_str(),
            &fmt_opt(r.cell.value),
            &fmt_opt(r.cell.stderr),
            &r.cell.diag,
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// One row per (axis value × method), in axis order.
pub fn run_sweep(point: &Point, sweep: &Sweep, sim: &SimConfig) -> Vec<Row> {
    let jobs: Vec<(f64, Method)> = sweep
        .values
        .iter()
        .flat_map(|&v| sweep.methods.iter().map(move |&m| (v, m)))
        .collect();
    jobs.par_iter()
        .map(|&(v, method)| {
            let cell = match point.at(sweep.axis, v) {
                Ok(p) => evaluate(sweep.metric, method, &p, sim),
                Err(e) => Cell::failed(e),
            };
            Row {
                label: format!("{v}"),
                method,
                cell,
            }
        })
        .collect()
}

pub const POINT_METRICS: [(&str, Metric); 5] = [
    ("outage", Metric::Outage),
    ("ber", Metric::Ber),
    ("capacity", Metric::Capacity),
    ("moment", Metric::Moment),
    ("derived", Metric::Derived),
];

/// Every metric with every requested method at the configured point.
pub fn run_point(point: &Point, methods: &[Method], sim: &SimConfig) -> Vec<Row> {
    let jobs: Vec<(&str, Metric, Method)> = POINT_METRICS
        .iter()
        .flat_map(|&(name, metric)| methods.iter().map(move |&m| (name, metric, m)))
        .collect();
    jobs.par_iter()
        .map(|&(name, metric, method)| Row {
            label: name.to_string(),
            method,
            cell: evaluate(metric, method, point, sim),
        })
        .collect()
}
