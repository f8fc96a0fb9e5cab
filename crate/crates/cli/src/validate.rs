//! Cross-checks the three computation paths at the configured point, and the
//! shipped Mellin-Barnes fixtures against the library builders.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use thz_core::foxh::{equivalent, Fixture};
use thz_core::metrics::Method;
use thz_core::montecarlo::SimConfig;

use crate::config::{Metric, Point};
use crate::eval::{evaluate, Cell, Status};
use crate::sweep::NA;
use crate::CliError;

/// Relative agreement required between the Mellin-Barnes and quadrature paths.
pub const FOXH_REL_TOL: f64 = 0.01;
/// Monte Carlo must sit within this many standard errors of quadrature.
pub const MC_SIGMAS: f64 = 3.0;
/// Coefficient tolerance when comparing a fixture with its regenerated specs.
pub const FIXTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "not applicable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub reference: Option<f64>,
    pub candidate: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    pub note: String,
}

impl Check {
    fn fail(name: String, note: String) -> Self {
        Self {
            name,
            reference: None,
            candidate: None,
            tolerance: None,
            verdict: Verdict::Fail,
            note,
        }
    }
}

const METRICS: [(&str, Metric); 4] = [
    ("outage", Metric::Outage),
    ("ber", Metric::Ber),
    ("capacity", Metric::Capacity),
    ("moment", Metric::Moment),
];

fn compare(name: String, reference: &Cell, candidate: &Cell, tol: impl Fn(f64, &Cell) -> f64) -> Check {
    if candidate.status == Status::NotApplicable {
        return Check {
            name,
            reference: reference.value,
            candidate: None,
            tolerance: None,
            verdict: Verdict::NotApplicable,
            note: candidate.diag.clone(),
        };
    }
    let (Some(r), Some(c)) = (reference.value, candidate.value) else {
        let note = [&reference.diag, &candidate.diag]
            .iter()
            .filter(|d| !d.is_empty())
            .map(|d| d.as_str())
            .collect::<Vec<_>>()
            .join("; ");
        return Check::fail(name, note);
    };
    let t = tol(r, candidate);
    Check {
        name,
        reference: Some(r),
        candidate: Some(c),
        tolerance: Some(t),
        verdict: if (c - r).abs() <= t { Verdict::Pass } else { Verdict::Fail },
        note: String::new(),
    }
}

/// Mellin-Barnes vs quadrature (1% relative) and Monte Carlo vs quadrature (3σ).
pub fn cross_checks(point: &Point, sim: &SimConfig) -> Vec<Check> {
    let cells: Vec<[Cell; 3]> = METRICS
        .par_iter()
        .map(|&(_, metric)| {
            [Method::Quadrature, Method::FoxH, Method::MonteCarlo].map(|m| evaluate(metric, m, point, sim))
        })
        .collect();
    let mut checks = Vec::new();
    for ((name, metric), [quad, foxh, mc]) in METRICS.iter().zip(&cells) {
        if *metric != Metric::Outage {
            checks.push(compare(format!("{name}: foxh vs quadrature"), quad, foxh, |r, _| {
                FOXH_REL_TOL * r.abs()
            }));
        }
        checks.push(compare(format!("{name}: montecarlo vs quadrature"), quad, mc, |r, c| {
            (MC_SIGMAS * c.stderr.unwrap_or(0.0)).max(1e-12 * r.abs())
        }));
    }
    checks
}

/// Regenerates every `*.fxh` file in `dir` from its `case` line and compares.
pub fn fixture_checks(dir: &Path) -> Result<Vec<Check>, CliError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("fxh"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Usage(format!("{}: no .fxh fixtures found", dir.display())));
    }
    Ok(paths.iter().map(|p| fixture_check(p)).collect())
}

fn fixture_check(path: &Path) -> Check {
    let file = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
    let name = format!("fixture {file}");
    let fixture = match std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| Fixture::parse(&t).map_err(|e| e.to_string()))
    {
        Ok(f) => f,
        Err(e) => return Check::fail(name, format!("{file}: {e}")),
    };
    let Some(case) = &fixture.case else {
        return Check::fail(name, format!("{file}: no `case` line"));
    };
    let rebuilt = match case.build() {
        Ok(s) => s,
        Err(e) => return Check::fail(name, format!("{file}: {e}")),
    };
    let mismatch = rebuilt.len() != fixture.specs.len()
        || rebuilt.iter().zip(&fixture.specs).any(|(a, b)| !equivalent(a, b, FIXTURE_TOL));
    Check {
        name,
        reference: None,
        candidate: None,
        tolerance: Some(FIXTURE_TOL),
        verdict: if mismatch { Verdict::Fail } else { Verdict::Pass },
        note: if mismatch {
            format!("{file} differs from the specs rebuilt from its case line")
        } else {
            String::new()
        },
    }
}

pub fn write_report<W: Write>(out: W, checks: &[Check]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let fmt = |v: Option<f64>| v.map_or_else(|| NA.to_string(), |x| format!("{x}"));
    w.write_record(["check", "reference", "candidate", "tolerance", "status", "diag"])
        .map_err(io)?;
    for c in checks {
        w.write_record([
            c.name.as_str(),
            &fmt(c.reference),
            &fmt(c.candidate),
            &fmt(c.tolerance),
            c.verdict.as_str(),
            &c.note,
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
