use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thzlink"))
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn sweep_config(metric_block: &str, k: f64, distance: f64) -> String {
    format!(
        r#"{{
  "channel": {{ "alpha": 2.0, "mu": 1.0, "phi": 14.41 }},
  "hardware": {{ "k": {k} }},
  "link": {{ "distance_m": {distance} }},
  "simulation": {{ "samples": 50000, "seed": 11, "batch": 8192 }},
  "sweep": {metric_block}
}}"#
    )
}

/// Parses `axis,method,value,...` rows of one method into (axis, value) pairs.
fn column(csv: &str, method: &str) -> Vec<(f64, f64)> {
    csv.lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.splitn(5, ',').collect();
            (f[1] == method).then(|| (f[0].parse().unwrap(), f[2].parse().unwrap()))
        })
        .collect()
}

#[test]
fn sweep_is_byte_identical_across_runs_and_worker_counts() {
    let dir = TempDir::new().unwrap();
    let block = r#"{ "metric": "ber", "axis": "gamma0_db", "values": [10, 20, 30],
                    "methods": ["foxh", "quadrature", "montecarlo", "asymptotic"] }"#;
    let cfg = write(dir.path(), "c.json", &sweep_config(block, 0.3, 50.0));
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "8", "8"].iter().enumerate() {
        let out = dir.path().join(format!("o{i}.csv"));
        let o = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", workers]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(text.starts_with("axis,method,value,stderr,diag\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 4);
}

#[test]
fn seed_flag_changes_only_monte_carlo_rows() {
    let dir = TempDir::new().unwrap();
    let block = r#"{ "metric": "capacity", "axis": "k", "values": [0.2], "methods": ["quadrature", "montecarlo"] }"#;
    let cfg = write(dir.path(), "c.json", &sweep_config(block, 0.3, 50.0));
    let a = run(&["sweep", "--config", &cfg]);
    let b = run(&["sweep", "--config", &cfg, "--seed", "99"]);
    let (a, b) = (String::from_utf8(a.stdout).unwrap(), String::from_utf8(b.stdout).unwrap());
    assert_eq!(column(&a, "quadrature"), column(&b, "quadrature"));
    assert_ne!(column(&a, "montecarlo"), column(&b, "montecarlo"));
}

#[test]
fn outage_sweep_slope_matches_the_diversity_order() {
    let dir = TempDir::new().unwrap();
    let block = r#"{ "metric": "outage", "axis": "gamma0_db", "values": [30, 40, 50, 60, 70, 80, 90],
                    "methods": ["quadrature"], "gamma_th_db": 4.0 }"#;
    let mut slopes = Vec::new();
    for k in [0.1, 0.6] {
        let cfg = write(dir.path(), "c.json", &sweep_config(block, k, 50.0));
        let o = run(&["sweep", "--config", &cfg]);
        assert!(o.status.success());
        let col = column(&String::from_utf8(o.stdout).unwrap(), "quadrature");
        assert!(col.windows(2).all(|w| w[1].1 < w[0].1), "not decreasing: {col:?}");
        let (x0, y0) = col[col.len() - 3];
        let (x1, y1) = col[col.len() - 1];
        slopes.push((y1.log10() - y0.log10()) / ((x1 - x0) / 10.0));
    }
    // α=2, µ=1: diversity order min(αµ/2, φ/2) = 1.
    for s in &slopes {
        assert!((s + 1.0).abs() < 0.05, "{slopes:?}");
    }
    assert!((slopes[0] / slopes[1] - 1.0).abs() < 0.02);
}

#[test]
fn capacity_loss_grows_with_k_at_both_distances() {
    let dir = TempDir::new().unwrap();
    let block = r#"{ "metric": "derived", "quantity": "capacity_loss_ratio", "axis": "k",
                    "values": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6], "methods": ["quadrature"] }"#;
    for distance in [20.0, 100.0] {
        let cfg = write(dir.path(), "c.json", &sweep_config(block, 0.1, distance));
        let o = run(&["sweep", "--config", &cfg]);
        assert!(o.status.success());
        let col = column(&String::from_utf8(o.stdout).unwrap(), "quadrature");
        assert!(col.windows(2).all(|w| w[1].1 > w[0].1), "l={distance}: {col:?}");
    }
}

#[test]
fn empty_values_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let block = r#"{ "metric": "outage", "axis": "gamma0_db", "values": [] }"#;
    let cfg = write(dir.path(), "c.json", &sweep_config(block, 0.1, 50.0));
    assert_eq!(run(&["sweep", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_two_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\n  \"channel\": {\n    \"alpha\": 2,\n    \"mu\": ,\n  }\n}\n");
    let o = run(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    let unsorted = r#"{ "metric": "outage", "axis": "k", "values": [0.3, 0.1] }"#;
    let cfg = write(dir.path(), "c.json", &sweep_config(unsorted, 0.1, 50.0));
    assert_eq!(run(&["sweep", "--config", &cfg]).status.code(), Some(2));
    let block = r#"{ "metric": "outage", "axis": "k", "values": [0.1] }"#;
    let cfg = write(dir.path(), "c.json", &sweep_config(block, 0.1, 50.0));
    assert_eq!(run(&["sweep", "--config", &cfg, "--methods", "magic"]).status.code(), Some(2));
    assert_eq!(run(&["sweep"]).status.code(), Some(2));
}

#[test]
fn failed_cells_emit_the_sentinel_and_exit_one() {
    let dir = TempDir::new().unwrap();
    // A negative distance fails the link budget for that row only.
    let block = r#"{ "metric": "capacity", "axis": "distance_m", "values": [-5, 50], "methods": ["quadrature"] }"#;
    let cfg = write(dir.path(), "c.json", &sweep_config(block, 0.3, 50.0));
    let o = run(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("-5,quadrature,NA,NA,"), "{first}");
    assert!(!text.lines().nth(2).unwrap().contains("NA"));
}

#[test]
fn point_prints_every_metric_and_method() {
    let o = run(&[
        "point",
        "--config",
        configs().join("default.json").to_str().unwrap(),
        "--samples",
        "20000",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 * 4);
    assert!(text.contains("outage,foxh,NA,NA,not applicable"));
}

#[test]
fn validate_passes_on_the_default_config() {
    let o = run(&[
        "validate",
        "--config",
        configs().join("default.json").to_str().unwrap(),
        "--fixtures",
        fixtures().to_str().unwrap(),
    ]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{text}\n{}", String::from_utf8_lossy(&o.stderr));
    assert!(!text.contains("FAIL"));
    assert_eq!(text.matches("fixture ").count(), 7);
}

#[test]
fn validate_names_a_corrupted_fixture() {
    let dir = TempDir::new().unwrap();
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let target = dir.path().join("moment2.fxh");
    let text = std::fs::read_to_string(&target).unwrap();
    let corrupted = text.replacen("\nprefactor ", "\nprefactor 2", 1);
    assert_ne!(text, corrupted);
    std::fs::write(&target, corrupted).unwrap();
    let o = run(&[
        "validate",
        "--config",
        configs().join("default.json").to_str().unwrap(),
        "--samples",
        "20000",
        "--fixtures",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("moment2.fxh"), "{stderr}");
    assert!(!stderr.contains("moment1.fxh"));
}

#[test]
fn validate_marks_foxh_not_applicable_without_impairment() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(configs().join("default.json")).unwrap();
    let cfg = write(dir.path(), "k0.json", &text.replace("\"k\": 0.3", "\"k\": 0.0"));
    let o = run(&["validate", "--config", &cfg, "--samples", "200000"]);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(o.status.success(), "{out}");
    let foxh: Vec<&str> = out.lines().filter(|l| l.contains("foxh vs")).collect();
    assert_eq!(foxh.len(), 3);
    assert!(foxh.iter().all(|l| l.contains("not applicable")));
}
