use std::path::PathBuf;

use proptest::prelude::*;
use thz_core::channel::{ChannelParams, HardwareParams};
use thz_core::foxh::*;
use thz_core::metrics::*;
use thz_core::numerics::{gamma, upper_incomplete_gamma as upper_incomplete};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn auto_value(spec: &FoxHSpec) -> MellinBarnesValue {
    let plan = ContourPlan::auto(spec, &PlanOptions::default()).unwrap();
    eval_mellin_barnes(spec, &plan).unwrap()
}

/// `e^{-z} = (2πi)^{-1} ∫ Γ(s) z^{-s} ds`.
fn exp_spec(z: f64) -> FoxHSpec {
    FoxHSpec {
        name: "exp".into(),
        prefactor: 1.0,
        arguments: vec![Argument::real(z, -1.0)],
        factors: vec![GammaFactor::num(0.0, &[1.0])],
    }
}

/// `Γ(a, z) = (2πi)^{-1} ∫ Γ(s) Γ(a + s) / Γ(1 + s) z^{-s} ds`.
fn upper_gamma_spec(a: f64, z: f64) -> FoxHSpec {
    FoxHSpec {
        name: "upper_gamma".into(),
        prefactor: 1.0,
        arguments: vec![Argument::real(z, -1.0)],
        factors: vec![
            GammaFactor::num(0.0, &[1.0]),
            GammaFactor::num(a, &[1.0]),
            GammaFactor::den(1.0, &[1.0]),
        ],
    }
}

#[test]
fn exponential_reduction_on_fifty_points() {
    for i in 1..=50 {
        let z = 0.4 * i as f64;
        let v = auto_value(&exp_spec(z));
        let truth = (-z).exp();
        assert!(rel(v.value, truth) < 1e-8, "z={z}: {} vs {truth}", v.value);
    }
}

#[test]
fn upper_incomplete_gamma_representation() {
    for z in [0.1, 0.5, 1.0, 2.5, 6.0, 12.0] {
        let v = auto_value(&upper_gamma_spec(2.0, z));
        let truth = (1.0 + z) * (-z).exp();
        assert!(rel(v.value, truth) < 1e-8, "z={z}: {} vs {truth}", v.value);
        assert!(rel(truth, upper_incomplete(2.0, z).unwrap()) < 1e-12);
    }
}

#[test]
fn separable_trivariate_toy() {
    // Γ(s1)Γ(s2)Γ(s3) z1^{-s1} z2^{-s2} z3^{-s3} factorises into three exponentials.
    let spec = FoxHSpec {
        name: "toy3".into(),
        prefactor: 1.0,
        arguments: vec![Argument::real(0.5, -1.0), Argument::real(1.0, -1.0), Argument::real(2.0, -1.0)],
        factors: vec![
            GammaFactor::num(0.0, &[1.0, 0.0, 0.0]),
            GammaFactor::num(0.0, &[0.0, 1.0, 0.0]),
            GammaFactor::num(0.0, &[0.0, 0.0, 1.0]),
        ],
    };
    // The point budget caps the 3-D grid, so accuracy rests on the error estimate.
    let v = auto_value(&spec);
    let truth = (-3.5f64).exp();
    assert!((v.value - truth).abs() <= v.error_estimate, "{v:?}");
    assert!(rel(v.value, truth) < 1e-6);
}

#[test]
fn beta_type_bivariate_coupling() {
    // ∫∫ Γ(s1)Γ(s2)Γ(1 - s1 - s2)... reduces to a known closed form:
    // (2πi)^{-2} ∫∫ Γ(s1) Γ(s2) Γ(c - s1 - s2) x^{-s1} y^{-s2} = Γ(c) (1 + x + y)^{-c}.
    let (c, x, y) = (1.5, 0.7, 2.0);
    let spec = FoxHSpec {
        name: "coupled".into(),
        prefactor: 1.0,
        arguments: vec![Argument::real(x, -1.0), Argument::real(y, -1.0)],
        factors: vec![
            GammaFactor::num(0.0, &[1.0, 0.0]),
            GammaFactor::num(0.0, &[0.0, 1.0]),
            GammaFactor::num(c, &[-1.0, -1.0]),
        ],
    };
    let v = auto_value(&spec);
    let truth = gamma(c).unwrap() * (1.0 + x + y).powf(-c);
    assert!(rel(v.value, truth) < 1e-8, "{} vs {truth}", v.value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn separable_bivariate_is_product(x in 0.05f64..8.0, y in 0.05f64..8.0, a in 0.3f64..3.0) {
        let spec = FoxHSpec {
            name: "sep".into(),
            prefactor: 1.0,
            arguments: vec![Argument::real(x, -1.0), Argument::real(y, -1.0)],
            factors: vec![
                GammaFactor::num(0.0, &[1.0, 0.0]),
                GammaFactor::num(0.0, &[0.0, 1.0]),
                GammaFactor::num(a, &[0.0, 1.0]),
                GammaFactor::den(1.0, &[0.0, 1.0]),
            ],
        };
        let v = auto_value(&spec);
        let truth = (-x).exp() * upper_incomplete(a, y).unwrap();
        prop_assert!(rel(v.value, truth) < 1e-7, "{} vs {}", v.value, truth);
    }

    #[test]
    fn scaling_the_argument_shifts_the_contour_variable(z in 0.1f64..10.0, lambda in 0.2f64..5.0) {
        // Γ(s) (λz)^{-s} equals e^{-λz}; checks the argument bookkeeping.
        let v = auto_value(&exp_spec(lambda * z));
        prop_assert!(rel(v.value, (-lambda * z).exp()) < 1e-8);
    }
}

#[test]
fn ber_spec_matches_quadrature() {
    let ch = ChannelParams::normalized(2.0, 1.0, 14.41).unwrap();
    let hw = HardwareParams::aggregate(0.3).unwrap();
    let q = ber_quadrature(&ModulationParams::BPSK, &ch, &hw, 1e3).unwrap();
    let f = ber_foxh(&ModulationParams::BPSK, &ch, &hw, 1e3).unwrap();
    assert!(rel(f.value, q.value) < 0.01, "{} vs {}", f.value, q.value);
}

#[test]
fn ber_includes_the_ceiling_term() {
    // At k = 0.6 nearly all of the BER is the Q(p, q/k²)/2 floor.
    let bpsk = ModulationParams::BPSK;
    for (a, m, phi, k, g0) in [(3.0, 2.0, 6.0, 0.6, 1e3), (2.0, 1.0, 14.41, 0.3, 1e3), (1.0, 3.0, 14.41, 0.3, 1e3)] {
        let ch = ChannelParams::normalized(a, m, phi).unwrap();
        let hw = HardwareParams::aggregate(k).unwrap();
        let q = ber_quadrature(&bpsk, &ch, &hw, g0).unwrap().value;
        let f = ber_foxh(&bpsk, &ch, &hw, g0).unwrap().value;
        assert!(rel(f, q) < 1e-9, "({a},{m},{phi},{k}) {f} vs {q}");
    }
}

#[test]
fn ber_settles_on_the_impairment_floor() {
    let bpsk = ModulationParams::BPSK;
    let ch = ChannelParams::normalized(2.0, 1.0, 14.41).unwrap();
    let hw = HardwareParams::aggregate(0.6).unwrap();
    let floor = 0.5 * thz_core::numerics::regularized_upper(bpsk.p, bpsk.q * hw.ceiling()).unwrap();
    let v = ber_quadrature(&bpsk, &ch, &hw, 1e12).unwrap().value;
    assert!(v >= floor && rel(v, floor) < 1e-4, "{v} vs {floor}");
}

#[test]
fn capacity_spec_matches_quadrature() {
    let ch = ChannelParams::normalized(2.0, 2.0, 14.41).unwrap();
    let hw = HardwareParams::aggregate(0.4).unwrap();
    let q = capacity_quadrature(&ch, &hw, 1e2).unwrap();
    let f = capacity_foxh(&ch, &hw, 1e2).unwrap();
    assert!(rel(f.value, q.value) < 0.01, "{} vs {}", f.value, q.value);
}

#[test]
fn moment_spec_matches_quadrature() {
    let ch = ChannelParams::normalized(1.0, 3.0, 14.41).unwrap();
    let hw = HardwareParams::aggregate(0.3).unwrap();
    for n in 1..=2 {
        let q = moment_quadrature(n, &ch, &hw, 1e3).unwrap();
        let f = moment_foxh(n, &ch, &hw, 1e3).unwrap();
        assert!(rel(f.value, q.value) < 0.01, "n={n}: {} vs {}", f.value, q.value);
    }
}

fn shipped_fixtures() -> Vec<(String, Fixture)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("fxh") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let fx = Fixture::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        out.push((name, fx));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn shipped_fixtures_match_the_builders() {
    let fixtures = shipped_fixtures();
    assert!(fixtures.len() >= 7);
    for (name, fx) in fixtures {
        let case = fx.case.as_ref().unwrap_or_else(|| panic!("{name} has no case line"));
        let rebuilt = case.build().unwrap();
        assert_eq!(rebuilt.len(), fx.specs.len(), "{name}");
        for (a, b) in rebuilt.iter().zip(&fx.specs) {
            assert!(equivalent(a, b, 1e-12), "{name}: spec {} differs from the builder", b.name);
        }
    }
}

#[test]
fn refinement_stays_within_the_error_estimate() {
    for (name, fx) in shipped_fixtures() {
        if name.starts_with("printed_") {
            continue;
        }
        for spec in &fx.specs {
            let plan = ContourPlan::auto(spec, &PlanOptions::default()).unwrap();
            let base = eval_mellin_barnes(spec, &plan).unwrap();
            let finer = eval_mellin_barnes(spec, &plan.refined(2.0)).unwrap();
            let slack = base.error_estimate.max(1e-10 * base.value.abs());
            assert!(
                (finer.value - base.value).abs() <= slack,
                "{name}/{}: {} vs {} (estimate {})",
                spec.name,
                base.value,
                finer.value,
                base.error_estimate
            );
        }
    }
}
