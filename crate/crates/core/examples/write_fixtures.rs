//! Regenerates the Mellin-Barnes fixtures in `crates/core/fixtures`.
//!
//! cargo run -p thz-core --example write_fixtures

use std::path::Path;

use thz_core::foxh::{Fixture, FixtureCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ber = [("alpha", 2.0), ("mu", 1.0), ("phi", 14.41), ("k", 0.3), ("gamma0", 1e3), ("p", 0.5), ("q", 1.0)];
    let cap = [("alpha", 2.0), ("mu", 2.0), ("phi", 14.41), ("k", 0.4), ("gamma0", 1e2)];
    let mom = |n: f64| [("alpha", 1.0), ("mu", 3.0), ("phi", 14.41), ("k", 0.3), ("gamma0", 1e3), ("n", n)];
    let cases = [
        ("ber", FixtureCase::new("ber", &ber)),
        ("capacity", FixtureCase::new("capacity", &cap)),
        ("moment1", FixtureCase::new("moment", &mom(1.0))),
        ("moment2", FixtureCase::new("moment", &mom(2.0))),
        ("printed_ber", FixtureCase::new("printed_ber", &ber)),
        ("printed_capacity", FixtureCase::new("printed_capacity", &cap)),
        ("printed_moment1", FixtureCase::new("printed_moment", &mom(1.0))),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, case) in cases {
        let fixture = Fixture { specs: case.build()?, case: Some(case) };
        let text = format!(
            "# Mellin-Barnes integrand: prefactor (2πi)^-d ∫ Π Γ(num) / Π Γ(den) Π z^(sign·s) ds\n\
             # argument lines give ln|z|, arg z and the sign of the exponent.\n{}",
            fixture.to_text()
        );
        std::fs::write(dir.join(format!("{name}.fxh")), text)?;
    }
    Ok(())
}
