//! Plain-text fixture format for [`FoxHSpec`]s.
//!
//! ```text
//! # comment
//! spec capacity
//! prefactor 0.125
//! argument <ln|z|> <arg z> <±1>
//! num <offset> <coeff_1> ... <coeff_d>
//! den <offset> <coeff_1> ... <coeff_d>
//! end
//! ```
//!
//! One `argument` line per contour variable; a file may hold several specs.
//! An optional leading `case <kind> key=value ...` line records the parameters
//! the specs were built from, so they can be regenerated and compared.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::channel::{ChannelParams, HardwareParams};
use crate::error::{Error, Result};
use crate::foxh::printed::{printed_ber_specs, printed_capacity_spec, printed_moment_specs};
use crate::foxh::spec::{Argument, FoxHSpec, GammaFactor, Location};
use crate::foxh::specs::{ber_foxh_spec, capacity_foxh_spec, moment_foxh_spec};
use crate::numerics::ComplexValue;

/// Builder and parameters behind a fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureCase {
    /// One of `ber`, `capacity`, `moment`, `printed_ber`, `printed_capacity`, `printed_moment`.
    pub kind: String,
    pub params: BTreeMap<String, f64>,
}

impl FixtureCase {
    pub fn new(kind: &str, params: &[(&str, f64)]) -> Self {
        Self {
            kind: kind.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn get(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("case `{}` lacks `{key}`", self.kind)))
    }

    fn get_or(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn channel(&self) -> Result<ChannelParams> {
        ChannelParams::new(
            self.get("alpha")?,
            self.get("mu")?,
            self.get_or("omega", 1.0),
            self.get_or("s", 1.0),
            self.get("phi")?,
        )
    }

    pub fn hardware(&self) -> Result<HardwareParams> {
        HardwareParams::aggregate(self.get("k")?)
    }

    pub fn gamma0(&self) -> Result<f64> {
        self.get("gamma0")
    }

    pub fn moment_order(&self) -> Result<u32> {
        let n = self.get("n")?;
        if n >= 1.0 && n.fract() == 0.0 {
            Ok(n as u32)
        } else {
            Err(Error::InvalidParameter(format!("moment order must be a positive integer, got {n}")))
        }
    }

    /// Rebuilds the specs with the library builders.
    pub fn build(&self) -> Result<Vec<FoxHSpec>> {
        let (ch, hw, g0) = (self.channel()?, self.hardware()?, self.gamma0()?);
        match self.kind.as_str() {
            "ber" => ber_foxh_spec(&ch, &hw, g0, self.get("p")?, self.get("q")?),
            "capacity" => capacity_foxh_spec(&ch, &hw, g0),
            "moment" => moment_foxh_spec(&ch, &hw, g0, self.moment_order()?),
            "printed_ber" => printed_ber_specs(&ch, &hw, g0, self.get("p")?, self.get("q")?),
            "printed_capacity" => Ok(vec![printed_capacity_spec(&ch, &hw, g0)?]),
            "printed_moment" => printed_moment_specs(&ch, &hw, g0, self.moment_order()?),
            other => Err(Error::InvalidParameter(format!("unknown fixture case `{other}`"))),
        }
    }
}

/// Parsed fixture file.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub case: Option<FixtureCase>,
    pub specs: Vec<FoxHSpec>,
}

impl Fixture {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(c) = &self.case {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v:?}")).collect();
            let _ = writeln!(out, "case {} {}\n", c.kind, params.join(" "));
        }
        out.push_str(&write_fixture(&self.specs));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut case = None;
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if let Some(rest) = content.strip_prefix("case ") {
                if case.is_some() {
                    return Err(fixture_err(idx + 1, "more than one `case` line"));
                }
                case = Some(parse_case(rest, idx + 1)?);
            }
        }
        Ok(Self {
            case,
            specs: parse_fixture(text)?,
        })
    }
}

fn parse_case(rest: &str, line: usize) -> Result<FixtureCase> {
    let mut fields = rest.split_whitespace();
    let kind = fields
        .next()
        .ok_or_else(|| fixture_err(line, "expected `case <kind> key=value ...`"))?;
    let mut params = BTreeMap::new();
    for f in fields {
        let (k, v) = f
            .split_once('=')
            .ok_or_else(|| fixture_err(line, format!("`{f}` is not key=value")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| fixture_err(line, format!("`{v}` is not a number")))?;
        params.insert(k.to_string(), v);
    }
    Ok(FixtureCase {
        kind: kind.to_string(),
        params,
    })
}

pub fn write_fixture(specs: &[FoxHSpec]) -> String {
    let mut out = String::new();
    for s in specs {
        let _ = writeln!(out, "spec {}", s.name);
        let _ = writeln!(out, "prefactor {:?}", s.prefactor);
        for a in &s.arguments {
            let _ = writeln!(out, "argument {:?} {:?} {}", a.log.re, a.log.im, a.sign as i32);
        }
        for f in &s.factors {
            let tag = match f.location {
                Location::Numerator => "num",
                Location::Denominator => "den",
            };
            let coeffs: Vec<String> = f.coeffs.iter().map(|c| format!("{c:?}")).collect();
            let _ = writeln!(out, "{tag} {:?} {}", f.offset, coeffs.join(" "));
        }
        out.push_str("end\n\n");
    }
    out
}

fn fixture_err(line: usize, message: impl Into<String>) -> Error {
    Error::Fixture {
        line,
        message: message.into(),
    }
}

fn numbers(fields: &[&str], line: usize) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| fixture_err(line, format!("`{t}` is not a number")))
        })
        .collect()
}

#[derive(Default)]
struct Partial {
    name: String,
    start: usize,
    prefactor: Option<f64>,
    arguments: Vec<Argument>,
    factors: Vec<(usize, GammaFactor)>,
}

impl Partial {
    fn finish(self) -> Result<FoxHSpec> {
        let d = self.arguments.len();
        let prefactor = self
            .prefactor
            .ok_or_else(|| fixture_err(self.start, format!("spec `{}` has no prefactor", self.name)))?;
        if d == 0 {
            return Err(fixture_err(self.start, format!("spec `{}` has no arguments", self.name)));
        }
        for (line, f) in &self.factors {
            if f.coeffs.len() != d {
                return Err(fixture_err(
                    *line,
                    format!("factor has {} coefficients, expected {d}", f.coeffs.len()),
                ));
            }
        }
        let spec = FoxHSpec {
            name: self.name,
            prefactor,
            arguments: self.arguments,
            factors: self.factors.into_iter().map(|(_, f)| f).collect(),
        };
        spec.check()
            .map_err(|e| fixture_err(self.start, e.to_string()))?;
        Ok(spec)
    }
}

pub fn parse_fixture(text: &str) -> Result<Vec<FoxHSpec>> {
    let mut specs = Vec::new();
    let mut current: Option<Partial> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let (key, rest) = (fields[0], &fields[1..]);
        if key == "case" {
            continue;
        }
        if key == "spec" {
            if current.is_some() {
                return Err(fixture_err(line, "`spec` before `end` of the previous spec"));
            }
            if rest.len() != 1 {
                return Err(fixture_err(line, "expected `spec <name>`"));
            }
            current = Some(Partial {
                name: rest[0].to_string(),
                start: line,
                ..Partial::default()
            });
            continue;
        }
        let partial = current
            .as_mut()
            .ok_or_else(|| fixture_err(line, format!("`{key}` outside a spec block")))?;
        match key {
            "prefactor" => {
                let v = numbers(rest, line)?;
                if v.len() != 1 {
                    return Err(fixture_err(line, "expected `prefactor <value>`"));
                }
                partial.prefactor = Some(v[0]);
            }
            "argument" => {
                let v = numbers(rest, line)?;
                if v.len() != 3 || (v[2] != 1.0 && v[2] != -1.0) {
                    return Err(fixture_err(line, "expected `argument <ln|z|> <arg z> <±1>`"));
                }
                partial.arguments.push(Argument {
                    log: ComplexValue::new(v[0], v[1]),
                    sign: v[2],
                });
            }
            "num" | "den" => {
                let v = numbers(rest, line)?;
                if v.len() < 2 {
                    return Err(fixture_err(line, "expected an offset and at least one coefficient"));
                }
                let f = if key == "num" {
                    GammaFactor::num(v[0], &v[1..])
                } else {
                    GammaFactor::den(v[0], &v[1..])
                };
                partial.factors.push((line, f));
            }
            "end" => specs.push(current.take().unwrap().finish()?),
            other => return Err(fixture_err(line, format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(p) = current {
        return Err(fixture_err(p.start, format!("spec `{}` is missing `end`", p.name)));
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxh::spec::equivalent;

    fn sample() -> FoxHSpec {
        FoxHSpec {
            name: "toy".into(),
            prefactor: -0.1 / 3.0,
            arguments: vec![Argument::real(-0.3, 1.0), Argument::real(7.0, -1.0)],
            factors: vec![GammaFactor::num(0.25, &[1.0, -0.5]), GammaFactor::den(1.0, &[0.0, 1.0])],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let text = write_fixture(&[sample(), sample()]);
        let back = parse_fixture(&text).unwrap();
        assert_eq!(back, vec![sample(), sample()]);
        assert!(equivalent(&back[0], &sample(), 0.0));
    }

    #[test]
    fn case_line_round_trips_and_rebuilds() {
        let case = FixtureCase::new(
            "capacity",
            &[("alpha", 2.0), ("mu", 2.0), ("phi", 14.41), ("k", 0.4), ("gamma0", 100.0)],
        );
        let fx = Fixture {
            specs: case.build().unwrap(),
            case: Some(case),
        };
        let back = Fixture::parse(&fx.to_text()).unwrap();
        assert_eq!(back, fx);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = write_fixture(&[sample()]).replace("num 0.25", "num zero");
        match parse_fixture(&text) {
            Err(Error::Fixture { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let missing_end = "spec a\nprefactor 1\nargument 0 0 1\nnum 0 1\n";
        assert!(matches!(parse_fixture(missing_end), Err(Error::Fixture { line: 1, .. })));
    }
}
