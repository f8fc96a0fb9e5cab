use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

/// Whether a gamma factor multiplies or divides the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Numerator,
    Denominator,
}

/// `Γ(offset + Σ coeffs[i] · s_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactor {
    pub offset: f64,
    pub coeffs: Vec<f64>,
    pub location: Location,
}

impl GammaFactor {
    pub fn num(offset: f64, coeffs: &[f64]) -> Self {
        Self {
            offset,
            coeffs: coeffs.to_vec(),
            location: Location::Numerator,
        }
    }

    pub fn den(offset: f64, coeffs: &[f64]) -> Self {
        Self {
            offset,
            coeffs: coeffs.to_vec(),
            location: Location::Denominator,
        }
    }

    /// Real part of the gamma argument at real contour anchors.
    pub fn argument_at(&self, anchors: &[f64]) -> f64 {
        self.offset + self.coeffs.iter().zip(anchors).map(|(b, c)| b * c).sum::<f64>()
    }

    /// Indices of the contour variables this factor depends on.
    pub fn variables(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Power `z^{sign · s}` of one contour variable, with an explicit branch of `ln z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Argument {
    /// `ln z` on the chosen branch.
    pub log: ComplexValue,
    /// `+1` for `z^{s}`, `-1` for `z^{-s}`.
    pub sign: f64,
}

impl Argument {
    /// Real argument on the principal branch (`ln z = ln|z| + iπ` for `z < 0`).
    pub fn real(value: f64, sign: f64) -> Self {
        let phase = if value < 0.0 { std::f64::consts::PI } else { 0.0 };
        Self::polar(value.abs(), phase, sign)
    }

    pub fn polar(modulus: f64, phase: f64, sign: f64) -> Self {
        Self {
            log: ComplexValue::new(modulus.ln(), phase),
            sign,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.log.re.exp()
    }

    pub fn phase(&self) -> f64 {
        self.log.im
    }
}

/// A 1- to 3-fold Mellin-Barnes integral
///
/// ```text
/// prefactor · (2πi)^{-d} ∫…∫ Π Γ(num) / Π Γ(den) · Π z_i^{±s_i} ds
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec {
    pub name: String,
    pub prefactor: f64,
    pub arguments: Vec<Argument>,
    pub factors: Vec<GammaFactor>,
}

impl FoxHSpec {
    pub fn dimension(&self) -> usize {
        self.arguments.len()
    }

    pub fn numerators(&self) -> impl Iterator<Item = &GammaFactor> {
        self.factors.iter().filter(|f| f.location == Location::Numerator)
    }

    pub fn check(&self) -> Result<()> {
        let d = self.dimension();
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidParameter(format!(
                "{}: dimension must be 1, 2 or 3, got {d}",
                self.name
            )));
        }
        if !self.prefactor.is_finite() {
            return Err(Error::InvalidParameter(format!("{}: prefactor is not finite", self.name)));
        }
        for (i, a) in self.arguments.iter().enumerate() {
            if !(a.log.re.is_finite() && a.log.im.is_finite()) || (a.sign != 1.0 && a.sign != -1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{}: argument {} must be finite and non-zero with sign ±1",
                    self.name,
                    i + 1
                )));
            }
        }
        for f in &self.factors {
            if f.coeffs.len() != d || !f.offset.is_finite() || f.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{}: factor {f} does not match dimension {d}",
                    self.name
                )));
            }
        }
        for i in 0..d {
            if !self.factors.iter().any(|f| f.coeffs[i] != 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{}: contour variable s{} appears in no gamma factor",
                    self.name,
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GammaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ({}", self.offset)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != 0.0 {
                write!(f, " {} {}·s{}", if *c < 0.0 { '-' } else { '+' }, c.abs(), i + 1)?;
            }
        }
        write!(f, ")")
    }
}

/// True when both specs carry the same factors (as multisets), arguments and
/// prefactor up to relative tolerance `tol`.
pub fn equivalent(a: &FoxHSpec, b: &FoxHSpec, tol: f64) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);
    if a.dimension() != b.dimension() || a.factors.len() != b.factors.len() {
        return false;
    }
    let pre = (a.prefactor - b.prefactor).abs() <= tol * a.prefactor.abs().max(b.prefactor.abs());
    if !pre {
        return false;
    }
    for (x, y) in a.arguments.iter().zip(&b.arguments) {
        if x.sign != y.sign || !close(x.log.re, y.log.re) || !close(x.log.im, y.log.im) {
            return false;
        }
    }
    let mut used = vec![false; b.factors.len()];
    for fa in &a.factors {
        let hit = b.factors.iter().enumerate().position(|(j, fb)| {
            !used[j]
                && fa.location == fb.location
                && close(fa.offset, fb.offset)
                && fa.coeffs.iter().zip(&fb.coeffs).all(|(p, q)| close(*p, *q))
        });
        match hit {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}
