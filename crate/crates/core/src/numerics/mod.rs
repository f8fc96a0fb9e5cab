//! Special functions and one-dimensional quadrature shared by every other module.

mod gamma;
mod incomplete;
mod quadrature;

pub use gamma::{gamma, ln_gamma, ln_gamma_real, ln_gamma_signed};
pub(crate) use gamma::ln_gamma_unchecked;
pub use incomplete::{
    lower_incomplete_gamma, regularized_lower, regularized_upper, upper_gamma_scaled,
    upper_incomplete_gamma,
};
pub use quadrature::{
    integrate_adaptive, integrate_pieces, integrate_with, QuadratureOptions, QuadratureResult,
};

/// Complex number used for contour variables and log-gamma values.
pub type ComplexValue = num_complex::Complex64;
