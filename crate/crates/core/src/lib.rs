//! Performance analysis of terahertz links under alpha-mu fading, zero-boresight
//! pointing errors and Gaussian transceiver hardware impairment.
//!
//! Every metric is available through up to three independent routes:
//!
//! * closed-form Mellin-Barnes (Fox's H) integrals evaluated on vertical contours ([`foxh`]),
//! * adaptive quadrature of the closed-form SNR density and distribution ([`metrics`]),
//! * Monte Carlo simulation of the product channel ([`montecarlo`]).
//!
//! The library works in linear SI units throughout; decibel conversions belong to callers.

pub mod channel;
pub mod error;
pub mod foxh;
pub mod metrics;
pub mod montecarlo;
pub mod numerics;

pub use channel::{ChannelParams, HardwareParams, LinkBudget};
pub use error::{Error, Result};
pub use metrics::{Method, MetricResult, ModulationParams};

