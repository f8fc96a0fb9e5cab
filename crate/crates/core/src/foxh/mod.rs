//! Multivariate Fox H / Mellin-Barnes integrals: specification, contour
//! planning, numerical evaluation and text fixtures.

mod contour;
mod eval;
mod fixture;
mod printed;
mod spec;
mod specs;

pub use contour::{choose_anchors, validate_contours, ContourPlan, PlanOptions, SeparationRule, MIN_MARGIN};
pub use eval::{eval_mellin_barnes, eval_sum, MellinBarnesValue, REFINE_WIDTH};
pub use fixture::{parse_fixture, write_fixture, Fixture, FixtureCase};
pub use printed::{
    printed_ber_specs, printed_capacity_spec, printed_moment_specs, JointParam, MultiH, VariableBlock,
};
pub use spec::{equivalent, Argument, FoxHSpec, GammaFactor, Location};
pub use specs::{b_argument, ber_foxh_spec, capacity_foxh_spec, moment_foxh_spec};
