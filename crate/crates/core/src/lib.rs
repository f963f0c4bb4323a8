//! Simulation and numerical verification engine for a two-stage
//! (larvae/adults) wild mosquito population model with distinct birth and
//! death rates.
//!
//! * [`model`]: parameters, states and the evolution operators.
//! * [`spectral`]: fixed points and the type of the origin.
//! * [`trajectory`]: orbits, verdicts and online monitors.
//! * [`simplex`]: the normalized map on the simplex and periodic points.
//! * [`ode`]: the continuous-time reference model.
//! * [`sweep`], [`certify`]: batch drivers used by the command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod certify;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod model;
pub mod ode;
pub mod sampling;
pub mod simplex;
pub mod spectral;
pub mod sweep;
pub mod trajectory;

pub use error::{Error, Result};
pub use model::{
    apply_w, apply_w0, continuous_rhs, validate_parameters, Parameters, State, ValidationMode,
    ValidationReport,
};
pub use spectral::{FixedPointType, SpectralReport};
pub use trajectory::{iterate_orbit, MonitorLog, Orbit, OrbitConfig, Verdict};
