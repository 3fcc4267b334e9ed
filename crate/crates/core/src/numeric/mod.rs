//! Floating-point checks: geodesic integration, conservation drift and the
//! random-point zero test.

mod compiled;
mod geodesic;

use thiserror::Error;

use crate::expr::EvalError;
use crate::geometry::GeometryError;

pub use geodesic::{conservation_drift, expression_drift, integrate_geodesic, DriftReport, GeodesicState, Trajectory};
pub use zero_test::{random_assignment, random_zero_test, sample_value, ZeroVerdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no valid sample point after {attempts} attempts")]
    TooManyDomainErrors { attempts: usize },
    #[error("integration produced a non-finite state after s = {last_s}")]
    BlowUp { last_s: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
