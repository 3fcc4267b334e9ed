//! Metrics and their curvature.

mod curvature;
mod metric;

use thiserror::Error;

use crate::expr::ZeroError;

pub use curvature::{
    christoffel, curvature_report, flat_orthogonal_sections, geodesic_rhs, is_flat, killing_check, riemann,
    Christoffel, CurvatureReport, FlatSection, Riemann,
};
pub(crate) use curvature::geodesic_rhs_polys;
pub use metric::{inverse_metric, lagrangian_of, Metric, Signature};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid metric: {0}")]
    Invalid(String),
    #[error("metric is not symmetric in components ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("metric is degenerate")]
    Degenerate,
    #[error(transparent)]
    Undetermined(#[from] ZeroError),
    #[error("{0}")]
    Precondition(String),
}
