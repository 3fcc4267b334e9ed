//! Noether point symmetries of a geodesic Lagrangian.
//!
//! A generator `X = ξ ∂_s + η^a ∂_a` is a Noether symmetry of `L` when
//! `XL + L Dξ = DA` for some gauge `A(s, x)`, with `D` the total derivative
//! along the curve. [`solve_noether`] finds every such generator inside a
//! finite [`AnsatzBasis`] by exact linear algebra; the remaining functions
//! classify the result, build the conserved quantities and check the algebra.

mod algebra;
mod census;
mod gauge;
mod linalg;
mod residual;
mod solve;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::expr::{Expr, ExprError, VelocityError, VelocityIndex, ZeroError};
use crate::geometry::GeometryError;

pub use algebra::{in_span, lie_bracket, span_coefficients, structure_constants, StructureConstants};
pub use census::{
    conjecture_check, predicted_flat_count, scaling_exclusion_check, symmetry_report, ConjectureResult, Counts,
    SymmetryReport,
};
pub use gauge::{derive_gauge, GaugeError};
pub use linalg::rational_nullspace;
pub use residual::{conserved_quantity, noether_residual, prolongation};
pub use solve::{classify, solve_noether, solve_noether_with, AnsatzBasis, DEFAULT_CLOSURE_LIMIT};

/// `ξ ∂_s + η^a ∂_a` with velocity-free components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub xi: Expr,
    pub eta: Vec<Expr>,
}

impl Generator {
    pub fn new(xi: Expr, eta: Vec<Expr>) -> Self {
        Generator {
            xi: xi.normalize(),
            eta: eta.iter().map(Expr::normalize).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Generator::new(Expr::zero(), vec![Expr::zero(); n])
    }

    /// `∂_s`.
    pub fn translation(n: usize) -> Self {
        Generator::new(Expr::one(), vec![Expr::zero(); n])
    }

    /// `f ∂_a` for coordinate index `a`.
    pub fn along(n: usize, a: usize, f: Expr) -> Self {
        let mut eta = vec![Expr::zero(); n];
        eta[a] = f;
        Generator::new(Expr::zero(), eta)
    }

    pub fn dim(&self) -> usize {
        self.eta.len()
    }

    /// `(ξ, η^0, .., η^{n-1})`.
    pub fn components(&self) -> impl Iterator<Item = &Expr> {
        std::iter::once(&self.xi).chain(&self.eta)
    }

    pub fn is_zero(&self) -> bool {
        self.components().all(|c| *c == Expr::zero())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi = {}; eta = [", self.xi)?;
        for (i, e) in self.eta.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymmetryClass {
    Isometry,
    LagrangianTranslation,
    New,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Isometry => "isometry",
            SymmetryClass::LagrangianTranslation => "lagrangian",
            SymmetryClass::New => "new",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoetherSymmetry {
    pub gen: Generator,
    pub gauge: Expr,
    /// Normalized residual of the Noether condition; zero for a symmetry.
    pub residual: Expr,
    pub class: SymmetryClass,
}

/// A first integral along geodesics, with the index of the symmetry it came
/// from in the owning list.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservedQuantity {
    pub label: String,
    pub expr: Expr,
    pub source: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoetherError {
    #[error("ansatz function set has {size} elements, above the limit of {limit}")]
    Closure { size: usize, limit: usize },
    #[error(transparent)]
    Undetermined(#[from] ZeroError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Velocity(#[from] VelocityError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("solver produced a vector that fails re-verification: {0}")]
    Inconsistent(String),
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("scaling generator s d/ds passed the Noether test; obstruction table {0:?}")]
    ScalingNotExcluded(BTreeMap<VelocityIndex, Expr>),
}
