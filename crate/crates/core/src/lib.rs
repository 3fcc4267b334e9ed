//! Noether point symmetries and conservation laws of geodesic Lagrangians.
//!
//! The crate is layered: [`expr`] is an exact symbolic kernel, [`geometry`]
//! builds curvature and Killing data for a [`geometry::Metric`], [`noether`]
//! solves the determining equations of a finite ansatz and classifies the
//! result, and [`numeric`] integrates geodesics to check conservation.

pub mod expr;
pub mod geometry;
pub mod noether;
pub mod numeric;
