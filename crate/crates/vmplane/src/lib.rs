//! Rotationally symmetric planes built from a prescribed curvature K(r).
//!
//! A plane is the metric dr² + m(r)² dθ² where m solves the Jacobi problem
//! m'' + K m = 0, m(0) = 0, m'(0) = 1. On top of the solved profile the crate
//! computes turn angles of geodesics, decides which geodesics are rays, and
//! locates the critical set of infinity, the pole ball and related radii.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod constructions;
pub mod curvature;
pub mod error;
pub mod geodesics;
pub mod io;
pub mod jacobi;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod roots;

pub use curvature::{check_von_mangoldt, CurvatureSpec, DropParams, Expression, Extrapolate, Table};
pub use error::{Error, Result};
pub use jacobi::{solve_jacobi, PlaneProfile};
pub use quadrature::{integrate_f, IntegralResult, Status};
