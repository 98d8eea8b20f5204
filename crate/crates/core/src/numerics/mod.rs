//! Quadrature, finite-difference verification and the polar-grid
//! finite-difference oracle for the half-disk Laplace problem.

mod field;
mod oracle;
mod quadrature;
mod residual;

pub use field::{natural_grid, Field, FnField, GridSpec, InterfaceSample, Perturbed, TaggedField};
pub use oracle::{oracle_halfdisk, OracleDiagnostics, OracleField, ORACLE_MAX_SWEEPS, ORACLE_UPDATE_TOL, SOR_OMEGA};
pub use quadrature::{quad_gl, quad_gl_sinh, GaussLegendre, PANEL_ORDER};
pub use residual::{
    fd_residual, interface_c1_check, one_sided_normal_jump, verify_solution, verify_with,
    GradientMethod, InterfaceJump, RegionResidual, ResidualReport, Tolerances, Verdict,
    VerifyOptions,
};

use crate::geometry::Point;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("bad integration interval [{a}, {b}] with {n} nodes")]
    BadInterval { a: f64, b: f64, n: usize },
    #[error("finite-difference stencil at {point} with h = {h} leaves the domain")]
    StencilOutOfDomain { point: Point, h: f64 },
    #[error("SOR did not converge after {sweeps} sweeps (relative update {update:e})")]
    NoConvergence { sweeps: usize, update: f64 },
    #[error("grid too small: {n_r} x {n_theta} (need at least 17 x 17)")]
    GridTooSmall { n_r: usize, n_theta: usize },
}
