//! Tricomi problems for equation (1) on the unit characteristic domain.
//!
//! Problem 1 runs top-down: data `φ` on the arc `σ` give a harmonic field in
//! `D1` through the half-disk Green's function, its normal derivative `ν` on
//! the diameter is pushed into `D2` by d'Alembert's formula, and the trace
//! on `AC` is read off. Problem 2 runs bottom-up: a datum `f` on `AC` gives
//! the wave field in `D2` directly, `ν = −f′((x−1)/2)`, and the elliptic part
//! is the analytic continuation `U = −2·Im f((z−1)/2)` whose positive set is
//! probed numerically.

mod data;
mod problem1;
mod problem2;

pub(crate) use data::taylor_shift;

pub use data::{
    Admissibility, BoundaryPhi, CharacteristicF, KernelConstantMode, NuFunction, NuProvenance, PhiTable,
};
pub use problem1::{
    dalembert_extend, dalembert_grad, greens_half_disk, harmonic_eval_d1, harmonic_grad_d1, nu_eval,
    trace_ac, ClippedIntegral, TopDownField, ENDPOINT_CLIP, MIN_HARMONIC_QUAD, MIN_NU_QUAD,
    NEAR_SIGMA, QUAD_DOUBLING_TOL,
};
pub use problem2::{
    positivity_probe, problem2_d1, problem2_d1_grad, problem2_d2, problem2_d2_grad, problem2_nu,
    series_eval_d1, BottomUpField, ProbeReport, SeriesSum, DEFAULT_SERIES_TERMS, MIN_PROBE_GRID,
    SERIES_TAIL_TOL,
};

use crate::geometry::Point;
use crate::numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TricomiError {
    #[error("point {0} is outside the domain of the operation")]
    OutOfDomain(Point),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("Green's function is singular at x = {x}, xi = {xi}")]
    SingularPoint { x: Point, xi: Point },
    #[error("quadrature under-resolved: doubling {n_quad} nodes changed the result by {change:e}")]
    QuadratureUnderResolved { n_quad: usize, change: f64 },
    #[error("integration interval [{lo}, {hi}] escapes the data interval [-1, 1]")]
    IntervalEscapesData { lo: f64, hi: f64 },
    #[error("power series diverged: tail bound {tail:e} after {n_terms} terms")]
    SeriesDiverged { tail: f64, n_terms: usize },
    #[error("bad argument {name}: {reason}")]
    BadArgument { name: &'static str, reason: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
