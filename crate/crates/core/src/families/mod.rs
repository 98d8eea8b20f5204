//! Closed-form solution families for
//!
//! * equation (1): `U_xx + sign(U)·U_yy = 0`, and
//! * equation (2): `(U_xx + U_yy)(U_xx − U_yy) = 0`,
//!
//! on disks (Dirichlet, Neumann and Cauchy model problems), the upper
//! half-plane, the whole plane and the Goursat wedge.
//!
//! A [`FamilySpec`] only becomes evaluatable through [`validate`], which
//! checks every parameter constraint and returns a [`Solution`]. Radial
//! families are glued from two radial branches, a radial quadratic
//! (annihilated by the wave operator) and a logarithm (harmonic), along the
//! interface circle `r = a`. Exactly on the interface the elliptic branch is
//! used; both branches agree there in value and gradient.

mod callable;

pub use callable::{CubicTable, Callable1D};
pub(crate) use callable::{horner, horner_derivative};

use crate::geometry::{DomainSpec, Point};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

/// Matching tolerance for Goursat data at the characteristic corner.
pub const GOURSAT_MATCH_TOL: f64 = 1e-12;

/// Points closer than this (relative) to a declared interface are tagged
/// [`OperatorTag::Interface`].
pub const INTERFACE_TAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub name: String,
    pub value: f64,
    pub required: String,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} (required {})", self.name, self.value, self.required)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("constraint violated: {}", join_violations(.0))]
    ConstraintViolation(Vec<ConstraintViolation>),
    #[error("Goursat data do not match at x = 1/2: f1 = {f1}, f2 = {f2}")]
    GoursatMismatch { f1: f64, f2: f64 },
    #[error("point {0} is outside the family domain")]
    OutOfDomain(Point),
    #[error("bad parameter {name} = {value}: {reason}")]
    BadParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

fn join_violations(v: &[ConstraintViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Which second-order operator governs a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorTag {
    Laplace,
    Wave,
    Interface,
    /// Both `U_xx + U_yy` and `U_xx − U_yy` vanish identically.
    BothDegenerate,
}

impl OperatorTag {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorTag::Laplace => "laplace",
            OperatorTag::Wave => "wave",
            OperatorTag::Interface => "interface",
            OperatorTag::BothDegenerate => "both-degenerate",
        }
    }

    /// Tag implied by the sign of the solution in equation (1).
    pub fn from_sign(u: f64) -> Self {
        if u > 0.0 {
            OperatorTag::Laplace
        } else if u < 0.0 {
            OperatorTag::Wave
        } else {
            OperatorTag::Interface
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    /// `U_xx + sign(U)·U_yy = 0`; the type follows the sign of `U`.
    SignSwitching,
    /// `(U_xx + U_yy)(U_xx − U_yy) = 0`; the type follows the vanishing factor.
    Product,
}

/// Parameterization of one closed-form family.
///
/// Field meanings: `radius` is the disk radius, `boundary_value` the
/// Dirichlet datum on `r = radius`, `boundary_slope` the Neumann datum
/// `∂U/∂r` there, `constant` the free additive/scale constant and
/// `interface_radius` the radius of the type-change circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    DirichletEq1Mixed { radius: f64, boundary_value: f64, interface_radius: f64 },
    DirichletEq1TrivialHyp { radius: f64, boundary_value: f64, constant: f64 },
    DirichletEq2Mixed { radius: f64, boundary_value: f64, constant: f64, interface_radius: f64 },
    DirichletEq2TrivialHyp { radius: f64, boundary_value: f64, constant: f64 },
    NeumannEq1Mixed { radius: f64, boundary_slope: f64, interface_radius: f64 },
    NeumannEq1TrivialHyp { radius: f64, boundary_slope: f64, constant: f64 },
    NeumannEq2Mixed { radius: f64, boundary_slope: f64, constant: f64, interface_radius: f64 },
    CauchyEq1Mixed { radius: f64, boundary_value: f64, boundary_slope: f64 },
    CauchyEq1TrivialHyp { radius: f64, boundary_value: f64, boundary_slope: f64 },
    CauchyEq2Mixed { radius: f64, boundary_value: f64, boundary_slope: f64, interface_radius: f64 },
    HalfPlaneEq1 { constant: f64 },
    WholePlaneEq1 { constant: f64, interface_radius: f64 },
    GoursatEq1 { f1: Callable1D, f2: Callable1D },
}

/// Family selector without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    DirichletEq1Mixed,
    DirichletEq1TrivialHyp,
    DirichletEq2Mixed,
    DirichletEq2TrivialHyp,
    NeumannEq1Mixed,
    NeumannEq1TrivialHyp,
    NeumannEq2Mixed,
    CauchyEq1Mixed,
    CauchyEq1TrivialHyp,
    CauchyEq2Mixed,
    HalfPlaneEq1,
    WholePlaneEq1,
    GoursatEq1,
}

/// Optional parameter overrides; missing entries fall back to the
/// family's defaults (see [`FamilyKind::build`]).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub radius: Option<f64>,
    pub boundary_value: Option<f64>,
    pub boundary_slope: Option<f64>,
    pub constant: Option<f64>,
    pub interface_radius: Option<f64>,
    pub f1: Option<Callable1D>,
    pub f2: Option<Callable1D>,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 13] = [
        FamilyKind::DirichletEq1Mixed,
        FamilyKind::DirichletEq1TrivialHyp,
        FamilyKind::DirichletEq2Mixed,
        FamilyKind::DirichletEq2TrivialHyp,
        FamilyKind::NeumannEq1Mixed,
        FamilyKind::NeumannEq1TrivialHyp,
        FamilyKind::NeumannEq2Mixed,
        FamilyKind::CauchyEq1Mixed,
        FamilyKind::CauchyEq1TrivialHyp,
        FamilyKind::CauchyEq2Mixed,
        FamilyKind::HalfPlaneEq1,
        FamilyKind::WholePlaneEq1,
        FamilyKind::GoursatEq1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::DirichletEq1Mixed => "dirichlet-eq1-mixed",
            FamilyKind::DirichletEq1TrivialHyp => "dirichlet-eq1-trivial-hyp",
            FamilyKind::DirichletEq2Mixed => "dirichlet-eq2-mixed",
            FamilyKind::DirichletEq2TrivialHyp => "dirichlet-eq2-trivial-hyp",
            FamilyKind::NeumannEq1Mixed => "neumann-eq1-mixed",
            FamilyKind::NeumannEq1TrivialHyp => "neumann-eq1-trivial-hyp",
            FamilyKind::NeumannEq2Mixed => "neumann-eq2-mixed",
            FamilyKind::CauchyEq1Mixed => "cauchy-eq1-mixed",
            FamilyKind::CauchyEq1TrivialHyp => "cauchy-eq1-trivial-hyp",
            FamilyKind::CauchyEq2Mixed => "cauchy-eq2-mixed",
            FamilyKind::HalfPlaneEq1 => "half-plane-eq1",
            FamilyKind::WholePlaneEq1 => "whole-plane-eq1",
            FamilyKind::GoursatEq1 => "goursat-eq1",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Builds a spec from overrides. Defaults are `R = 1`, `H = 1`, `K = 1`,
    /// `a = 0.5`, except where a family's constraints force otherwise:
    /// trivial hyperbolic Dirichlet/Cauchy families default to `H = -1`, the
    /// free constant defaults to `1` (or `-1` where it must be negative), and
    /// Goursat data default to `f1 = -(t - 1/2)²`, `f2 = 1/4 - t²`.
    pub fn build(self, p: &FamilyParams) -> FamilySpec {
        let radius = p.radius.unwrap_or(1.0);
        let a = p.interface_radius.unwrap_or(0.5);
        let k = p.boundary_slope.unwrap_or(1.0);
        let h = p.boundary_value.unwrap_or(1.0);
        let h_neg = p.boundary_value.unwrap_or(-1.0);
        let c = p.constant.unwrap_or(1.0);
        match self {
            FamilyKind::DirichletEq1Mixed => FamilySpec::DirichletEq1Mixed {
                radius,
                boundary_value: h,
                interface_radius: a,
            },
            FamilyKind::DirichletEq1TrivialHyp => FamilySpec::DirichletEq1TrivialHyp {
                radius,
                boundary_value: h_neg,
                constant: c,
            },
            FamilyKind::DirichletEq2Mixed => FamilySpec::DirichletEq2Mixed {
                radius,
                boundary_value: h,
                constant: c,
                interface_radius: a,
            },
            FamilyKind::DirichletEq2TrivialHyp => FamilySpec::DirichletEq2TrivialHyp {
                radius,
                boundary_value: h,
                constant: c,
            },
            FamilyKind::NeumannEq1Mixed => FamilySpec::NeumannEq1Mixed {
                radius,
                boundary_slope: k,
                interface_radius: a,
            },
            FamilyKind::NeumannEq1TrivialHyp => FamilySpec::NeumannEq1TrivialHyp {
                radius,
                boundary_slope: k,
                constant: p.constant.unwrap_or(-1.0),
            },
            FamilyKind::NeumannEq2Mixed => FamilySpec::NeumannEq2Mixed {
                radius,
                boundary_slope: k,
                constant: c,
                interface_radius: a,
            },
            FamilyKind::CauchyEq1Mixed => FamilySpec::CauchyEq1Mixed {
                radius,
                boundary_value: h,
                boundary_slope: k,
            },
            FamilyKind::CauchyEq1TrivialHyp => FamilySpec::CauchyEq1TrivialHyp {
                radius,
                boundary_value: h_neg,
                boundary_slope: k,
            },
            FamilyKind::CauchyEq2Mixed => FamilySpec::CauchyEq2Mixed {
                radius,
                boundary_value: h,
                boundary_slope: k,
                interface_radius: a,
            },
            FamilyKind::HalfPlaneEq1 => FamilySpec::HalfPlaneEq1 { constant: c },
            FamilyKind::WholePlaneEq1 => FamilySpec::WholePlaneEq1 {
                constant: c,
                interface_radius: a,
            },
            FamilyKind::GoursatEq1 => FamilySpec::GoursatEq1 {
                f1: p.f1.clone().unwrap_or_else(|| Callable1D::polynomial([-0.25, 1.0, -1.0])),
                f2: p.f2.clone().unwrap_or_else(|| Callable1D::polynomial([0.25, 0.0, -1.0])),
            },
        }
    }

    pub fn default_spec(self) -> FamilySpec {
        self.build(&FamilyParams::default())
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FamilySpec {
    /// Dirichlet value `H` and Neumann slope `K` imposed on `r = R`, for
    /// the disk families.
    pub fn boundary_data(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            FamilySpec::DirichletEq1Mixed { boundary_value, .. }
            | FamilySpec::DirichletEq1TrivialHyp { boundary_value, .. }
            | FamilySpec::DirichletEq2Mixed { boundary_value, .. }
            | FamilySpec::DirichletEq2TrivialHyp { boundary_value, .. } => (Some(boundary_value), None),
            FamilySpec::NeumannEq1Mixed { boundary_slope, .. }
            | FamilySpec::NeumannEq1TrivialHyp { boundary_slope, .. }
            | FamilySpec::NeumannEq2Mixed { boundary_slope, .. } => (None, Some(boundary_slope)),
            FamilySpec::CauchyEq1Mixed { boundary_value, boundary_slope, .. }
            | FamilySpec::CauchyEq1TrivialHyp { boundary_value, boundary_slope, .. }
            | FamilySpec::CauchyEq2Mixed { boundary_value, boundary_slope, .. } => {
                (Some(boundary_value), Some(boundary_slope))
            }
            FamilySpec::HalfPlaneEq1 { .. } | FamilySpec::WholePlaneEq1 { .. } | FamilySpec::GoursatEq1 { .. } => {
                (None, None)
            }
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::DirichletEq1Mixed { .. } => FamilyKind::DirichletEq1Mixed,
            FamilySpec::DirichletEq1TrivialHyp { .. } => FamilyKind::DirichletEq1TrivialHyp,
            FamilySpec::DirichletEq2Mixed { .. } => FamilyKind::DirichletEq2Mixed,
            FamilySpec::DirichletEq2TrivialHyp { .. } => FamilyKind::DirichletEq2TrivialHyp,
            FamilySpec::NeumannEq1Mixed { .. } => FamilyKind::NeumannEq1Mixed,
            FamilySpec::NeumannEq1TrivialHyp { .. } => FamilyKind::NeumannEq1TrivialHyp,
            FamilySpec::NeumannEq2Mixed { .. } => FamilyKind::NeumannEq2Mixed,
            FamilySpec::CauchyEq1Mixed { .. } => FamilyKind::CauchyEq1Mixed,
            FamilySpec::CauchyEq1TrivialHyp { .. } => FamilyKind::CauchyEq1TrivialHyp,
            FamilySpec::CauchyEq2Mixed { .. } => FamilyKind::CauchyEq2Mixed,
            FamilySpec::HalfPlaneEq1 { .. } => FamilyKind::HalfPlaneEq1,
            FamilySpec::WholePlaneEq1 { .. } => FamilyKind::WholePlaneEq1,
            FamilySpec::GoursatEq1 { .. } => FamilyKind::GoursatEq1,
        }
    }
}

/// Interface radius of the Cauchy problem for equation (1):
/// `a = R·exp(−H/(K·R))`.
pub fn cauchy_interface_radius(radius: f64, value: f64, slope: f64) -> Result<f64, FamilyError> {
    for (name, v) in [("R", radius), ("H", value), ("K", slope)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(FamilyError::BadParameter {
                name,
                value: v,
                reason: "must be strictly positive",
            });
        }
    }
    Ok(radius * (-value / (slope * radius)).exp())
}

/// `c2·(r² − r0²) + c0` or `k·ln(r/r0) + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Radial {
    Quadratic { c2: f64, r0: f64, c0: f64 },
    Log { k: f64, r0: f64, c0: f64 },
}

impl Radial {
    fn value(self, r: f64) -> f64 {
        match self {
            Radial::Quadratic { c2, r0, c0 } => c2 * (r * r - r0 * r0) + c0,
            Radial::Log { k, r0, c0 } => k * (r / r0).ln() + c0,
        }
    }

    fn gradient(self, p: Point) -> (f64, f64) {
        match self {
            Radial::Quadratic { c2, .. } => (2.0 * c2 * p.x, 2.0 * c2 * p.y),
            Radial::Log { k, .. } => {
                let r2 = p.norm_sq();
                (k * p.x / r2, k * p.y / r2)
            }
        }
    }

    fn operator(self) -> OperatorTag {
        match self {
            Radial::Quadratic { c2, .. } if c2 != 0.0 => OperatorTag::Wave,
            Radial::Log { k, .. } if k != 0.0 => OperatorTag::Laplace,
            _ => OperatorTag::BothDegenerate,
        }
    }
}

/// Which formula of a piecewise family is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `r < a`, or `0 ≤ y ≤ π` for the half-plane family.
    Inner,
    Outer,
    /// Single-formula families.
    Whole,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Inner => "inner",
            Branch::Outer => "outer",
            Branch::Whole => "whole",
        }
    }
}

/// Type-change curve of a piecewise family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Interface {
    Circle { radius: f64 },
    /// The horizontal line `y = level`.
    Line { level: f64 },
}

impl Interface {
    pub fn distance(self, p: Point) -> f64 {
        match self {
            Interface::Circle { radius } => (p.norm() - radius).abs(),
            Interface::Line { level } => (p.y - level).abs(),
        }
    }

    fn scale(self) -> f64 {
        match self {
            Interface::Circle { radius } => radius.max(1.0),
            Interface::Line { level } => level.abs().max(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Radial { inner: Radial, outer: Option<(Radial, f64)> },
    HalfPlane { c: f64 },
    Goursat { f1: Callable1D, f2: Callable1D, corner: f64 },
}

/// A validated, immutable, evaluatable family member.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    spec: FamilySpec,
    shape: Shape,
    domain: DomainSpec,
    equation: Equation,
}

struct Checker(Vec<ConstraintViolation>);

impl Checker {
    fn require(&mut self, ok: bool, name: &str, value: f64, required: impl Into<String>) {
        if !ok {
            self.0.push(ConstraintViolation {
                name: name.to_string(),
                value,
                required: required.into(),
            });
        }
    }

    fn finite(&mut self, name: &str, value: f64) {
        self.require(value.is_finite(), name, value, "finite");
    }

    fn radius(&mut self, radius: f64) {
        self.require(radius > 0.0 && radius.is_finite(), "R", radius, "> 0");
    }

    fn interface(&mut self, a: f64, radius: f64) {
        self.require(a > 0.0 && a < radius, "a", a, format!("in (0, {radius})"));
    }

    fn finish(self) -> Result<(), FamilyError> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(FamilyError::ConstraintViolation(self.0))
        }
    }
}

fn dirichlet_eq1_mixed(radius: f64, h: f64, a: f64) -> Shape {
    let log_ratio = (a / radius).ln();
    Shape::Radial {
        inner: Radial::Quadratic { c2: -h / (2.0 * log_ratio * a * a), r0: a, c0: 0.0 },
        outer: Some((Radial::Log { k: -h / log_ratio, r0: a, c0: 0.0 }, a)),
    }
}

fn neumann_eq2_mixed(radius: f64, k: f64, c: f64, a: f64) -> Shape {
    let kr = k * radius;
    Shape::Radial {
        inner: Radial::Quadratic { c2: kr / (2.0 * a * a), r0: a, c0: kr * (a / radius).ln() + c },
        outer: Some((Radial::Log { k: kr, r0: radius, c0: c }, a)),
    }
}

/// Checks every parameter constraint of `spec` and returns the evaluatable
/// solution, or the full list of violated constraints.
pub fn validate(spec: FamilySpec) -> Result<Solution, FamilyError> {
    use FamilySpec as F;
    let mut ck = Checker(Vec::new());
    let (shape, domain, equation) = match &spec {
        &F::DirichletEq1Mixed { radius, boundary_value: h, interface_radius: a } => {
            ck.radius(radius);
            ck.require(h > 0.0 && h.is_finite(), "H", h, "> 0");
            ck.interface(a, radius);
            ck.finish()?;
            (dirichlet_eq1_mixed(radius, h, a), DomainSpec::Disk { radius }, Equation::SignSwitching)
        }
        &F::DirichletEq1TrivialHyp { radius, boundary_value: h, constant: c } => {
            ck.radius(radius);
            ck.require(h < 0.0 && h.is_finite(), "H", h, "< 0");
            let bound = h / (radius * radius);
            ck.require(c > bound && c.is_finite(), "C", c, format!("> {bound}"));
            ck.finish()?;
            (
                Shape::Radial { inner: Radial::Quadratic { c2: c, r0: radius, c0: h }, outer: None },
                DomainSpec::Disk { radius },
                Equation::SignSwitching,
            )
        }
        &F::DirichletEq2Mixed { radius, boundary_value: h, constant: c, interface_radius: a } => {
            ck.radius(radius);
            ck.finite("H", h);
            ck.finite("C", c);
            ck.interface(a, radius);
            ck.finish()?;
            let k = 2.0 * c * a * a;
            (
                Shape::Radial {
                    inner: Radial::Quadratic { c2: c, r0: a, c0: k * (a / radius).ln() + h },
                    outer: Some((Radial::Log { k, r0: radius, c0: h }, a)),
                },
                DomainSpec::Disk { radius },
                Equation::Product,
            )
        }
        &F::DirichletEq2TrivialHyp { radius, boundary_value: h, constant: c } => {
            ck.radius(radius);
            ck.finite("H", h);
            ck.finite("C", c);
            ck.finish()?;
            (
                Shape::Radial { inner: Radial::Quadratic { c2: c, r0: radius, c0: h }, outer: None },
                DomainSpec::Disk { radius },
                Equation::Product,
            )
        }
        &F::NeumannEq1Mixed { radius, boundary_slope: k, interface_radius: a } => {
            ck.radius(radius);
            ck.require(k > 0.0 && k.is_finite(), "K", k, "> 0");
            ck.interface(a, radius);
            ck.finish()?;
            let kr = k * radius;
            (
                Shape::Radial {
                    inner: Radial::Quadratic { c2: kr / (2.0 * a * a), r0: a, c0: 0.0 },
                    outer: Some((Radial::Log { k: kr, r0: a, c0: 0.0 }, a)),
                },
                DomainSpec::Disk { radius },
                Equation::SignSwitching,
            )
        }
        &F::NeumannEq1TrivialHyp { radius, boundary_slope: k, constant: c } => {
            ck.radius(radius);
            ck.finite("K", k);
            if k >= 0.0 {
                let bound = -k * radius / 2.0;
                ck.require(c < bound, "C", c, format!("< {bound}"));
            } else {
                ck.require(c < 0.0, "C", c, "< 0");
            }
            ck.finish()?;
            (
                Shape::Radial {
                    inner: Radial::Quadratic { c2: k / (2.0 * radius), r0: 0.0, c0: c },
                    outer: None,
                },
                DomainSpec::Disk { radius },
                Equation::SignSwitching,
            )
        }
        &F::NeumannEq2Mixed { radius, boundary_slope: k, constant: c, interface_radius: a } => {
            ck.radius(radius);
            ck.finite("K", k);
            ck.finite("C", c);
            ck.interface(a, radius);
            ck.finish()?;
            (neumann_eq2_mixed(radius, k, c, a), DomainSpec::Disk { radius }, Equation::Product)
        }
        &F::CauchyEq1Mixed { radius, boundary_value: h, boundary_slope: k } => {
            ck.radius(radius);
            ck.require(h > 0.0 && h.is_finite(), "H", h, "> 0");
            ck.require(k > 0.0 && k.is_finite(), "K", k, "> 0");
            ck.finish()?;
            let a = cauchy_interface_radius(radius, h, k)?;
            let mut ck = Checker(Vec::new());
            ck.require(
                a > 0.0 && a < radius,
                "a",
                a,
                format!("derived interface radius in (0, {radius})"),
            );
            ck.finish()?;
            (dirichlet_eq1_mixed(radius, h, a), DomainSpec::Disk { radius }, Equation::SignSwitching)
        }
        &F::CauchyEq1TrivialHyp { radius, boundary_value: h, boundary_slope: k } => {
            ck.radius(radius);
            ck.finite("K", k);
            // U must stay negative at both r = R (value H) and r = 0
            // (value H − KR/2).
            ck.require(h <= 0.0, "H", h, "<= 0");
            let center = h - k * radius / 2.0;
            ck.require(center < 0.0, "H - KR/2", center, "< 0");
            ck.finish()?;
            (
                Shape::Radial {
                    inner: Radial::Quadratic { c2: k / (2.0 * radius), r0: radius, c0: h },
                    outer: None,
                },
                DomainSpec::Disk { radius },
                Equation::SignSwitching,
            )
        }
        &F::CauchyEq2Mixed { radius, boundary_value: h, boundary_slope: k, interface_radius: a } => {
            ck.radius(radius);
            ck.finite("H", h);
            ck.finite("K", k);
            ck.interface(a, radius);
            ck.finish()?;
            (neumann_eq2_mixed(radius, k, h, a), DomainSpec::Disk { radius }, Equation::Product)
        }
        &F::HalfPlaneEq1 { constant: c } => {
            ck.require(c >= 0.0 && c.is_finite(), "C", c, ">= 0");
            ck.finish()?;
            (Shape::HalfPlane { c }, DomainSpec::UpperHalfPlane, Equation::SignSwitching)
        }
        &F::WholePlaneEq1 { constant: c, interface_radius: a } => {
            ck.require(c > 0.0 && c.is_finite(), "C", c, "> 0");
            ck.require(a > 0.0 && a.is_finite(), "a", a, "> 0");
            ck.finish()?;
            (
                Shape::Radial {
                    inner: Radial::Quadratic { c2: c, r0: a, c0: 0.0 },
                    outer: Some((Radial::Log { k: 2.0 * c * a * a, r0: a, c0: 0.0 }, a)),
                },
                DomainSpec::Plane,
                Equation::SignSwitching,
            )
        }
        F::GoursatEq1 { f1, f2 } => {
            let (v1, v2) = match (f1.value(0.5), f2.value(0.5)) {
                (Some(v1), Some(v2)) => (v1, v2),
                (v1, v2) => {
                    return Err(FamilyError::GoursatMismatch {
                        f1: v1.unwrap_or(f64::NAN),
                        f2: v2.unwrap_or(f64::NAN),
                    })
                }
            };
            if !((v1 - v2).abs() <= GOURSAT_MATCH_TOL) {
                return Err(FamilyError::GoursatMismatch { f1: v1, f2: v2 });
            }
            (
                Shape::Goursat { f1: f1.clone(), f2: f2.clone(), corner: v1 },
                DomainSpec::GoursatWedge,
                Equation::SignSwitching,
            )
        }
    };
    Ok(Solution { spec, shape, domain, equation })
}

impl Solution {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn kind(&self) -> FamilyKind {
        self.spec.kind()
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn equation(&self) -> Equation {
        self.equation
    }

    pub fn contains(&self, p: Point) -> bool {
        self.domain.contains(p)
    }

    /// Interface radius actually used (derived for the Cauchy family).
    pub fn interface(&self) -> Option<Interface> {
        match &self.shape {
            Shape::Radial { outer: Some((_, a)), .. } => Some(Interface::Circle { radius: *a }),
            Shape::HalfPlane { .. } => Some(Interface::Line { level: PI }),
            _ => None,
        }
    }

    pub fn disk_radius(&self) -> Option<f64> {
        match self.domain {
            DomainSpec::Disk { radius } => Some(radius),
            _ => None,
        }
    }

    fn check(&self, p: Point) -> Result<(), FamilyError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(FamilyError::OutOfDomain(p))
        }
    }

    /// Active branch at `p`; the elliptic branch wins exactly on the interface.
    pub fn branch(&self, p: Point) -> Branch {
        match &self.shape {
            Shape::Radial { outer: Some((_, a)), .. } => {
                if p.norm() < *a {
                    Branch::Inner
                } else {
                    Branch::Outer
                }
            }
            Shape::HalfPlane { .. } => {
                if p.y <= PI {
                    Branch::Inner
                } else {
                    Branch::Outer
                }
            }
            _ => Branch::Whole,
        }
    }

    fn radial(&self, branch: Branch) -> Option<Radial> {
        match (&self.shape, branch) {
            (Shape::Radial { outer: Some((outer, _)), .. }, Branch::Outer) => Some(*outer),
            (Shape::Radial { inner, .. }, _) => Some(*inner),
            _ => None,
        }
    }

    fn value_on(&self, branch: Branch, p: Point) -> Result<f64, FamilyError> {
        match &self.shape {
            Shape::Radial { .. } => Ok(self.radial(branch).unwrap().value(p.norm())),
            Shape::HalfPlane { c } => Ok(match branch {
                Branch::Outer => c * p.x.exp() * (PI - p.y).sinh(),
                _ => c * p.x.exp() * p.y.sin(),
            }),
            Shape::Goursat { f1, f2, corner } => {
                let u = 0.5 * (p.x - p.y);
                let v = 0.5 * (p.x + p.y + 1.0);
                match (f1.value(u), f2.value(v)) {
                    (Some(a), Some(b)) => Ok(a + b - corner),
                    _ => Err(FamilyError::OutOfDomain(p)),
                }
            }
        }
    }

    fn gradient_on(&self, branch: Branch, p: Point) -> Result<(f64, f64), FamilyError> {
        match &self.shape {
            Shape::Radial { .. } => Ok(self.radial(branch).unwrap().gradient(p)),
            Shape::HalfPlane { c } => {
                let e = c * p.x.exp();
                Ok(match branch {
                    Branch::Outer => (e * (PI - p.y).sinh(), -e * (PI - p.y).cosh()),
                    _ => (e * p.y.sin(), e * p.y.cos()),
                })
            }
            Shape::Goursat { f1, f2, .. } => {
                let u = 0.5 * (p.x - p.y);
                let v = 0.5 * (p.x + p.y + 1.0);
                match (f1.derivative(u), f2.derivative(v)) {
                    (Some(d1), Some(d2)) => Ok((0.5 * (d1 + d2), 0.5 * (d2 - d1))),
                    _ => Err(FamilyError::OutOfDomain(p)),
                }
            }
        }
    }

    pub fn eval(&self, p: Point) -> Result<f64, FamilyError> {
        self.check(p)?;
        self.value_on(self.branch(p), p)
    }

    /// Evaluation at polar coordinates; radial families use `r` directly so
    /// grid rows on `r = R` or `r = a` are not perturbed by `hypot` rounding.
    pub fn eval_polar(&self, r: f64, theta: f64) -> Result<f64, FamilyError> {
        let p = Point::from_polar(r, theta);
        match &self.shape {
            Shape::Radial { outer, .. } => {
                if let DomainSpec::Disk { radius } = self.domain {
                    if !(r >= 0.0 && r <= radius) {
                        return Err(FamilyError::OutOfDomain(p));
                    }
                }
                let radial = match outer {
                    Some((o, a)) if r >= *a => *o,
                    _ => self.radial(Branch::Inner).unwrap(),
                };
                Ok(radial.value(r))
            }
            _ => self.eval(p),
        }
    }

    pub fn grad(&self, p: Point) -> Result<(f64, f64), FamilyError> {
        self.check(p)?;
        self.gradient_on(self.branch(p), p)
    }

    /// Analytic gradients of both branch formulas at `p`, inner first.
    /// `None` for single-formula families.
    pub fn branch_gradients(&self, p: Point) -> Option<[(f64, f64); 2]> {
        self.interface()?;
        Some([
            self.gradient_on(Branch::Inner, p).ok()?,
            self.gradient_on(Branch::Outer, p).ok()?,
        ])
    }

    /// Values of both branch formulas at `p`, inner first.
    pub fn branch_values(&self, p: Point) -> Option<[f64; 2]> {
        self.interface()?;
        Some([self.value_on(Branch::Inner, p).ok()?, self.value_on(Branch::Outer, p).ok()?])
    }

    /// Operator annihilated by the active branch formula.
    pub fn branch_operator(&self, p: Point) -> OperatorTag {
        let branch = self.branch(p);
        match &self.shape {
            Shape::Radial { .. } => self.radial(branch).unwrap().operator(),
            Shape::HalfPlane { c } if *c == 0.0 => OperatorTag::BothDegenerate,
            Shape::HalfPlane { .. } => match branch {
                Branch::Outer => OperatorTag::Wave,
                _ => OperatorTag::Laplace,
            },
            Shape::Goursat { f1, f2, .. } => {
                if f1.is_affine() && f2.is_affine() {
                    OperatorTag::BothDegenerate
                } else {
                    OperatorTag::Wave
                }
            }
        }
    }

    pub fn on_interface(&self, p: Point) -> bool {
        self.interface()
            .is_some_and(|i| i.distance(p) <= INTERFACE_TAG_TOL * i.scale())
    }

    /// Governing operator at `p`.
    ///
    /// Equation-(1) families are tagged by the sign of `U`; equation-(2)
    /// families by the factor their active branch annihilates.
    pub fn operator_tag(&self, p: Point) -> Result<OperatorTag, FamilyError> {
        let u = self.eval(p)?;
        if self.on_interface(p) {
            return Ok(OperatorTag::Interface);
        }
        Ok(match self.equation {
            Equation::SignSwitching => OperatorTag::from_sign(u),
            Equation::Product => self.branch_operator(p),
        })
    }

    /// Points on the interface, `n` of them, evenly spaced in angle (circle)
    /// or across `x ∈ [-1, 1]` (line).
    pub fn interface_samples(&self, n: usize) -> Vec<Point> {
        match self.interface() {
            Some(Interface::Circle { radius }) => (0..n)
                .map(|j| Point::from_polar(radius, std::f64::consts::TAU * j as f64 / n as f64))
                .collect(),
            Some(Interface::Line { level }) => (0..n)
                .map(|j| {
                    let x = if n > 1 { -1.0 + 2.0 * j as f64 / (n - 1) as f64 } else { 0.0 };
                    Point::new(x, level)
                })
                .collect(),
            None => Vec::new(),
        }
    }

    /// Radial derivative `∂U/∂r` at `(r, θ)`.
    pub fn radial_derivative(&self, r: f64, theta: f64) -> Result<f64, FamilyError> {
        let p = Point::from_polar(r, theta);
        let (ux, uy) = self.grad(p)?;
        let (s, c) = theta.sin_cos();
        Ok(ux * c + uy * s)
    }
}
