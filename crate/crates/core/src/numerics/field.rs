//! Field abstractions consumed by the verification routines.

use crate::families::{Equation, Interface, OperatorTag, Solution};
use crate::geometry::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A scalar field on a closed domain.
pub trait Field: Sync {
    fn value(&self, p: Point) -> f64;
    fn contains(&self, p: Point) -> bool;
}

/// A point on a type-change interface with the unit normal pointing from
/// the inner (`−`) side to the outer (`+`) side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSample {
    pub point: Point,
    pub normal: (f64, f64),
}

/// A field that declares which operator governs each point.
pub trait TaggedField: Field {
    fn label(&self) -> String;

    fn equation(&self) -> Equation;

    /// Declared operator at `p`.
    fn operator(&self, p: Point) -> OperatorTag;

    /// Distance to the declared type-change interface.
    fn interface_distance(&self, _p: Point) -> f64 {
        f64::INFINITY
    }

    fn interface_samples(&self, _n: usize) -> Vec<InterfaceSample> {
        Vec::new()
    }

    /// Analytic gradients of the `−` and `+` branch formulas at `p`.
    fn branch_gradients(&self, _p: Point) -> Option<[(f64, f64); 2]> {
        None
    }
}

impl Field for Solution {
    fn value(&self, p: Point) -> f64 {
        self.eval(p).unwrap_or(f64::NAN)
    }

    fn contains(&self, p: Point) -> bool {
        Solution::contains(self, p)
    }
}

impl TaggedField for Solution {
    fn label(&self) -> String {
        self.kind().name().to_string()
    }

    fn equation(&self) -> Equation {
        Solution::equation(self)
    }

    fn operator(&self, p: Point) -> OperatorTag {
        if self.on_interface(p) {
            OperatorTag::Interface
        } else {
            self.branch_operator(p)
        }
    }

    fn interface_distance(&self, p: Point) -> f64 {
        self.interface().map_or(f64::INFINITY, |i| i.distance(p))
    }

    fn interface_samples(&self, n: usize) -> Vec<InterfaceSample> {
        let normal_at = |p: Point| match self.interface() {
            Some(Interface::Circle { .. }) => {
                let r = p.norm();
                (p.x / r, p.y / r)
            }
            _ => (0.0, 1.0),
        };
        Solution::interface_samples(self, n)
            .into_iter()
            .map(|point| InterfaceSample { point, normal: normal_at(point) })
            .collect()
    }

    fn branch_gradients(&self, p: Point) -> Option<[(f64, f64); 2]> {
        Solution::branch_gradients(self, p)
    }
}

type ValueFn = Box<dyn Fn(Point) -> f64 + Send + Sync>;
type TagFn = Box<dyn Fn(Point) -> OperatorTag + Send + Sync>;
type DomainFn = Box<dyn Fn(Point) -> bool + Send + Sync>;

/// Closure-backed tagged field, for ad-hoc fields and negative controls.
pub struct FnField {
    label: String,
    value: ValueFn,
    tag: Option<TagFn>,
    domain: DomainFn,
    equation: Equation,
    interface: Option<(ValueFn, Vec<InterfaceSample>)>,
}

impl FnField {
    /// Equation-(1) field tagged by the sign of its value, defined everywhere.
    pub fn new(label: impl Into<String>, value: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            value: Box::new(value),
            tag: None,
            domain: Box::new(|_| true),
            equation: Equation::SignSwitching,
            interface: None,
        }
    }

    /// Replaces the sign-determined tag with an explicit declaration.
    pub fn tagged(mut self, tag: impl Fn(Point) -> OperatorTag + Send + Sync + 'static) -> Self {
        self.tag = Some(Box::new(tag));
        self
    }

    pub fn on_domain(mut self, domain: impl Fn(Point) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Box::new(domain);
        self
    }

    pub fn with_equation(mut self, equation: Equation) -> Self {
        self.equation = equation;
        self
    }

    pub fn with_interface(
        mut self,
        distance: impl Fn(Point) -> f64 + Send + Sync + 'static,
        samples: Vec<InterfaceSample>,
    ) -> Self {
        self.interface = Some((Box::new(distance), samples));
        self
    }
}

impl Field for FnField {
    fn value(&self, p: Point) -> f64 {
        (self.value)(p)
    }

    fn contains(&self, p: Point) -> bool {
        (self.domain)(p)
    }
}

impl TaggedField for FnField {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn equation(&self) -> Equation {
        self.equation
    }

    fn operator(&self, p: Point) -> OperatorTag {
        match &self.tag {
            Some(tag) => tag(p),
            None => OperatorTag::from_sign(self.value(p)),
        }
    }

    fn interface_distance(&self, p: Point) -> f64 {
        self.interface.as_ref().map_or(f64::INFINITY, |(d, _)| d(p))
    }

    fn interface_samples(&self, n: usize) -> Vec<InterfaceSample> {
        self.interface
            .as_ref()
            .map(|(_, s)| s.iter().copied().take(n).collect())
            .unwrap_or_default()
    }
}

/// `base + perturbation`, keeping every declaration of `base`.
pub struct Perturbed<'a, F: ?Sized> {
    base: &'a F,
    value: ValueFn,
    gradient: Box<dyn Fn(Point) -> (f64, f64) + Send + Sync>,
}

impl<'a, F: TaggedField + ?Sized> Perturbed<'a, F> {
    pub fn new(
        base: &'a F,
        value: impl Fn(Point) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        Self { base, value: Box::new(value), gradient: Box::new(gradient) }
    }
}

impl<F: TaggedField + ?Sized> Field for Perturbed<'_, F> {
    fn value(&self, p: Point) -> f64 {
        self.base.value(p) + (self.value)(p)
    }

    fn contains(&self, p: Point) -> bool {
        self.base.contains(p)
    }
}

impl<F: TaggedField + ?Sized> TaggedField for Perturbed<'_, F> {
    fn label(&self) -> String {
        format!("{} (perturbed)", self.base.label())
    }

    fn equation(&self) -> Equation {
        self.base.equation()
    }

    fn operator(&self, p: Point) -> OperatorTag {
        self.base.operator(p)
    }

    fn interface_distance(&self, p: Point) -> f64 {
        self.base.interface_distance(p)
    }

    fn interface_samples(&self, n: usize) -> Vec<InterfaceSample> {
        self.base.interface_samples(n)
    }

    fn branch_gradients(&self, p: Point) -> Option<[(f64, f64); 2]> {
        let (gx, gy) = (self.gradient)(p);
        self.base
            .branch_gradients(p)
            .map(|[a, b]| [(a.0 + gx, a.1 + gy), (b.0 + gx, b.1 + gy)])
    }
}

/// Sample grids for verification and export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GridSpec {
    /// `r_i = r_max·i/(n_r − 1)`, `θ_j = 2πj/n_theta`; the center appears once.
    Polar { n_r: usize, n_theta: usize, r_max: f64 },
    /// Uniform tensor grid including both end points in each direction.
    Cartesian { nx: usize, ny: usize, x_min: f64, x_max: f64, y_min: f64, y_max: f64 },
}

impl GridSpec {
    pub fn nodes(&self) -> Vec<Point> {
        match *self {
            GridSpec::Polar { n_r, n_theta, r_max } => {
                let mut out = Vec::with_capacity(n_r * n_theta);
                for i in 0..n_r {
                    let r = if n_r > 1 { r_max * i as f64 / (n_r - 1) as f64 } else { 0.0 };
                    if i == 0 {
                        out.push(Point::ORIGIN);
                        continue;
                    }
                    for j in 0..n_theta {
                        out.push(Point::from_polar(r, TAU * j as f64 / n_theta as f64));
                    }
                }
                out
            }
            GridSpec::Cartesian { nx, ny, x_min, x_max, y_min, y_max } => {
                let coord = |lo: f64, hi: f64, n: usize, i: usize| {
                    if n > 1 {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    } else {
                        0.5 * (lo + hi)
                    }
                };
                let mut out = Vec::with_capacity(nx * ny);
                for j in 0..ny {
                    for i in 0..nx {
                        out.push(Point::new(coord(x_min, x_max, nx, i), coord(y_min, y_max, ny, j)));
                    }
                }
                out
            }
        }
    }

    /// Polar coordinates of each node when the grid is polar.
    pub fn polar_nodes(&self) -> Option<Vec<(f64, f64)>> {
        match *self {
            GridSpec::Polar { n_r, n_theta, r_max } => {
                let mut out = Vec::with_capacity(n_r * n_theta);
                for i in 0..n_r {
                    let r = if n_r > 1 { r_max * i as f64 / (n_r - 1) as f64 } else { 0.0 };
                    if i == 0 {
                        out.push((0.0, 0.0));
                        continue;
                    }
                    for j in 0..n_theta {
                        out.push((r, TAU * j as f64 / n_theta as f64));
                    }
                }
                Some(out)
            }
            GridSpec::Cartesian { .. } => None,
        }
    }
}

/// Natural sampling grid for a family: polar over the disk for disk
/// families, otherwise a Cartesian box covering the interesting part of the
/// unbounded domain.
pub fn natural_grid(solution: &Solution, n: usize) -> GridSpec {
    use crate::geometry::DomainSpec;
    match solution.domain() {
        DomainSpec::Disk { radius } => GridSpec::Polar { n_r: n, n_theta: n, r_max: radius },
        DomainSpec::UpperHalfPlane => GridSpec::Cartesian {
            nx: n,
            ny: n,
            x_min: -1.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: TAU,
        },
        DomainSpec::GoursatWedge => GridSpec::Cartesian {
            nx: n,
            ny: n,
            x_min: -1.5,
            x_max: 2.5,
            y_min: -0.5,
            y_max: 1.5,
        },
        DomainSpec::Plane | DomainSpec::TricomiUnit => GridSpec::Cartesian {
            nx: n,
            ny: n,
            x_min: -1.0,
            x_max: 1.0,
            y_min: -1.0,
            y_max: 1.0,
        },
    }
}
