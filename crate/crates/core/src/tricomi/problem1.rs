//! Problem 1: `φ` on `σ` → harmonic field in `D1` → `ν` → wave field in `D2`.

use super::{BoundaryPhi, KernelConstantMode, NuFunction, TricomiError};
use crate::families::{Equation, OperatorTag};
use crate::geometry::{classify_tricomi, nearest_sigma_angle, Point, Region, DEFAULT_BOUNDARY_TOL};
use crate::numerics::{quad_gl, quad_gl_sinh, Field, InterfaceSample, TaggedField, PANEL_ORDER};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub const MIN_HARMONIC_QUAD: usize = 32;
pub const MIN_NU_QUAD: usize = 64;
/// Largest change under node doubling accepted by [`harmonic_eval_d1`].
pub const QUAD_DOUBLING_TOL: f64 = 1e-6;
/// Evaluations closer than this to `σ` use twice the panels.
pub const NEAR_SIGMA: f64 = 0.01;
/// Integration limits near `A` and `B` are pulled in by this much.
pub const ENDPOINT_CLIP: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-12;
/// Allowed overshoot of a d'Alembert interval past `[−1, 1]`.
const ESCAPE_TOL: f64 = 1e-8;
/// Offset used to extrapolate gradients onto `σ`.
const SIGMA_STEP: f64 = 1e-3;

fn in_closed_half_disk(p: Point) -> bool {
    p.is_finite() && p.y >= 0.0 && p.norm() <= 1.0 + 1e-12
}

/// Dirichlet Green's function of the upper unit half-disk,
/// `G = ln(|ξ* − x|·|ξ⁻ − x| / (|ξ⁺ − x|·|ξ − x|))` with `ξ⁻` the mirror
/// image of `ξ`, `ξ* = ξ/|ξ|²` and `ξ⁺ = ξ⁻/|ξ⁻|²`. Positive inside,
/// zero on the boundary.
pub fn greens_half_disk(x: Point, xi: Point) -> Result<f64, TricomiError> {
    for p in [x, xi] {
        if !in_closed_half_disk(p) {
            return Err(TricomiError::OutOfDomain(p));
        }
    }
    if x.distance(xi) < SINGULAR_TOL {
        return Err(TricomiError::SingularPoint { x, xi });
    }
    let s = xi.norm_sq();
    if s == 0.0 {
        return Ok(0.0);
    }
    let xi_m = xi.conj();
    // |ξ* − x| / |ξ⁺ − x| = |ξ − |ξ|²x| / |ξ⁻ − |ξ|²x|, finite as ξ → 0
    let num = xi.offset(-s * x.x, -s * x.y).norm() * xi_m.distance(x);
    let den = xi_m.offset(-s * x.x, -s * x.y).norm() * xi.distance(x);
    Ok((num / den).ln())
}

/// Squared distances from `e^{iθ}` to `p` and to its mirror image.
fn arc_distances(p: Point, theta: f64) -> (f64, f64, f64, f64) {
    let (s, c) = theta.sin_cos();
    let dx = c - p.x;
    (dx * dx + (s - p.y).powi(2), dx * dx + (s + p.y).powi(2), c, s)
}

/// `−(1/2π)·∂G/∂n` on `σ`: `(1 − |p|²)(1/|s − p|² − 1/|s − p⁻|²)/(2π)`.
fn poisson_half_disk(p: Point, theta: f64) -> f64 {
    let (d1, d2, _, s) = arc_distances(p, theta);
    let r = p.norm();
    (1.0 - r) * (1.0 + r) * 4.0 * s * p.y / (d1 * d2) / TAU
}

fn poisson_half_disk_grad(p: Point, theta: f64) -> (f64, f64) {
    let (d1, d2, c, s) = arc_distances(p, theta);
    let r = p.norm();
    let w = (1.0 - r) * (1.0 + r);
    let diff = 1.0 / d1 - 1.0 / d2;
    // ∇d1 = −2(s − p), ∇d2 = −2(c − px, −(s + py))
    let gx = -2.0 * p.x * diff + w * (2.0 * (c - p.x) / (d1 * d1) - 2.0 * (c - p.x) / (d2 * d2));
    let gy = -2.0 * p.y * diff + w * (2.0 * (s - p.y) / (d1 * d1) + 2.0 * (s + p.y) / (d2 * d2));
    (gx / TAU, gy / TAU)
}

/// `∫₀^π φ(θ)·k(θ) dθ` for a kernel `k` with singularities at `center ± i·d`.
///
/// Uniform panels are used while the singularity is at least one panel
/// width away from the axis; closer than that the sinh-stretched variable
/// takes over. Tabulated `φ` is integrated piece by piece between its
/// breakpoints with `n/16` nodes per piece.
fn arc_integral<F: FnMut(f64) -> f64>(
    phi: &BoundaryPhi,
    mut g: F,
    center: f64,
    d: f64,
    n: usize,
) -> Result<f64, TricomiError> {
    let panels = n.div_ceil(PANEL_ORDER);
    let stretched = d < PI / panels as f64;
    let mut piece = |a: f64, b: f64, m: usize| {
        if stretched {
            quad_gl_sinh(&mut g, a, b, center, d, m)
        } else {
            quad_gl(&mut g, a, b, m)
        }
    };
    match phi.breakpoints() {
        None => Ok(piece(0.0, PI, n)?),
        Some(ts) => {
            let mut total = 0.0;
            for w in ts.windows(2) {
                let (a, b) = (w[0].max(0.0), w[1].min(PI));
                if b > a {
                    total += piece(a, b, panels)?;
                }
            }
            Ok(total)
        }
    }
}

fn check_d1(p: Point, n_quad: usize) -> Result<(), TricomiError> {
    if n_quad < MIN_HARMONIC_QUAD {
        return Err(TricomiError::BadArgument {
            name: "n_quad",
            reason: format!("{n_quad} < {MIN_HARMONIC_QUAD}"),
        });
    }
    if classify_tricomi(p, DEFAULT_BOUNDARY_TOL) != Region::D1Upper {
        return Err(TricomiError::OutOfDomain(p));
    }
    Ok(())
}

fn d1_layout(p: Point, n_quad: usize) -> (f64, f64, usize) {
    let r = p.norm();
    let n = if 1.0 - r < NEAR_SIGMA { 2 * n_quad } else { n_quad };
    (p.y.atan2(p.x), -r.ln(), n)
}

fn doubling_checked(n_quad: usize, coarse: f64, fine: f64) -> Result<f64, TricomiError> {
    let change = (fine - coarse).abs();
    if !(change <= QUAD_DOUBLING_TOL) {
        return Err(TricomiError::QuadratureUnderResolved { n_quad, change });
    }
    Ok(coarse)
}

/// Harmonic field in `D1` with data `φ` on `σ` and zero on the diameter,
/// from the Poisson-type representation over `σ`. The result at `n_quad`
/// nodes is checked against `2·n_quad` nodes.
pub fn harmonic_eval_d1(phi: &BoundaryPhi, p: Point, n_quad: usize) -> Result<f64, TricomiError> {
    check_d1(p, n_quad)?;
    let (center, d, n) = d1_layout(p, n_quad);
    let g = |t: f64| phi.value(t) * poisson_half_disk(p, t);
    let coarse = arc_integral(phi, g, center, d, n)?;
    let fine = arc_integral(phi, g, center, d, 2 * n)?;
    doubling_checked(n_quad, coarse, fine)
}

/// Gradient of [`harmonic_eval_d1`], differentiated under the integral.
pub fn harmonic_grad_d1(phi: &BoundaryPhi, p: Point, n_quad: usize) -> Result<(f64, f64), TricomiError> {
    check_d1(p, n_quad)?;
    let (center, d, n) = d1_layout(p, n_quad);
    let gx = |t: f64| phi.value(t) * poisson_half_disk_grad(p, t).0;
    let gy = |t: f64| phi.value(t) * poisson_half_disk_grad(p, t).1;
    let ux = doubling_checked(n_quad, arc_integral(phi, gx, center, d, n)?, arc_integral(phi, gx, center, d, 2 * n)?)?;
    let uy = doubling_checked(n_quad, arc_integral(phi, gy, center, d, n)?, arc_integral(phi, gy, center, d, 2 * n)?)?;
    Ok((ux, uy))
}

/// `ν(x) = c(x)·∫₀^π φ(θ) sin θ / (1 − 2x cos θ + x²)² dθ` with
/// `c(x) = k(1 − x²)/π`, `k` set by `mode`.
pub fn nu_eval(phi: &BoundaryPhi, x: f64, n_quad: usize, mode: KernelConstantMode) -> Result<f64, TricomiError> {
    if !(x.abs() < 1.0) {
        return Err(TricomiError::OutOfRange { name: "x", value: x, range: "(-1, 1)" });
    }
    if n_quad < MIN_NU_QUAD {
        return Err(TricomiError::BadArgument { name: "n_quad", reason: format!("{n_quad} < {MIN_NU_QUAD}") });
    }
    let kernel = |t: f64| {
        let (s, c) = t.sin_cos();
        // 1 − 2x cos θ + x² without cancellation near θ = 0, x → 1
        let q = (x - c).powi(2) + s * s;
        phi.value(t) * s / (q * q)
    };
    let center = if x >= 0.0 { 0.0 } else { PI };
    let integral = arc_integral(phi, kernel, center, -x.abs().ln(), n_quad)?;
    Ok(mode.factor() * (1.0 - x) * (1.0 + x) / PI * integral)
}

/// A quadrature over a possibly clipped interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClippedIntegral {
    pub value: f64,
    /// Integration limits actually used.
    pub lo: f64,
    pub hi: f64,
    /// Whether a limit was pulled in to `±(1 − ENDPOINT_CLIP)`.
    pub clipped: bool,
}

fn clip(t: f64) -> f64 {
    t.clamp(-1.0 + ENDPOINT_CLIP, 1.0 - ENDPOINT_CLIP)
}

fn clipped_integral(nu: &NuFunction, lo: f64, hi: f64, n_quad: usize) -> Result<ClippedIntegral, TricomiError> {
    if lo < -1.0 - ESCAPE_TOL || hi > 1.0 + ESCAPE_TOL {
        return Err(TricomiError::IntervalEscapesData { lo, hi });
    }
    let (a, b) = (clip(lo), clip(hi));
    let clipped = a != lo || b != hi;
    let value = if a < b { quad_gl(|t| nu.value(t), a, b, n_quad)? } else { 0.0 };
    Ok(ClippedIntegral { value, lo: a, hi: b, clipped })
}

fn in_closed_d2(p: Point) -> bool {
    p.y <= DEFAULT_BOUNDARY_TOL
        && matches!(
            classify_tricomi(p, DEFAULT_BOUNDARY_TOL),
            Region::D2Triangle | Region::OnCharAC | Region::OnCharBC | Region::OnDiameter
        )
}

/// d'Alembert extension `U = ½∫_{x−y}^{x+y} ν(t) dt` into the closed
/// triangle `D2`. The returned limits are the ordered (and clipped) pair
/// `x + y ≤ x − y`; the value carries the orientation sign.
pub fn dalembert_extend(nu: &NuFunction, p: Point, n_quad: usize) -> Result<ClippedIntegral, TricomiError> {
    if !in_closed_d2(p) {
        return Err(TricomiError::OutOfDomain(p));
    }
    let (a, b) = (p.x + p.y, p.x - p.y);
    let (lo, hi, sign) = if a <= b { (a, b, -0.5) } else { (b, a, 0.5) };
    let mut out = clipped_integral(nu, lo, hi, n_quad)?;
    out.value *= sign;
    Ok(out)
}

/// `(½(ν(x+y) − ν(x−y)), ½(ν(x+y) + ν(x−y)))`.
pub fn dalembert_grad(nu: &NuFunction, p: Point) -> Result<(f64, f64), TricomiError> {
    if !in_closed_d2(p) {
        return Err(TricomiError::OutOfDomain(p));
    }
    let plus = nu.value(clip(p.x + p.y));
    let minus = nu.value(clip(p.x - p.y));
    Ok((0.5 * (plus - minus), 0.5 * (plus + minus)))
}

/// Trace on `AC`: `f(x) = −½∫_{−1}^{2x+1} ν(t) dt`, exactly zero at `x = −1`.
pub fn trace_ac(nu: &NuFunction, x: f64, n_quad: usize) -> Result<ClippedIntegral, TricomiError> {
    if !(-1.0..=0.0).contains(&x) {
        return Err(TricomiError::OutOfRange { name: "x", value: x, range: "[-1, 0]" });
    }
    if x == -1.0 {
        return Ok(ClippedIntegral { value: 0.0, lo: -1.0, hi: -1.0, clipped: false });
    }
    let mut out = clipped_integral(nu, -1.0, 2.0 * x + 1.0, n_quad)?;
    out.value *= -0.5;
    Ok(out)
}

/// The assembled problem-1 field on the closed Tricomi domain: harmonic in
/// `D1`, d'Alembert in `D2`, `φ` on `σ` and zero on the diameter.
#[derive(Debug, Clone)]
pub struct TopDownField {
    phi: BoundaryPhi,
    n_quad: usize,
    mode: KernelConstantMode,
    nu: NuFunction,
}

impl TopDownField {
    pub fn new(phi: BoundaryPhi, n_quad: usize, mode: KernelConstantMode) -> Result<Self, TricomiError> {
        let nu = NuFunction::analytic(phi.clone(), n_quad, mode)?;
        Ok(Self { phi, n_quad, mode, nu })
    }

    pub fn phi(&self) -> &BoundaryPhi {
        &self.phi
    }

    pub fn mode(&self) -> KernelConstantMode {
        self.mode
    }

    pub fn n_quad(&self) -> usize {
        self.n_quad
    }

    pub fn nu(&self) -> &NuFunction {
        &self.nu
    }

    pub fn eval(&self, p: Point) -> Result<f64, TricomiError> {
        match classify_tricomi(p, DEFAULT_BOUNDARY_TOL) {
            Region::D1Upper => harmonic_eval_d1(&self.phi, p, self.n_quad),
            Region::D2Triangle | Region::OnCharAC | Region::OnCharBC => {
                Ok(dalembert_extend(&self.nu, p, self.n_quad)?.value)
            }
            Region::OnDiameter => Ok(0.0),
            Region::OnSigma => Ok(self.phi.value(nearest_sigma_angle(p))),
            Region::Outside => Err(TricomiError::OutOfDomain(p)),
        }
    }

    /// Gradient; on `σ` it is extrapolated from inside the arc, on the
    /// diameter it is `(0, ν(x))`.
    pub fn grad(&self, p: Point) -> Result<(f64, f64), TricomiError> {
        match classify_tricomi(p, DEFAULT_BOUNDARY_TOL) {
            Region::D1Upper => harmonic_grad_d1(&self.phi, p, self.n_quad),
            Region::D2Triangle | Region::OnCharAC | Region::OnCharBC => dalembert_grad(&self.nu, p),
            Region::OnDiameter => Ok((0.0, self.nu.value(clip(p.x)))),
            Region::OnSigma => {
                // linear extrapolation from two points inside the arc
                let theta = nearest_sigma_angle(p).clamp(1e-2, PI - 1e-2);
                let (ax, ay) = harmonic_grad_d1(&self.phi, Point::from_polar(1.0 - SIGMA_STEP, theta), self.n_quad)?;
                let (bx, by) =
                    harmonic_grad_d1(&self.phi, Point::from_polar(1.0 - 2.0 * SIGMA_STEP, theta), self.n_quad)?;
                Ok((2.0 * ax - bx, 2.0 * ay - by))
            }
            Region::Outside => Err(TricomiError::OutOfDomain(p)),
        }
    }

    pub fn trace_ac(&self, x: f64) -> Result<f64, TricomiError> {
        Ok(trace_ac(&self.nu, x, self.n_quad)?.value)
    }
}

impl Field for TopDownField {
    fn value(&self, p: Point) -> f64 {
        self.eval(p).unwrap_or(f64::NAN)
    }

    fn contains(&self, p: Point) -> bool {
        classify_tricomi(p, DEFAULT_BOUNDARY_TOL).in_closed_domain()
    }
}

impl TaggedField for TopDownField {
    fn label(&self) -> String {
        format!("tricomi1:{}:{}", self.phi.name(), self.mode.as_str())
    }

    fn equation(&self) -> Equation {
        Equation::SignSwitching
    }

    fn operator(&self, p: Point) -> OperatorTag {
        OperatorTag::from_sign(self.value(p))
    }

    /// The diameter `AB` is the type-change line.
    fn interface_distance(&self, p: Point) -> f64 {
        let x = p.x.clamp(-1.0, 1.0);
        p.distance(Point::new(x, 0.0))
    }

    fn interface_samples(&self, n: usize) -> Vec<InterfaceSample> {
        (1..=n)
            .map(|k| InterfaceSample {
                point: Point::new(-0.9 + 1.8 * (k - 1) as f64 / (n.max(2) - 1) as f64, 0.0),
                normal: (0.0, 1.0),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomi::PhiTable;
    use std::f64::consts::FRAC_PI_2;
    use crate::numerics::{verify_solution, GridSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_d1(rng: &mut ChaCha8Rng) -> Point {
        loop {
            let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0));
            if p.norm() < 0.99 && p.y > 0.01 {
                return p;
            }
        }
    }

    #[test]
    fn greens_function_vanishes_on_the_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let xi = random_d1(&mut rng);
            let on_diameter = Point::new(rng.gen_range(-1.0..1.0), 0.0);
            let on_arc = Point::from_polar(1.0, rng.gen_range(0.0..PI));
            assert!(greens_half_disk(on_diameter, xi).unwrap().abs() <= 1e-10);
            assert!(greens_half_disk(on_arc, xi).unwrap().abs() <= 1e-10);
            assert!(greens_half_disk(random_d1(&mut rng), xi).unwrap() > 0.0);
        }
    }

    #[test]
    fn greens_function_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let (x, xi) = (random_d1(&mut rng), random_d1(&mut rng));
            let g = greens_half_disk(x, xi).unwrap();
            assert!((g - greens_half_disk(xi, x).unwrap()).abs() <= 1e-10 * g.abs().max(1.0));
        }
    }

    #[test]
    fn greens_function_errors() {
        let p = Point::new(0.2, 0.3);
        assert!(matches!(greens_half_disk(p, p), Err(TricomiError::SingularPoint { .. })));
        assert!(matches!(
            greens_half_disk(Point::new(0.2, -0.3), p),
            Err(TricomiError::OutOfDomain(_))
        ));
    }

    #[test]
    fn normal_derivative_matches_greens_function() {
        // −(1/2π) ∂G/∂n on σ, by a centered difference along the radius
        let xi = Point::new(0.3, 0.4);
        for theta in [0.4, 1.3, 2.5] {
            let h = 1e-5;
            let inner = greens_half_disk(Point::from_polar(1.0 - h, theta), xi).unwrap();
            let outer_estimate = -inner / h; // G = 0 on σ
            let expected = -TAU * poisson_half_disk(xi, theta);
            assert!((outer_estimate - expected).abs() < 1e-3 * expected.abs(), "{theta}");
        }
    }

    #[test]
    fn harmonic_eval_examples() {
        let p = Point::new(0.3, 0.4);
        assert!((harmonic_eval_d1(&BoundaryPhi::SinTheta, p, 256).unwrap() - 0.4).abs() <= 1e-8);
        assert!((harmonic_eval_d1(&BoundaryPhi::Sin2Theta, p, 256).unwrap() - 0.24).abs() <= 1e-8);
        let near = Point::new(0.0, 0.999);
        assert!((harmonic_eval_d1(&BoundaryPhi::SinTheta, near, 512).unwrap() - 0.999).abs() <= 1e-5);
        assert!(matches!(
            harmonic_eval_d1(&BoundaryPhi::SinTheta, Point::new(0.0, -0.5), 256),
            Err(TricomiError::OutOfDomain(_))
        ));
        assert!(matches!(
            harmonic_eval_d1(&BoundaryPhi::SinTheta, p, 16),
            Err(TricomiError::BadArgument { .. })
        ));
    }

    #[test]
    fn tabulated_phi_is_integrated_between_breakpoints() {
        let thetas: Vec<f64> = (0..=180).map(|k| PI * k as f64 / 180.0).collect();
        let values = thetas.iter().map(|t| t.sin()).collect();
        let phi = BoundaryPhi::Table(PhiTable::new(thetas, values).unwrap());
        // kinks of the interpolant sit close to these points
        for p in [Point::new(0.5, 0.8), Point::new(0.0, 0.95), Point::new(-0.6, 0.75)] {
            let coarse = harmonic_grad_d1(&phi, p, 256).unwrap();
            let fine = harmonic_grad_d1(&phi, p, 1024).unwrap();
            assert!((coarse.0 - fine.0).abs() <= 1e-10 && (coarse.1 - fine.1).abs() <= 1e-10);
            // interpolation error of sin θ at one-degree spacing
            assert!((harmonic_eval_d1(&phi, p, 256).unwrap() - p.y).abs() <= 1e-4);
        }
        for x in [-0.99, -0.5, 0.0, 0.7, 0.999] {
            let nu = nu_eval(&phi, x, 256, KernelConstantMode::CorrectedConstant).unwrap();
            assert!((nu - 1.0).abs() <= 1e-4, "nu({x}) = {nu}");
        }
    }

    #[test]
    fn harmonic_eval_matches_exact_fields_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let p = random_d1(&mut rng);
            let u = harmonic_eval_d1(&BoundaryPhi::SinTheta, p, 256).unwrap();
            let v = harmonic_eval_d1(&BoundaryPhi::Sin2Theta, p, 256).unwrap();
            assert!((u - p.y).abs() <= 1e-9, "{p}");
            assert!((v - 2.0 * p.x * p.y).abs() <= 1e-9, "{p}");
            let (gx, gy) = harmonic_grad_d1(&BoundaryPhi::Sin2Theta, p, 256).unwrap();
            assert!((gx - 2.0 * p.y).abs() <= 1e-7 && (gy - 2.0 * p.x).abs() <= 1e-7, "{p}");
        }
    }

    #[test]
    fn under_resolved_quadrature_is_reported() {
        // a few nodes per table piece cannot follow a kernel peak 1e-6 wide
        let p = Point::from_polar(1.0 - 1e-6, FRAC_PI_2 + 3e-3);
        let rough = BoundaryPhi::Table(
            PhiTable::new(
                (0..=400).map(|k| PI * k as f64 / 400.0).collect(),
                (0..=400).map(|k| if k % 2 == 1 { 1.0 } else { 0.0 }).collect(),
            )
            .unwrap(),
        );
        assert!(matches!(
            harmonic_eval_d1(&rough, p, 32),
            Err(TricomiError::QuadratureUnderResolved { .. })
        ));
    }

    #[test]
    fn nu_eval_examples() {
        let paper = nu_eval(&BoundaryPhi::SinTheta, 0.0, 256, KernelConstantMode::PaperConstant).unwrap();
        assert!((paper - 2.0).abs() <= 1e-12);
        for x in [-0.999, -0.9, -0.5, 0.0, 0.3, 0.95, 0.99999] {
            let nu = nu_eval(&BoundaryPhi::SinTheta, x, 256, KernelConstantMode::CorrectedConstant).unwrap();
            assert!((nu - 1.0).abs() <= 1e-8, "x = {x}: {nu}");
        }
        let nu = nu_eval(&BoundaryPhi::Sin2Theta, 0.5, 256, KernelConstantMode::CorrectedConstant).unwrap();
        assert!((nu - 1.0).abs() <= 1e-8);
        assert!(nu_eval(&BoundaryPhi::SinTheta, 1.0, 256, KernelConstantMode::CorrectedConstant).is_err());
        assert!(nu_eval(&BoundaryPhi::SinTheta, 0.0, 32, KernelConstantMode::CorrectedConstant).is_err());
    }

    #[test]
    fn nu_is_positive_for_admissible_phi() {
        for phi in [BoundaryPhi::SinTheta, BoundaryPhi::SinCubed] {
            for k in 0..199 {
                let x = -0.99 + 0.01 * k as f64;
                assert!(nu_eval(&phi, x, 256, KernelConstantMode::CorrectedConstant).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn dalembert_examples() {
        let one = NuFunction::constant(1.0);
        let u = dalembert_extend(&one, Point::new(0.25, -0.25), 64).unwrap();
        assert!((u.value + 0.25).abs() <= 1e-14);
        assert!(!u.clipped);
        assert_eq!(dalembert_extend(&one, Point::new(0.0, 0.0), 64).unwrap().value, 0.0);
        let quad = NuFunction::explicit("3/4 (t+1)^2", |t| 0.75 * (t + 1.0).powi(2));
        let u = dalembert_extend(&quad, Point::new(0.0, -0.5), 64).unwrap();
        assert!((u.value + 0.40625).abs() <= 1e-14);
        assert!(matches!(
            dalembert_extend(&one, Point::new(0.0, 0.5), 64),
            Err(TricomiError::OutOfDomain(_))
        ));
        // C reaches both endpoints of the data interval
        let c = dalembert_extend(&one, Point::new(0.0, -1.0), 64).unwrap();
        assert!(c.clipped);
        assert!((c.value + 1.0).abs() <= 1e-8);
    }

    #[test]
    fn trace_examples() {
        let one = NuFunction::constant(1.0);
        assert!((trace_ac(&one, 0.0, 64).unwrap().value + 1.0).abs() <= 1e-8);
        assert_eq!(trace_ac(&one, -1.0, 64).unwrap().value, 0.0);
        let quad = NuFunction::explicit("3/4 (t+1)^2", |t| 0.75 * (t + 1.0).powi(2));
        let f = trace_ac(&quad, -0.5, 64).unwrap();
        assert!((f.value + 0.125).abs() <= 1e-12);
        assert!(f.clipped);
        assert!(trace_ac(&one, 0.5, 64).is_err());
    }

    #[test]
    fn extension_is_negative_for_positive_nu() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let nus = [
            NuFunction::constant(1.0),
            NuFunction::analytic(BoundaryPhi::SinCubed, 128, KernelConstantMode::CorrectedConstant).unwrap(),
            NuFunction::explicit("1 - t^2", |t| 1.0 - t * t),
        ];
        for nu in &nus {
            for _ in 0..100 {
                let x: f64 = rng.gen_range(-0.95..0.95);
                let y = -rng.gen_range(0.01..(1.0 - x.abs()));
                let u = dalembert_extend(nu, Point::new(x, y), 128).unwrap().value;
                assert!(u < 0.0, "{:?} at ({x}, {y})", nu.provenance());
            }
        }
    }

    #[test]
    fn top_down_round_trip() {
        let field = TopDownField::new(BoundaryPhi::SinTheta, 256, KernelConstantMode::CorrectedConstant).unwrap();
        for p in [
            Point::new(0.3, 0.4),
            Point::new(-0.2, -0.3),
            Point::new(0.0, 1.0),
            Point::new(-0.5, -0.5),
            Point::new(0.7, 0.0),
            Point::new(0.0, -1.0),
        ] {
            assert!((field.eval(p).unwrap() - p.y).abs() <= 1e-6, "{p}");
            let (gx, gy) = field.grad(p).unwrap();
            assert!(gx.abs() <= 1e-5 && (gy - 1.0).abs() <= 1e-5, "{p}: ({gx}, {gy})");
        }
        for k in 0..=10 {
            let x = -1.0 + 0.1 * k as f64;
            assert!((field.trace_ac(x).unwrap() + (x + 1.0)).abs() <= 1e-8);
        }
        assert!(field.eval(Point::new(0.9, -0.9)).is_err());
    }

    #[test]
    fn top_down_field_verifies() {
        let field = TopDownField::new(BoundaryPhi::SinTheta, 128, KernelConstantMode::CorrectedConstant).unwrap();
        let grid = GridSpec::Cartesian { nx: 21, ny: 21, x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 1.0 };
        let report = verify_solution(&field, &grid, 1e-3);
        assert!(report.max_residual <= 1e-4, "{}", report.max_residual);
        assert!(report.signs_consistent());
        assert!(report.interface.unwrap().max_jump <= 1e-5);
    }
}
