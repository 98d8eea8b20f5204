//! Problem 2: `f` on `AC` → wave field in `D2` → `ν` → analytic
//! continuation into the upper half-plane.

use super::{Admissibility, CharacteristicF, TricomiError};
use crate::families::{Equation, OperatorTag};
use crate::geometry::{classify_tricomi, Point, Region, DEFAULT_BOUNDARY_TOL};
use crate::numerics::{Field, TaggedField};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

pub const DEFAULT_SERIES_TERMS: usize = 64;
/// Largest accepted bound on the discarded part of a power series.
pub const SERIES_TAIL_TOL: f64 = 1e-12;
pub const MIN_PROBE_GRID: usize = 50;
/// Height of the probed strip `(−1, 1) × (0, PROBE_HEIGHT]`.
const PROBE_HEIGHT: f64 = 1.2;

fn in_closed_d2(p: Point) -> bool {
    p.y <= DEFAULT_BOUNDARY_TOL
        && matches!(
            classify_tricomi(p, DEFAULT_BOUNDARY_TOL),
            Region::D2Triangle | Region::OnCharAC | Region::OnCharBC | Region::OnDiameter
        )
}

/// `U = f((x − y − 1)/2) − f((x + y − 1)/2)` in the closed triangle `D2`.
pub fn problem2_d2(f: &CharacteristicF, p: Point) -> Result<f64, TricomiError> {
    if !in_closed_d2(p) {
        return Err(TricomiError::OutOfDomain(p));
    }
    Ok(f.value(0.5 * (p.x - p.y - 1.0)) - f.value(0.5 * (p.x + p.y - 1.0)))
}

pub fn problem2_d2_grad(f: &CharacteristicF, p: Point) -> Result<(f64, f64), TricomiError> {
    if !in_closed_d2(p) {
        return Err(TricomiError::OutOfDomain(p));
    }
    let da = f.derivative(0.5 * (p.x - p.y - 1.0));
    let db = f.derivative(0.5 * (p.x + p.y - 1.0));
    Ok((0.5 * (da - db), -0.5 * (da + db)))
}

/// `ν(x) = −f′((x − 1)/2)` for `|x| ≤ 1`.
pub fn problem2_nu(f: &CharacteristicF, x: f64) -> Result<f64, TricomiError> {
    if !(x.abs() <= 1.0) {
        return Err(TricomiError::OutOfRange { name: "x", value: x, range: "[-1, 1]" });
    }
    Ok(-f.derivative(0.5 * (x - 1.0)))
}

/// Partial sum of a continuation series together with the bound on what
/// was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `f(w)` and `f′(w)` for `f = Σ a_n (w + 1/2)ⁿ`, summing at most `n_terms`.
fn series_complex(coeffs: &[f64], w: Complex64, n_terms: usize) -> Result<(Complex64, Complex64, SeriesSum), TricomiError> {
    let used = n_terms.min(coeffs.len());
    let zeta = w + 0.5;
    let mut power = Complex64::new(1.0, 0.0);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for (n, &a) in coeffs[..used].iter().enumerate() {
        value += a * power;
        deriv += a * n as f64 * prev;
        prev = power;
        power *= zeta;
    }
    let rho = zeta.norm();
    let mut tail = 0.0;
    let mut rn = rho.powi(used as i32);
    for &a in &coeffs[used..] {
        tail += a.abs() * rn;
        rn *= rho;
    }
    // the real part of 2·f enters the field
    let tail_bound = 2.0 * tail;
    if !(tail_bound <= SERIES_TAIL_TOL) {
        return Err(TricomiError::SeriesDiverged { tail: tail_bound, n_terms });
    }
    Ok((value, deriv, SeriesSum { value: -2.0 * value.im, tail_bound, terms: used }))
}

/// `U = −Σ a_n/2^(n−1) rⁿ sin(nφ)` with `(r, φ)` the polar coordinates of
/// `p`, summing at most `n_terms` terms. Fails when the discarded
/// coefficients could contribute more than [`SERIES_TAIL_TOL`].
pub fn series_eval_d1(coeffs: &[f64], p: Point, n_terms: usize) -> Result<SeriesSum, TricomiError> {
    if !(p.y > 0.0) || !p.is_finite() {
        return Err(TricomiError::OutOfDomain(p));
    }
    let w = Complex64::new(0.5 * (p.x - 1.0), 0.5 * p.y);
    Ok(series_complex(coeffs, w, n_terms)?.2)
}

fn complex_f(f: &CharacteristicF, p: Point) -> Result<(Complex64, Complex64), TricomiError> {
    if !(p.y > 0.0) || !p.is_finite() {
        return Err(TricomiError::OutOfDomain(p));
    }
    let w = Complex64::new(0.5 * (p.x - 1.0), 0.5 * p.y);
    match f {
        CharacteristicF::PowerSeries(a) => {
            let (v, d, _) = series_complex(a, w, DEFAULT_SERIES_TERMS)?;
            Ok((v, d))
        }
        _ => Ok(f.polynomial_complex(w).expect("finite representation")),
    }
}

/// Continuation `U = −2·Im f((z − 1)/2)`, `z = x + iy`, `y > 0`.
pub fn problem2_d1(f: &CharacteristicF, p: Point) -> Result<f64, TricomiError> {
    Ok(-2.0 * complex_f(f, p)?.0.im)
}

/// `(−Im f′(w), −Re f′(w))` with `w = (z − 1)/2`.
pub fn problem2_d1_grad(f: &CharacteristicF, p: Point) -> Result<(f64, f64), TricomiError> {
    let d = complex_f(f, p)?.1;
    Ok((-d.im, -d.re))
}

/// Positive set of the continuation on a grid over `(−1, 1) × (0, 1.2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub f: String,
    pub grid_n: usize,
    pub admissibility: Admissibility,
    pub positive_nodes: usize,
    /// Positive nodes 4-connected to the bottom row.
    pub component_nodes: usize,
    /// Nodes where the continuation could not be evaluated.
    pub failed_nodes: usize,
    /// Linear-interpolation crossings of `U = 0` on grid edges leaving the
    /// component, sorted by ordinate then abscissa.
    pub zero_level: Vec<Point>,
    #[serde(skip)]
    component: Vec<bool>,
}

impl ProbeReport {
    /// Grid node `(i, j)`: `x_i = −1 + 2(i + 1)/(n + 1)`, `y_j = 1.2(j + 1)/n`.
    pub fn node(&self, i: usize, j: usize) -> Point {
        probe_node(self.grid_n, i, j)
    }

    pub fn in_component(&self, i: usize, j: usize) -> bool {
        self.component[j * self.grid_n + i]
    }

    /// Largest distance from a zero-level sample to the curve `dist`.
    pub fn max_zero_level_distance(&self, dist: impl Fn(Point) -> f64) -> Option<f64> {
        self.zero_level.iter().map(|&p| dist(p)).reduce(f64::max)
    }
}

fn probe_node(n: usize, i: usize, j: usize) -> Point {
    Point::new(
        -1.0 + 2.0 * (i + 1) as f64 / (n + 1) as f64,
        PROBE_HEIGHT * (j + 1) as f64 / n as f64,
    )
}

/// Evaluates [`problem2_d1`] on a `grid_n × grid_n` grid and returns the
/// positive component touching the bottom row with its zero-level samples.
/// Inadmissible `f` are probed all the same and flagged in the report.
pub fn positivity_probe(f: &CharacteristicF, grid_n: usize) -> Result<ProbeReport, TricomiError> {
    if grid_n < MIN_PROBE_GRID {
        return Err(TricomiError::BadArgument {
            name: "grid_n",
            reason: format!("{grid_n} < {MIN_PROBE_GRID}"),
        });
    }
    let n = grid_n;
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| problem2_d1(f, probe_node(n, k % n, k / n)).unwrap_or(f64::NAN))
        .collect();
    let positive = |k: usize| values[k] > 0.0;

    let mut component = vec![false; n * n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| positive(i)).collect();
    for &k in &queue {
        component[k] = true;
    }
    while let Some(k) = queue.pop_front() {
        let (i, j) = (k % n, k / n);
        let neighbors = [
            (i > 0).then(|| k - 1),
            (i + 1 < n).then(|| k + 1),
            (j > 0).then(|| k - n),
            (j + 1 < n).then(|| k + n),
        ];
        for m in neighbors.into_iter().flatten() {
            if !component[m] && positive(m) {
                component[m] = true;
                queue.push_back(m);
            }
        }
    }

    let mut zero_level = Vec::new();
    let mut crossing = |a: usize, b: usize| {
        if component[a] != component[b] && values[a].is_finite() && values[b].is_finite() {
            let (pa, pb) = (probe_node(n, a % n, a / n), probe_node(n, b % n, b / n));
            let t = values[a] / (values[a] - values[b]);
            zero_level.push(Point::new(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)));
        }
    };
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            if i + 1 < n {
                crossing(k, k + 1);
            }
            if j + 1 < n {
                crossing(k, k + n);
            }
        }
    }
    zero_level.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));

    Ok(ProbeReport {
        f: f.label(),
        grid_n,
        admissibility: f.admissibility(),
        positive_nodes: values.iter().filter(|&&v| v > 0.0).count(),
        component_nodes: component.iter().filter(|&&c| c).count(),
        failed_nodes: values.iter().filter(|v| !v.is_finite()).count(),
        zero_level,
        component,
    })
}

/// The assembled problem-2 field: the wave field in the closed triangle
/// and the continuation for `y > 0`, restricted to `|x| ≤ 1`.
#[derive(Debug, Clone)]
pub struct BottomUpField {
    f: CharacteristicF,
    y_max: f64,
}

impl BottomUpField {
    pub fn new(f: CharacteristicF) -> Self {
        Self { f, y_max: PROBE_HEIGHT }
    }

    pub fn f(&self) -> &CharacteristicF {
        &self.f
    }

    pub fn eval(&self, p: Point) -> Result<f64, TricomiError> {
        if p.y > 0.0 && self.contains(p) {
            problem2_d1(&self.f, p)
        } else {
            problem2_d2(&self.f, p)
        }
    }

    pub fn grad(&self, p: Point) -> Result<(f64, f64), TricomiError> {
        if p.y > 0.0 && self.contains(p) {
            problem2_d1_grad(&self.f, p)
        } else {
            problem2_d2_grad(&self.f, p)
        }
    }
}

impl Field for BottomUpField {
    fn value(&self, p: Point) -> f64 {
        self.eval(p).unwrap_or(f64::NAN)
    }

    fn contains(&self, p: Point) -> bool {
        if p.y > 0.0 {
            p.x.abs() <= 1.0 && p.y <= self.y_max
        } else {
            in_closed_d2(p)
        }
    }
}

impl TaggedField for BottomUpField {
    fn label(&self) -> String {
        format!("tricomi2:{}", self.f.label())
    }

    fn equation(&self) -> Equation {
        Equation::SignSwitching
    }

    fn operator(&self, p: Point) -> OperatorTag {
        OperatorTag::from_sign(self.value(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fd_residual;
    use crate::tricomi::{dalembert_extend, NuFunction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cubic_d1(p: Point) -> f64 {
        p.y / 4.0 * (3.0 * (p.x + 1.0).powi(2) - p.y * p.y)
    }

    fn cubic_d2(p: Point) -> f64 {
        p.y / 4.0 * (3.0 * (p.x + 1.0).powi(2) + p.y * p.y)
    }

    fn random_d2(rng: &mut ChaCha8Rng) -> Point {
        let x: f64 = rng.gen_range(-1.0..1.0);
        Point::new(x, -rng.gen_range(0.0..(1.0 - x.abs())))
    }

    #[test]
    fn d2_examples() {
        let f = CharacteristicF::Cubic;
        assert!((problem2_d2(&f, Point::new(0.0, -0.5)).unwrap() + 0.40625).abs() <= 1e-15);
        assert_eq!(problem2_d2(&f, Point::new(0.3, 0.0)).unwrap(), 0.0);
        assert!((problem2_d2(&f, Point::new(-0.5, -0.5)).unwrap() + 0.125).abs() <= 1e-15);
        assert!(problem2_d2(&f, Point::new(0.0, 0.5)).is_err());
    }

    #[test]
    fn nu_examples() {
        let f = CharacteristicF::Cubic;
        assert_eq!(problem2_nu(&f, 0.0).unwrap(), 0.75);
        assert_eq!(problem2_nu(&f, -1.0).unwrap(), 0.0);
        let lin = CharacteristicF::Polynomial(vec![-1.0, -1.0]);
        assert_eq!(problem2_nu(&lin, 0.4).unwrap(), 1.0);
        assert!(problem2_nu(&f, 1.5).is_err());
    }

    #[test]
    fn d1_examples() {
        let f = CharacteristicF::Cubic;
        assert!((problem2_d1(&f, Point::new(0.0, 0.5)).unwrap() - 0.34375).abs() <= 1e-15);
        assert!(problem2_d1(&f, Point::new(0.3, 1e-12)).unwrap().abs() <= 1e-11);
        let lin = CharacteristicF::Polynomial(vec![-1.0, -1.0]);
        assert!((problem2_d1(&lin, Point::new(0.2, 0.3)).unwrap() - 0.3).abs() <= 1e-15);
        assert!(matches!(problem2_d1(&f, Point::new(0.2, 0.0)), Err(TricomiError::OutOfDomain(_))));
    }

    #[test]
    fn series_examples() {
        let a = CharacteristicF::Cubic.to_series_coeffs();
        let s = series_eval_d1(&a, Point::new(0.0, 0.5), DEFAULT_SERIES_TERMS).unwrap();
        assert!((s.value - 0.34375).abs() <= 1e-12);
        assert_eq!(s.tail_bound, 0.0);
        assert_eq!(series_eval_d1(&[0.0; 5], Point::new(0.2, 0.3), 64).unwrap().value, 0.0);
        let p = Point::new(0.35, 0.45);
        assert!((series_eval_d1(&[0.0, -1.0], p, 64).unwrap().value - p.y).abs() <= 1e-15);
    }

    #[test]
    fn series_truncation_is_reported() {
        // geometric coefficients: radius of convergence 2 in z
        let a: Vec<f64> = (0..200).map(|_| 1.0).collect();
        let near = Point::new(0.0, 0.2);
        assert!(series_eval_d1(&a, near, 64).unwrap().tail_bound <= SERIES_TAIL_TOL);
        let far = Point::new(0.95, 0.95);
        assert!(matches!(series_eval_d1(&a, far, 64), Err(TricomiError::SeriesDiverged { .. })));
        let f = CharacteristicF::PowerSeries(a);
        assert!(matches!(problem2_d1(&f, far), Err(TricomiError::SeriesDiverged { .. })));
    }

    #[test]
    fn cubic_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let f = CharacteristicF::Cubic;
        for _ in 0..500 {
            let p = random_d2(&mut rng);
            assert!((problem2_d2(&f, p).unwrap() - cubic_d2(p)).abs() <= 1e-12);
            let q = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(1e-3..1.0));
            assert!((problem2_d1(&f, q).unwrap() - cubic_d1(q)).abs() <= 1e-12);
        }
    }

    #[test]
    fn bottom_up_round_trip() {
        let f = CharacteristicF::Cubic;
        let nu = NuFunction::from_f(f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..500 {
            let p = random_d2(&mut rng);
            let u = dalembert_extend(&nu, p, 64).unwrap().value;
            assert!((u - problem2_d2(&f, p).unwrap()).abs() <= 1e-8);
        }
    }

    #[test]
    fn gradients_match_differences() {
        let f = CharacteristicF::Polynomial(vec![0.0, -1.0, 0.3, -0.7, 0.2, -0.1]);
        let h = 1e-6;
        for p in [Point::new(0.1, 0.4), Point::new(-0.3, 0.7)] {
            let (gx, gy) = problem2_d1_grad(&f, p).unwrap();
            let fx = (problem2_d1(&f, p.offset(h, 0.0)).unwrap() - problem2_d1(&f, p.offset(-h, 0.0)).unwrap()) / (2.0 * h);
            let fy = (problem2_d1(&f, p.offset(0.0, h)).unwrap() - problem2_d1(&f, p.offset(0.0, -h)).unwrap()) / (2.0 * h);
            assert!((gx - fx).abs() < 1e-7 && (gy - fy).abs() < 1e-7);
        }
        for p in [Point::new(0.1, -0.4), Point::new(-0.2, -0.5)] {
            let (gx, gy) = problem2_d2_grad(&f, p).unwrap();
            let fx = (problem2_d2(&f, p.offset(h, 0.0)).unwrap() - problem2_d2(&f, p.offset(-h, 0.0)).unwrap()) / (2.0 * h);
            let fy = (problem2_d2(&f, p.offset(0.0, h)).unwrap() - problem2_d2(&f, p.offset(0.0, -h)).unwrap()) / (2.0 * h);
            assert!((gx - fx).abs() < 1e-7 && (gy - fy).abs() < 1e-7);
        }
    }

    #[test]
    fn residuals_are_second_order() {
        // a quintic datum gives non-zero truncation error in both parts
        let field = BottomUpField::new(CharacteristicF::Polynomial(vec![-0.5, -1.5, 0.0, -1.0, 0.0, -0.25]));
        let (up, down) = (Point::new(0.1, 0.5), Point::new(0.1, -0.5));
        for (p, op) in [(up, OperatorTag::Laplace), (down, OperatorTag::Wave)] {
            let r1 = fd_residual(&field, p, 1e-2, op).unwrap().abs();
            let r2 = fd_residual(&field, p, 5e-3, op).unwrap().abs();
            let order = (r1 / r2).log2();
            assert!(order >= 1.9, "{op}: {order}");
        }
    }

    #[test]
    fn probe_examples() {
        let report = positivity_probe(&CharacteristicF::Cubic, 200).unwrap();
        assert!(report.admissibility.admissible);
        assert!(!report.zero_level.is_empty());
        let line = |p: Point| (3f64.sqrt() * (p.x + 1.0) - p.y).abs() / 2.0;
        assert!(report.max_zero_level_distance(line).unwrap() <= 2.0 / 200.0);
        assert!(report.in_component(199, 0));
        assert!(!report.in_component(0, 199));

        let lin = positivity_probe(&CharacteristicF::Polynomial(vec![-1.0, -1.0]), 60).unwrap();
        assert_eq!(lin.component_nodes, 60 * 60);
        assert!(lin.zero_level.is_empty());

        let bad = positivity_probe(&CharacteristicF::Polynomial(vec![0.0, 0.0, 1.0, 1.0]), 50).unwrap();
        assert!(!bad.admissibility.admissible);
        assert!(positivity_probe(&CharacteristicF::Cubic, 10).is_err());
    }
}
