//! Composite Gauss–Legendre quadrature.
//!
//! Nodes and weights come from Newton iteration on the three-term Legendre
//! recurrence. The default panel order is 16; `n` always names the total
//! number of integrand evaluations.

use super::NumericsError;
use std::sync::OnceLock;

/// Points per panel for the composite rules.
pub const PANEL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..(order + 1) / 2 {
            // Tricomi's initial guess for the i-th root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn panel() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

fn panel_layout(n: usize) -> (usize, usize) {
    let order = n.min(PANEL_ORDER);
    let panels = n.div_ceil(order);
    (order, panels)
}

fn check_interval(a: f64, b: f64, n: usize) -> Result<(), NumericsError> {
    if !(a.is_finite() && b.is_finite()) || a > b || n < 2 {
        return Err(NumericsError::BadInterval { a, b, n });
    }
    Ok(())
}

fn composite<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, mut f: F) -> f64 {
    let (order, panels) = panel_layout(n);
    let owned;
    let rule = if order == PANEL_ORDER {
        GaussLegendre::panel()
    } else {
        owned = GaussLegendre::new(order);
        &owned
    };
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == panels { b } else { lo + width };
            rule.integrate(lo, hi, &mut f)
        })
        .sum()
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `n` nodes
/// split into panels of at most [`PANEL_ORDER`] points.
pub fn quad_gl<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64, NumericsError> {
    check_interval(a, b, n)?;
    if a == b {
        return Ok(0.0);
    }
    Ok(composite(a, b, n, f))
}

/// Composite Gauss–Legendre after the substitution `t = c + d·sinh(u)`.
///
/// Meant for integrands with a near-singularity a distance `d` off the real
/// axis above `c`: in the stretched variable the peak has unit width, so
/// uniform panels resolve it regardless of how small `d` is.
pub fn quad_gl_sinh<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    center: f64,
    d: f64,
    n: usize,
) -> Result<f64, NumericsError> {
    check_interval(a, b, n)?;
    if a == b {
        return Ok(0.0);
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(NumericsError::BadInterval { a, b, n });
    }
    let ua = ((a - center) / d).asinh();
    let ub = ((b - center) / d).asinh();
    Ok(composite(ua, ub, n, |u| {
        let e = u.exp();
        let (sinh, cosh) = (0.5 * (e - 1.0 / e), 0.5 * (e + 1.0 / e));
        let t = (center + d * sinh).clamp(a, b);
        f(t) * d * cosh
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn weights_sum_to_two() {
        for order in 1..=20 {
            let rule = GaussLegendre::new(order);
            let s: f64 = rule.weights().iter().sum();
            assert_abs_diff_eq!(s, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn known_three_point_rule() {
        let rule = GaussLegendre::new(3);
        let x = (3.0f64 / 5.0).sqrt();
        assert_abs_diff_eq!(rule.nodes()[0], -x, epsilon = 1e-15);
        assert_abs_diff_eq!(rule.nodes()[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rule.weights()[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rule.weights()[2], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let rule = GaussLegendre::panel();
        for k in 0..32 {
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn textbook_integrals() {
        assert_abs_diff_eq!(quad_gl(f64::sin, 0.0, PI, 64).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            quad_gl(|t| t * t, 0.0, 1.0, 16).unwrap(),
            1.0 / 3.0,
            epsilon = 4.0 * f64::EPSILON
        );
    }

    #[test]
    fn poisson_type_kernel() {
        // closed form pi / (2 (1 - x^2)) at x = 0.5
        let x = 0.5;
        let got = quad_gl(
            |t: f64| t.sin().powi(2) / (1.0 - 2.0 * x * t.cos() + x * x).powi(2),
            0.0,
            PI,
            256,
        )
        .unwrap();
        assert_abs_diff_eq!(got, PI / (2.0 * 0.75), epsilon = 1e-12);
        assert_abs_diff_eq!(got, 2.094395102393195, epsilon = 1e-12);
    }

    #[test]
    fn doubling_is_stable_for_smooth_integrands() {
        let f = |t: f64| (t.cos() * 3.0).exp() * t.sin();
        let a = quad_gl(f, 0.0, 2.0, 64).unwrap();
        let b = quad_gl(f, 0.0, 2.0, 128).unwrap();
        assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn sinh_map_resolves_sharp_peak() {
        let d: f64 = 1e-6;
        let f = |t: f64| d / (d * d + (t - 0.3).powi(2));
        let exact = ((1.0 - 0.3) / d).atan() - ((0.0 - 0.3) / d).atan();
        let got = quad_gl_sinh(f, 0.0, 1.0, 0.3, d, 128).unwrap();
        assert_abs_diff_eq!(got, exact, epsilon = 1e-10);
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(matches!(
            quad_gl(|t| t, 1.0, 0.0, 16),
            Err(NumericsError::BadInterval { .. })
        ));
        assert!(quad_gl(|t| t, 0.0, 1.0, 1).is_err());
        assert!(quad_gl(|t| t, 0.0, f64::NAN, 16).is_err());
        assert_eq!(quad_gl(|t| t, 0.5, 0.5, 16).unwrap(), 0.0);
    }
}
