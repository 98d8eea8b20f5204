//! Independent finite-difference solve of the half-disk Dirichlet problem.
//!
//! Uniform polar grid `r_i = i/(n_r − 1)`, `θ_j = πj/(n_θ − 1)` on the
//! closed upper unit half-disk, conservative 5-point discretization of
//! `(1/r)(r U_r)_r + U_θθ/r² = 0`, `U = φ` on `σ` and `U = 0` on the
//! diameter (which contains the center), solved by lexicographic SOR.

use super::NumericsError;
use crate::tricomi::BoundaryPhi;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const SOR_OMEGA: f64 = 1.8;
/// Stop once `max|ΔU| / max|U|` over a sweep drops to this.
pub const ORACLE_UPDATE_TOL: f64 = 1e-10;
pub const ORACLE_MAX_SWEEPS: usize = 1_000_000;
const MIN_GRID: usize = 17;

/// Convergence record of an oracle solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDiagnostics {
    pub phi: String,
    pub n_r: usize,
    pub n_theta: usize,
    pub omega: f64,
    pub sweeps: usize,
    pub final_update: f64,
}

#[derive(Debug, Clone)]
pub struct OracleField {
    n_r: usize,
    n_theta: usize,
    /// Row-major, `values[i * n_theta + j]`.
    values: Vec<f64>,
    /// `φ(θ_j)` as imposed on the arc row.
    boundary: Vec<f64>,
    /// `(x, ν)` samples sorted by `x`.
    nu: Vec<(f64, f64)>,
    diagnostics: OracleDiagnostics,
}

/// Solves the discrete Dirichlet problem with data `phi` on `σ`.
pub fn oracle_halfdisk(phi: &BoundaryPhi, n_r: usize, n_theta: usize) -> Result<OracleField, NumericsError> {
    if n_r < MIN_GRID || n_theta < MIN_GRID {
        return Err(NumericsError::GridTooSmall { n_r, n_theta });
    }
    let dr = 1.0 / (n_r - 1) as f64;
    let dt = PI / (n_theta - 1) as f64;
    let mut u = vec![0.0; n_r * n_theta];
    let boundary: Vec<f64> = (0..n_theta)
        .map(|j| if j == 0 || j == n_theta - 1 { 0.0 } else { phi.value(j as f64 * dt) })
        .collect();
    u[(n_r - 1) * n_theta..].copy_from_slice(&boundary);

    // (east, west, north = south, diagonal) per interior ring
    let coeffs: Vec<(f64, f64, f64, f64)> = (0..n_r)
        .map(|i| {
            let r = i as f64 * dr;
            if i == 0 {
                return (0.0, 0.0, 0.0, 1.0);
            }
            let e = (r + 0.5 * dr) / (r * dr * dr);
            let w = (r - 0.5 * dr) / (r * dr * dr);
            let n = 1.0 / (r * r * dt * dt);
            (e, w, n, e + w + 2.0 * n)
        })
        .collect();

    let mut sweeps = 0;
    let final_update = loop {
        sweeps += 1;
        let mut max_delta = 0.0f64;
        let mut max_u = 0.0f64;
        for i in 1..n_r - 1 {
            let (e, w, n, diag) = coeffs[i];
            let row = i * n_theta;
            for j in 1..n_theta - 1 {
                let k = row + j;
                let gs = (e * u[k + n_theta] + w * u[k - n_theta] + n * (u[k + 1] + u[k - 1])) / diag;
                let delta = SOR_OMEGA * (gs - u[k]);
                u[k] += delta;
                max_delta = max_delta.max(delta.abs());
                max_u = max_u.max(u[k].abs());
            }
        }
        max_u = boundary.iter().fold(max_u, |m, v| m.max(v.abs()));
        let update = if max_u > 0.0 { max_delta / max_u } else { 0.0 };
        if update <= ORACLE_UPDATE_TOL {
            break update;
        }
        if sweeps >= ORACLE_MAX_SWEEPS {
            return Err(NumericsError::NoConvergence { sweeps, update });
        }
    };

    let at = |i: usize, j: usize| u[i * n_theta + j];
    let mut nu = Vec::with_capacity(2 * n_r);
    for i in 1..n_r - 1 {
        let r = i as f64 * dr;
        let last = n_theta - 1;
        // ∂U/∂y = ±(1/r) ∂U/∂θ on the two halves of the diameter
        nu.push((r, (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * dt * r)));
        nu.push((-r, (-3.0 * at(i, last) + 4.0 * at(i, last - 1) - at(i, last - 2)) / (2.0 * dt * r)));
    }
    if n_theta % 2 == 1 {
        let mid = n_theta / 2;
        nu.push((0.0, (-3.0 * at(0, mid) + 4.0 * at(1, mid) - at(2, mid)) / (2.0 * dr)));
    }
    nu.sort_by(|a, b| a.0.total_cmp(&b.0));

    Ok(OracleField {
        n_r,
        n_theta,
        values: u,
        boundary,
        nu,
        diagnostics: OracleDiagnostics {
            phi: phi.name().into(),
            n_r,
            n_theta,
            omega: SOR_OMEGA,
            sweeps,
            final_update,
        },
    })
}

impl OracleField {
    pub fn shape(&self) -> (usize, usize) {
        (self.n_r, self.n_theta)
    }

    pub fn diagnostics(&self) -> &OracleDiagnostics {
        &self.diagnostics
    }

    pub fn radius(&self, i: usize) -> f64 {
        i as f64 / (self.n_r - 1) as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        PI * j as f64 / (self.n_theta - 1) as f64
    }

    pub fn node_value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_theta + j]
    }

    /// Data imposed on the arc row.
    pub fn boundary(&self) -> &[f64] {
        &self.boundary
    }

    /// Bilinear interpolation in `(r, θ)`; `None` outside the closed
    /// upper half-disk.
    pub fn value_at(&self, p: crate::geometry::Point) -> Option<f64> {
        let r = p.norm();
        if !(p.y >= -1e-12 && r <= 1.0 + 1e-12) {
            return None;
        }
        let theta = p.y.max(0.0).atan2(p.x).clamp(0.0, PI);
        let sr = r.min(1.0) * (self.n_r - 1) as f64;
        let st = theta / PI * (self.n_theta - 1) as f64;
        let i = (sr.floor() as usize).min(self.n_r - 2);
        let j = (st.floor() as usize).min(self.n_theta - 2);
        let (fr, ft) = (sr - i as f64, st - j as f64);
        let v = |a: usize, b: usize| self.node_value(a, b);
        Some(
            (1.0 - fr) * ((1.0 - ft) * v(i, j) + ft * v(i, j + 1))
                + fr * ((1.0 - ft) * v(i + 1, j) + ft * v(i + 1, j + 1)),
        )
    }

    /// `(x, ν)` samples from one-sided second-order differences.
    pub fn nu_samples(&self) -> &[(f64, f64)] {
        &self.nu
    }

    pub fn nu_support(&self) -> (f64, f64) {
        (self.nu[0].0, self.nu[self.nu.len() - 1].0)
    }

    /// Linear interpolation of the `ν` samples.
    pub fn nu_at(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.nu_support();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let k = self.nu.partition_point(|s| s.0 <= x).clamp(1, self.nu.len() - 1);
        let ((x0, v0), (x1, v1)) = (self.nu[k - 1], self.nu[k]);
        Some(v0 + (x - x0) / (x1 - x0) * (v1 - v0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn max_node_error(o: &OracleField, exact: impl Fn(Point) -> f64) -> f64 {
        let (n_r, n_t) = o.shape();
        let mut worst = 0.0f64;
        for i in 0..n_r {
            for j in 0..n_t {
                let p = Point::from_polar(o.radius(i), o.angle(j));
                worst = worst.max((o.node_value(i, j) - exact(p)).abs());
            }
        }
        worst
    }

    #[test]
    fn sin_theta_reproduces_y() {
        let o = oracle_halfdisk(&BoundaryPhi::SinTheta, 129, 129).unwrap();
        assert!(o.diagnostics().final_update <= ORACLE_UPDATE_TOL);
        assert!(max_node_error(&o, |p| p.y) <= 5e-3);
        for &(x, nu) in o.nu_samples() {
            assert!((nu - 1.0).abs() <= 5e-3, "nu({x}) = {nu}");
        }
        assert!((o.value_at(Point::new(0.3, 0.4)).unwrap() - 0.4).abs() <= 5e-3);
        assert!(o.value_at(Point::new(0.3, -0.4)).is_none());
        // boundary rows hold the data exactly
        for j in 0..129 {
            assert_eq!(o.node_value(128, j), o.boundary()[j]);
            assert_eq!(o.node_value(0, j), 0.0);
        }
    }

    #[test]
    fn sin_two_theta_gives_linear_nu() {
        let o = oracle_halfdisk(&BoundaryPhi::Sin2Theta, 129, 129).unwrap();
        for &(x, nu) in o.nu_samples() {
            assert!((nu - 2.0 * x).abs() <= 5e-3, "nu({x}) = {nu}");
        }
        assert!((o.nu_at(0.25).unwrap() - 0.5).abs() <= 5e-3);
        assert!(o.nu_at(1.0).is_none());
    }

    #[test]
    fn second_order_convergence() {
        let errs: Vec<f64> = [65, 129, 257]
            .iter()
            .map(|&n| {
                let o = oracle_halfdisk(&BoundaryPhi::Sin2Theta, n, n).unwrap();
                max_node_error(&o, |p| 2.0 * p.x * p.y)
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 2.0).abs() <= 0.2, "{errs:?}");
        }
    }

    #[test]
    fn rejects_small_grids() {
        assert!(matches!(
            oracle_halfdisk(&BoundaryPhi::SinTheta, 16, 129),
            Err(NumericsError::GridTooSmall { .. })
        ));
    }
}
