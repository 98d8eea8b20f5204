//! One-dimensional data functions used as Goursat data.

use serde::{Deserialize, Serialize};

/// A real function of one variable with a derivative.
///
/// Polynomials are exact; tables are natural cubic splines through the
/// given samples and are only defined on the sampled range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Callable1D {
    /// Coefficients in ascending powers of the argument.
    Polynomial(Vec<f64>),
    Table(CubicTable),
}

impl Callable1D {
    pub fn polynomial(coeffs: impl Into<Vec<f64>>) -> Self {
        Callable1D::Polynomial(coeffs.into())
    }

    pub fn value(&self, t: f64) -> Option<f64> {
        match self {
            Callable1D::Polynomial(c) => Some(horner(c, t)),
            Callable1D::Table(table) => table.value(t),
        }
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        match self {
            Callable1D::Polynomial(c) => Some(horner_derivative(c, t)),
            Callable1D::Table(table) => table.derivative(t),
        }
    }

    /// `true` when the function is known to be affine.
    pub fn is_affine(&self) -> bool {
        match self {
            Callable1D::Polynomial(c) => c.iter().skip(2).all(|&v| v == 0.0),
            Callable1D::Table(_) => false,
        }
    }
}

pub(crate) fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub(crate) fn horner_derivative(coeffs: &[f64], t: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * t + k as f64 * c)
}

/// Natural cubic spline through `(xs[i], ys[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
}

impl CubicTable {
    /// Returns `None` unless there are at least two samples with strictly
    /// increasing abscissae and finite values.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Option<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return None;
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) || xs.windows(2).any(|w| w[1] <= w[0]) {
            return None;
        }
        // Tridiagonal solve for the interior second derivatives.
        let mut second = vec![0.0; n];
        if n > 2 {
            let mut diag = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[i] = 2.0 * (h0 + h1);
                rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for i in 2..n - 1 {
                let h = xs[i] - xs[i - 1];
                let m = h / diag[i - 1];
                diag[i] -= m * h;
                rhs[i] -= m * rhs[i - 1];
            }
            for i in (1..n - 1).rev() {
                let upper = if i + 1 < n - 1 { (xs[i + 1] - xs[i]) * second[i + 1] } else { 0.0 };
                second[i] = (rhs[i] - upper) / diag[i];
            }
        }
        Some(Self { xs, ys, second })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn locate(&self, t: f64) -> Option<usize> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&t) {
            return None;
        }
        let idx = self.xs.partition_point(|&x| x <= t);
        Some(idx.clamp(1, self.xs.len() - 1) - 1)
    }

    pub fn value(&self, t: f64) -> Option<f64> {
        let i = self.locate(t)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - t) / h;
        let b = (t - self.xs[i]) / h;
        Some(
            a * self.ys[i]
                + b * self.ys[i + 1]
                + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                    / 6.0,
        )
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        let i = self.locate(t)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - t) / h;
        let b = (t - self.xs[i]) / h;
        Some(
            (self.ys[i + 1] - self.ys[i]) / h
                - (3.0 * a * a - 1.0) / 6.0 * h * self.second[i]
                + (3.0 * b * b - 1.0) / 6.0 * h * self.second[i + 1],
        )
    }
}
