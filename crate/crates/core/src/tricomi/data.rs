//! Boundary data for both Tricomi problems and the interface derivative `ν`.

use super::TricomiError;
use crate::families::{horner, horner_derivative};
use crate::numerics::OracleField;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Tolerance for the endpoint and sign checks of the admissibility tests.
const ADMISSIBILITY_TOL: f64 = 1e-12;
const PHI_SAMPLES: usize = 721;
const F_SAMPLES: usize = 200;

/// Outcome of an admissibility check. Inadmissible data stay usable; the
/// flag travels with every result built from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub issues: Vec<String>,
}

impl Admissibility {
    fn from_issues(issues: Vec<String>) -> Self {
        Self { admissible: issues.is_empty(), issues }
    }
}

/// Linearly interpolated samples `(θ_k, φ_k)` covering `[0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiTable {
    thetas: Vec<f64>,
    values: Vec<f64>,
}

impl PhiTable {
    pub fn new(thetas: Vec<f64>, values: Vec<f64>) -> Result<Self, TricomiError> {
        let bad = |reason: &str| TricomiError::BadArgument { name: "phi table", reason: reason.into() };
        if thetas.len() != values.len() || thetas.len() < 2 {
            return Err(bad("need at least two (theta, phi) rows"));
        }
        if thetas.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(bad("non-finite entry"));
        }
        if thetas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("theta must be strictly increasing"));
        }
        if thetas[0] > 1e-9 || thetas[thetas.len() - 1] < PI - 1e-9 {
            return Err(bad("theta samples must cover [0, pi]"));
        }
        Ok(Self { thetas, values })
    }

    pub fn value(&self, theta: f64) -> f64 {
        let k = self.thetas.partition_point(|&t| t <= theta);
        if k == 0 {
            return self.values[0];
        }
        if k == self.thetas.len() {
            return self.values[k - 1];
        }
        let (t0, t1) = (self.thetas[k - 1], self.thetas[k]);
        let s = (theta - t0) / (t1 - t0);
        self.values[k - 1] + s * (self.values[k] - self.values[k - 1])
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// Data `φ(θ)` on the arc `σ`, `θ ∈ [0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPhi {
    SinTheta,
    Sin2Theta,
    SinCubed,
    Table(PhiTable),
}

impl BoundaryPhi {
    pub fn value(&self, theta: f64) -> f64 {
        match self {
            BoundaryPhi::SinTheta => theta.sin(),
            BoundaryPhi::Sin2Theta => (2.0 * theta).sin(),
            BoundaryPhi::SinCubed => theta.sin().powi(3),
            BoundaryPhi::Table(t) => t.value(theta),
        }
    }

    /// Angles where `φ` may have a derivative jump.
    pub fn breakpoints(&self) -> Option<&[f64]> {
        match self {
            BoundaryPhi::Table(t) => Some(t.thetas()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryPhi::SinTheta => "sin",
            BoundaryPhi::Sin2Theta => "sin2",
            BoundaryPhi::SinCubed => "sin3",
            BoundaryPhi::Table(_) => "table",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" | "sin-theta" => Some(BoundaryPhi::SinTheta),
            "sin2" | "sin-2theta" => Some(BoundaryPhi::Sin2Theta),
            "sin3" | "sin-cubed" => Some(BoundaryPhi::SinCubed),
            _ => None,
        }
    }

    /// `φ ≥ 0` with `φ(0) = φ(π) = 0`, checked at 721 equally spaced angles.
    pub fn admissibility(&self) -> Admissibility {
        let mut issues = Vec::new();
        for (label, theta) in [("phi(0)", 0.0), ("phi(pi)", PI)] {
            let v = self.value(theta);
            if v.abs() > ADMISSIBILITY_TOL {
                issues.push(format!("{label} = {v} is not zero"));
            }
        }
        let step = PI / (PHI_SAMPLES - 1) as f64;
        if let Some((theta, v)) = (0..PHI_SAMPLES)
            .map(|k| {
                let theta = k as f64 * step;
                (theta, self.value(theta))
            })
            .find(|&(_, v)| !(v >= -ADMISSIBILITY_TOL))
        {
            issues.push(format!("phi({theta}) = {v} is negative"));
        }
        Admissibility::from_issues(issues)
    }
}

impl fmt::Display for BoundaryPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Data `f(x)` on the characteristic `AC`, `x ∈ [−1, 0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharacteristicF {
    /// `f(x) = −(1 + x)³`.
    Cubic,
    /// `f(x) = Σ a_n (x + 1/2)ⁿ`.
    PowerSeries(Vec<f64>),
    /// Coefficients in ascending powers of `x`.
    Polynomial(Vec<f64>),
}

impl CharacteristicF {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            CharacteristicF::Cubic => -(1.0 + x).powi(3),
            CharacteristicF::PowerSeries(a) => horner(a, x + 0.5),
            CharacteristicF::Polynomial(c) => horner(c, x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            CharacteristicF::Cubic => -3.0 * (1.0 + x).powi(2),
            CharacteristicF::PowerSeries(a) => horner_derivative(a, x + 0.5),
            CharacteristicF::Polynomial(c) => horner_derivative(c, x),
        }
    }

    /// Value and derivative at a complex argument for the finite
    /// representations. Power series go through [`super::series_eval_d1`].
    pub(crate) fn polynomial_complex(&self, w: Complex64) -> Option<(Complex64, Complex64)> {
        let coeffs = match self {
            CharacteristicF::Cubic => {
                let s = w + 1.0;
                return Some((-s * s * s, -3.0 * s * s));
            }
            CharacteristicF::Polynomial(c) => c,
            CharacteristicF::PowerSeries(_) => return None,
        };
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            deriv = deriv * w + value;
            value = value * w + c;
        }
        Some((value, deriv))
    }

    /// Coefficients `a_n` of the expansion in powers of `x + 1/2`.
    pub fn to_series_coeffs(&self) -> Vec<f64> {
        match self {
            CharacteristicF::Cubic => vec![-0.125, -0.75, -1.5, -1.0],
            CharacteristicF::PowerSeries(a) => a.clone(),
            CharacteristicF::Polynomial(c) => taylor_shift(c, -0.5),
        }
    }

    /// `f(−1) = 0` and `f′ < 0` at 200 interior points of `(−1, 0)`.
    pub fn admissibility(&self) -> Admissibility {
        let mut issues = Vec::new();
        let at_a = self.value(-1.0);
        if at_a.abs() > ADMISSIBILITY_TOL {
            issues.push(format!("f(-1) = {at_a} is not zero"));
        }
        if let Some((x, d)) = (1..=F_SAMPLES)
            .map(|i| {
                let x = -1.0 + i as f64 / (F_SAMPLES + 1) as f64;
                (x, self.derivative(x))
            })
            .find(|&(_, d)| !(d < 0.0))
        {
            issues.push(format!("f'({x}) = {d} is not negative"));
        }
        Admissibility::from_issues(issues)
    }

    pub fn label(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        match self {
            CharacteristicF::Cubic => "cubic".into(),
            CharacteristicF::PowerSeries(a) => format!("series:{}", join(a)),
            CharacteristicF::Polynomial(c) => format!("poly:{}", join(c)),
        }
    }
}

impl fmt::Display for CharacteristicF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for CharacteristicF {
    type Err = String;

    /// `cubic`, `poly:c0,c1,...` or `series:a0,a1,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "cubic" {
            return Ok(CharacteristicF::Cubic);
        }
        let (kind, list) = s
            .split_once(':')
            .ok_or_else(|| format!("expected cubic, poly:... or series:..., got {s:?}"))?;
        let coeffs = list
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| format!("bad coefficient {c:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err("coefficients must be finite".into());
        }
        match kind {
            "poly" => Ok(CharacteristicF::Polynomial(coeffs)),
            "series" => Ok(CharacteristicF::PowerSeries(coeffs)),
            _ => Err(format!("unknown characteristic datum kind {kind:?}")),
        }
    }
}

/// Coefficients of `p(t + s)` given those of `p(t)`, both ascending.
pub(crate) fn taylor_shift(coeffs: &[f64], s: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            c[j] += s * c[j + 1];
        }
    }
    c
}

/// Normalization of the `ν` kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelConstantMode {
    /// `4(1 − x²)/π`, as printed.
    PaperConstant,
    /// `2(1 − x²)/π`, which reproduces `ν` of exact fields.
    #[default]
    CorrectedConstant,
}

impl KernelConstantMode {
    pub fn factor(self) -> f64 {
        match self {
            KernelConstantMode::PaperConstant => 4.0,
            KernelConstantMode::CorrectedConstant => 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KernelConstantMode::PaperConstant => "paper",
            KernelConstantMode::CorrectedConstant => "corrected",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(KernelConstantMode::PaperConstant),
            "corrected" => Some(KernelConstantMode::CorrectedConstant),
            _ => None,
        }
    }
}

impl fmt::Display for KernelConstantMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a [`NuFunction`] came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum NuProvenance {
    AnalyticKernel { mode: KernelConstantMode, phi: String, n_quad: usize },
    FromF { f: String },
    OracleSampled { n_r: usize, n_theta: usize },
    Explicit { label: String },
}

type NuFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The interface derivative `ν(x) = ∂U/∂y (x, 0)` on `(−1, 1)`.
#[derive(Clone)]
pub struct NuFunction {
    provenance: NuProvenance,
    support: (f64, f64),
    eval: NuFn,
}

impl fmt::Debug for NuFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NuFunction")
            .field("provenance", &self.provenance)
            .field("support", &self.support)
            .finish()
    }
}

impl NuFunction {
    /// Kernel integral of `φ`; evaluation outside `(−1, 1)` gives NaN.
    pub fn analytic(phi: BoundaryPhi, n_quad: usize, mode: KernelConstantMode) -> Result<Self, TricomiError> {
        super::nu_eval(&phi, 0.0, n_quad, mode)?;
        Ok(Self {
            provenance: NuProvenance::AnalyticKernel { mode, phi: phi.name().into(), n_quad },
            support: (-1.0, 1.0),
            eval: Arc::new(move |x| super::nu_eval(&phi, x, n_quad, mode).unwrap_or(f64::NAN)),
        })
    }

    /// `ν(x) = −f′((x − 1)/2)`.
    pub fn from_f(f: CharacteristicF) -> Self {
        Self {
            provenance: NuProvenance::FromF { f: f.label() },
            support: (-1.0, 1.0),
            eval: Arc::new(move |x| -f.derivative(0.5 * (x - 1.0))),
        }
    }

    /// One-sided difference samples of a finite-difference oracle.
    pub fn from_oracle(oracle: OracleField) -> Self {
        let (n_r, n_theta) = oracle.shape();
        let oracle = Arc::new(oracle);
        Self {
            provenance: NuProvenance::OracleSampled { n_r, n_theta },
            support: oracle.nu_support(),
            eval: Arc::new(move |x| oracle.nu_at(x).unwrap_or(f64::NAN)),
        }
    }

    pub fn explicit(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            provenance: NuProvenance::Explicit { label: label.into() },
            support: (-1.0, 1.0),
            eval: Arc::new(f),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::explicit(format!("constant {c}"), move |_| c)
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn provenance(&self) -> &NuProvenance {
        &self.provenance
    }

    /// Interval on which the function is backed by data.
    pub fn support(&self) -> (f64, f64) {
        self.support
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_presets_and_admissibility() {
        assert!(BoundaryPhi::SinTheta.admissibility().admissible);
        assert!(BoundaryPhi::SinCubed.admissibility().admissible);
        let sin2 = BoundaryPhi::Sin2Theta.admissibility();
        assert!(!sin2.admissible);
        assert!(sin2.issues[0].contains("negative"));
        for name in ["sin", "sin2", "sin3"] {
            assert_eq!(BoundaryPhi::from_name(name).unwrap().name(), name);
        }
    }

    #[test]
    fn phi_table_interpolates_linearly() {
        let t = PhiTable::new(vec![0.0, PI / 2.0, PI], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(t.value(PI / 4.0), 0.5);
        assert_eq!(t.value(PI), 0.0);
        let phi = BoundaryPhi::Table(t);
        assert!(phi.admissibility().admissible);
        assert!(PhiTable::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(PhiTable::new(vec![0.0, PI, 2.0], vec![0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn cubic_series_coefficients() {
        assert_eq!(CharacteristicF::Cubic.to_series_coeffs(), vec![-0.125, -0.75, -1.5, -1.0]);
        let poly = CharacteristicF::Polynomial(vec![-1.0, -3.0, -3.0, -1.0]);
        for (a, b) in poly.to_series_coeffs().iter().zip(CharacteristicF::Cubic.to_series_coeffs()) {
            assert!((a - b).abs() < 1e-15);
        }
        let series = CharacteristicF::PowerSeries(CharacteristicF::Cubic.to_series_coeffs());
        for x in [-1.0, -0.7, -0.25, 0.0] {
            assert!((series.value(x) - CharacteristicF::Cubic.value(x)).abs() < 1e-15);
            assert!((series.derivative(x) - CharacteristicF::Cubic.derivative(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn characteristic_admissibility() {
        assert!(CharacteristicF::Cubic.admissibility().admissible);
        assert!(CharacteristicF::Polynomial(vec![-1.0, -1.0]).admissibility().admissible);
        // f(x) = (1 + x)² − ... increasing somewhere
        let bad = CharacteristicF::Polynomial(vec![0.0, 0.0, 1.0, 1.0]);
        let report = bad.admissibility();
        assert!(!report.admissible);
        assert!(report.issues.iter().any(|i| i.contains("not negative")));
        let shifted = CharacteristicF::Polynomial(vec![1.0, -1.0]);
        assert!(!shifted.admissibility().admissible);
    }

    #[test]
    fn parse_characteristic() {
        assert_eq!("cubic".parse::<CharacteristicF>().unwrap(), CharacteristicF::Cubic);
        assert_eq!(
            "poly:-1,-1".parse::<CharacteristicF>().unwrap(),
            CharacteristicF::Polynomial(vec![-1.0, -1.0])
        );
        assert_eq!(
            "series:0,-1".parse::<CharacteristicF>().unwrap(),
            CharacteristicF::PowerSeries(vec![0.0, -1.0])
        );
        assert!("poly:a".parse::<CharacteristicF>().is_err());
        assert!("spline:1".parse::<CharacteristicF>().is_err());
        let f = CharacteristicF::Polynomial(vec![-0.5, -1.25]);
        assert_eq!(f.label().parse::<CharacteristicF>().unwrap(), f);
    }

    #[test]
    fn complex_evaluation_matches_real() {
        let f = CharacteristicF::Polynomial(vec![0.3, -1.0, 0.5, -0.25]);
        for x in [-1.0, -0.4, 0.2] {
            let (v, d) = f.polynomial_complex(Complex64::new(x, 0.0)).unwrap();
            assert!((v.re - f.value(x)).abs() < 1e-15 && v.im == 0.0);
            assert!((d.re - f.derivative(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn taylor_shift_round_trip() {
        let c = vec![1.0, -2.0, 0.5, 3.0, -1.5];
        let back = taylor_shift(&taylor_shift(&c, 0.7), -0.7);
        for (a, b) in c.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn nu_from_f() {
        let nu = NuFunction::from_f(CharacteristicF::Cubic);
        assert_eq!(nu.value(0.0), 0.75);
        assert_eq!(nu.value(-1.0), 0.0);
        let lin = NuFunction::from_f(CharacteristicF::Polynomial(vec![-1.0, -1.0]));
        assert_eq!(lin.value(0.3), 1.0);
        assert!(matches!(lin.provenance(), NuProvenance::FromF { .. }));
    }
}
