//! Finite-difference residuals, interface checks and the aggregated
//! verification report.

use super::field::{Field, GridSpec, InterfaceSample, TaggedField};
use super::NumericsError;
use crate::families::{Equation, OperatorTag};
use crate::geometry::Point;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Residuals below `max(10⁻¹², ORDER_ROUNDOFF/h²)` are treated as round-off
/// when estimating orders.
const ORDER_ROUNDOFF: f64 = 1e-13;

fn second_differences<F: Field + ?Sized>(
    field: &F,
    p: Point,
    h: f64,
) -> Result<(f64, f64), NumericsError> {
    let stencil = [p, p.offset(h, 0.0), p.offset(-h, 0.0), p.offset(0.0, h), p.offset(0.0, -h)];
    if stencil.iter().any(|&q| !field.contains(q)) {
        return Err(NumericsError::StencilOutOfDomain { point: p, h });
    }
    let [c, e, w, n, s] = stencil.map(|q| field.value(q));
    let h2 = h * h;
    Ok(((e - 2.0 * c + w) / h2, (n - 2.0 * c + s) / h2))
}

/// Central-difference residual of the operator named by `op` at `p`.
///
/// `Laplace` gives `U_xx + U_yy`, `Wave` gives `U_xx − U_yy` (both signed),
/// `BothDegenerate` the larger of their magnitudes, and `Interface` the
/// degenerate form `U_xx` that equation (1) reduces to where `U = 0`.
pub fn fd_residual<F: Field + ?Sized>(
    field: &F,
    p: Point,
    h: f64,
    op: OperatorTag,
) -> Result<f64, NumericsError> {
    let (uxx, uyy) = second_differences(field, p, h)?;
    Ok(match op {
        OperatorTag::Laplace => uxx + uyy,
        OperatorTag::Wave => uxx - uyy,
        OperatorTag::BothDegenerate => (uxx + uyy).abs().max((uxx - uyy).abs()),
        OperatorTag::Interface => uxx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMethod {
    Analytic,
    OneSidedDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceJump {
    pub max_jump: f64,
    pub method: GradientMethod,
    pub samples: usize,
    pub worst: Option<Point>,
}

/// Jump of the normal derivative across the interface, from second-order
/// one-sided differences on each side. `None` if a stencil leaves the domain.
pub fn one_sided_normal_jump<F: Field + ?Sized>(
    field: &F,
    sample: &InterfaceSample,
    h: f64,
) -> Option<f64> {
    let (nx, ny) = sample.normal;
    let at = |s: f64| sample.point.offset(s * h * nx, s * h * ny);
    let pts = [at(-2.0), at(-1.0), at(0.0), at(1.0), at(2.0)];
    if pts.iter().any(|&q| !field.contains(q)) {
        return None;
    }
    let [m2, m1, c, p1, p2] = pts.map(|q| field.value(q));
    let plus = (-3.0 * c + 4.0 * p1 - p2) / (2.0 * h);
    let minus = (3.0 * c - 4.0 * m1 + m2) / (2.0 * h);
    Some((plus - minus).abs())
}

/// Largest gradient jump over `curve`: analytic branch gradients when the
/// field provides them, one-sided differences of spacing `h` otherwise.
pub fn interface_c1_check<F: TaggedField + ?Sized>(
    field: &F,
    curve: &[InterfaceSample],
    h: f64,
) -> InterfaceJump {
    let analytic = curve
        .first()
        .is_some_and(|s| field.branch_gradients(s.point).is_some());
    let mut out = InterfaceJump {
        max_jump: 0.0,
        method: if analytic { GradientMethod::Analytic } else { GradientMethod::OneSidedDifference },
        samples: 0,
        worst: None,
    };
    for sample in curve {
        let jump = if analytic {
            field
                .branch_gradients(sample.point)
                .map(|[a, b]| (a.0 - b.0).hypot(a.1 - b.1))
        } else {
            one_sided_normal_jump(field, sample, h)
        };
        let Some(jump) = jump else { continue };
        out.samples += 1;
        if !(jump <= out.max_jump) {
            out.max_jump = jump;
            out.worst = Some(sample.point);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub residual: f64,
    pub jump_analytic: f64,
    pub jump_difference: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { residual: 1e-6, jump_analytic: 1e-10, jump_difference: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub h: f64,
    /// Interface band half-width in multiples of `h`.
    pub band_factor: f64,
    pub interface_samples: usize,
    pub tolerances: Tolerances,
}

impl VerifyOptions {
    pub fn with_h(h: f64) -> Self {
        Self { h, band_factor: 3.0, interface_samples: 100, tolerances: Tolerances::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionResidual {
    pub nodes: usize,
    pub max_abs: f64,
    /// Same statistic with step `h/2`, for the order estimate.
    pub max_abs_half_step: f64,
    pub worst: Option<Point>,
}

/// Outcome of [`verify_solution`]; every maximum is over the recorded
/// node counts and every parameter used is recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub field: String,
    pub equation: Equation,
    pub grid: GridSpec,
    pub options: VerifyOptions,
    pub kernel_mode: Option<String>,
    pub nodes_total: usize,
    pub nodes_in_domain: usize,
    pub nodes_in_band: usize,
    pub stencils_skipped: usize,
    pub nonfinite_values: usize,
    /// Declared-operator residual per operator tag.
    pub regions: BTreeMap<String, RegionResidual>,
    pub max_residual: f64,
    /// Residual of the equation itself: `|U_xx + sign(U)·U_yy|` or
    /// `min(|U_xx + U_yy|, |U_xx − U_yy|)`.
    pub max_equation_residual: f64,
    pub observed_order: Option<f64>,
    pub interface: Option<InterfaceJump>,
    pub sign_checked: bool,
    pub sign_violations: usize,
    pub first_sign_violation: Option<Point>,
    pub verdict: Verdict,
}

impl ResidualReport {
    pub fn signs_consistent(&self) -> bool {
        self.sign_violations == 0
    }

    pub fn interface_ok(&self) -> bool {
        match &self.interface {
            None => true,
            Some(j) => {
                let tol = match j.method {
                    GradientMethod::Analytic => self.options.tolerances.jump_analytic,
                    GradientMethod::OneSidedDifference => self.options.tolerances.jump_difference,
                };
                j.samples > 0 && j.max_jump <= tol
            }
        }
    }
}

enum NodeOutcome {
    Outside,
    Checked {
        p: Point,
        tag: OperatorTag,
        sign_violation: bool,
        in_band: bool,
        // (declared residual at h, at h/2, equation residual at h)
        residual: Option<(f64, f64, f64)>,
        finite: bool,
    },
}

fn sign_violation(equation: Equation, tag: OperatorTag, u: f64) -> bool {
    equation == Equation::SignSwitching
        && match tag {
            OperatorTag::Laplace => u < 0.0,
            OperatorTag::Wave => u > 0.0,
            _ => false,
        }
}

fn equation_residual<F: Field + ?Sized>(
    field: &F,
    equation: Equation,
    p: Point,
    h: f64,
) -> Result<f64, NumericsError> {
    let (uxx, uyy) = second_differences(field, p, h)?;
    Ok(match equation {
        Equation::SignSwitching => {
            let u = field.value(p);
            let s = if u > 0.0 {
                1.0
            } else if u < 0.0 {
                -1.0
            } else {
                0.0
            };
            (uxx + s * uyy).abs()
        }
        Equation::Product => (uxx + uyy).abs().min((uxx - uyy).abs()),
    })
}

fn check_node<F: TaggedField + ?Sized>(field: &F, p: Point, opts: &VerifyOptions) -> NodeOutcome {
    if !field.contains(p) {
        return NodeOutcome::Outside;
    }
    let h = opts.h;
    let u = field.value(p);
    let tag = field.operator(p);
    let equation = field.equation();
    let in_band = field.interface_distance(p) < opts.band_factor * h;
    let residual = if in_band {
        None
    } else {
        match (
            fd_residual(field, p, h, tag),
            fd_residual(field, p, 0.5 * h, tag),
            equation_residual(field, equation, p, h),
        ) {
            (Ok(r), Ok(r2), Ok(e)) => Some((r.abs(), r2.abs(), e)),
            _ => None,
        }
    };
    let finite = u.is_finite() && residual.is_none_or(|(a, b, c)| a.is_finite() && b.is_finite() && c.is_finite());
    NodeOutcome::Checked {
        p,
        tag,
        sign_violation: sign_violation(equation, tag, u),
        in_band,
        residual,
        finite,
    }
}

/// [`verify_with`] using default tolerances and a `3h` interface band.
pub fn verify_solution<F: TaggedField + ?Sized>(field: &F, grid: &GridSpec, h: f64) -> ResidualReport {
    verify_with(field, grid, &VerifyOptions::with_h(h))
}

/// Aggregates declared-operator residuals over `grid` (skipping the
/// interface band and stencils that leave the domain), the interface
/// gradient jump and, for equation-(1) fields, sign/tag consistency.
pub fn verify_with<F: TaggedField + ?Sized>(
    field: &F,
    grid: &GridSpec,
    opts: &VerifyOptions,
) -> ResidualReport {
    let nodes = grid.nodes();
    let outcomes: Vec<NodeOutcome> = nodes.par_iter().map(|&p| check_node(field, p, opts)).collect();

    let mut report = ResidualReport {
        field: field.label(),
        equation: field.equation(),
        grid: *grid,
        options: *opts,
        kernel_mode: None,
        nodes_total: nodes.len(),
        nodes_in_domain: 0,
        nodes_in_band: 0,
        stencils_skipped: 0,
        nonfinite_values: 0,
        regions: BTreeMap::new(),
        max_residual: 0.0,
        max_equation_residual: 0.0,
        observed_order: None,
        interface: None,
        sign_checked: field.equation() == Equation::SignSwitching,
        sign_violations: 0,
        first_sign_violation: None,
        verdict: Verdict::Fail,
    };
    let mut max_half = 0.0f64;
    for outcome in outcomes {
        let NodeOutcome::Checked { p, tag, sign_violation, in_band, residual, finite } = outcome else {
            continue;
        };
        report.nodes_in_domain += 1;
        if !finite {
            report.nonfinite_values += 1;
        }
        if sign_violation {
            report.sign_violations += 1;
            report.first_sign_violation.get_or_insert(p);
        }
        if in_band {
            report.nodes_in_band += 1;
            continue;
        }
        let Some((r, r_half, e)) = residual else {
            report.stencils_skipped += 1;
            continue;
        };
        let region = report.regions.entry(tag.as_str().to_string()).or_insert(RegionResidual {
            nodes: 0,
            max_abs: 0.0,
            max_abs_half_step: 0.0,
            worst: None,
        });
        region.nodes += 1;
        if r > region.max_abs {
            region.max_abs = r;
            region.worst = Some(p);
        }
        region.max_abs_half_step = region.max_abs_half_step.max(r_half);
        report.max_residual = report.max_residual.max(r);
        report.max_equation_residual = report.max_equation_residual.max(e);
        max_half = max_half.max(r_half);
    }
    if report.max_residual > (ORDER_ROUNDOFF / (opts.h * opts.h)).max(1e-12) && max_half > 0.0 {
        report.observed_order = Some((report.max_residual / max_half).log2());
    }

    let curve = field.interface_samples(opts.interface_samples);
    if !curve.is_empty() {
        report.interface = Some(interface_c1_check(field, &curve, opts.h));
    }

    let checked: usize = report.regions.values().map(|r| r.nodes).sum();
    let ok = checked > 0
        && report.nonfinite_values == 0
        && report.max_residual <= opts.tolerances.residual
        && report.signs_consistent()
        && report.interface_ok();
    report.verdict = Verdict::from_bool(ok);
    report
}
