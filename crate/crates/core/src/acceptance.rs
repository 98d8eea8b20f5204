//! The nine acceptance criteria, each runnable on its own and reporting
//! what it measured.

use crate::families::{validate, FamilyKind, FamilySpec, Solution};
use crate::geometry::{classify_tricomi, Point, Region, DEFAULT_BOUNDARY_TOL};
use crate::numerics::{natural_grid, oracle_halfdisk, verify_with, GridSpec, Perturbed, VerifyOptions};
use crate::tricomi::{
    dalembert_extend, harmonic_eval_d1, nu_eval, positivity_probe, problem2_d1, problem2_d2, series_eval_d1,
    BoundaryPhi, CharacteristicF, KernelConstantMode, NuFunction, PhiTable, TopDownField, DEFAULT_SERIES_TERMS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{LN_2, PI, TAU};
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed_s: f64,
    pub details: Vec<String>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed_s
        )
    }
}

struct Recorder {
    id: u8,
    name: &'static str,
    start: Instant,
    passed: bool,
    details: Vec<String>,
}

impl Recorder {
    fn new(id: u8, name: &'static str) -> Self {
        Self { id, name, start: Instant::now(), passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn finish(self) -> CriterionResult {
        CriterionResult {
            id: self.id,
            name: self.name,
            passed: self.passed,
            elapsed_s: self.start.elapsed().as_secs_f64(),
            details: self.details,
        }
    }
}

pub const CRITERIA: [(u8, &str, fn() -> CriterionResult); 9] = [
    (1, "closed-form family suite", criterion_1),
    (2, "boundary-data exactness", criterion_2),
    (3, "tricomi-1 exact pipeline", criterion_3),
    (4, "kernel adjudication", criterion_4),
    (5, "oracle cross-validation", criterion_5),
    (6, "tricomi-2 cubic example", criterion_6),
    (7, "continuation equivalence", criterion_7),
    (8, "hopf and negativity properties", criterion_8),
    (9, "negative controls", criterion_9),
];

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(_, _, run)| run()).collect()
}

pub const FAMILY_GRID: usize = 201;
pub const FAMILY_H: f64 = 1e-3;
const FAMILY_SECONDS: f64 = 5.0;

fn default_solutions() -> Vec<Solution> {
    FamilyKind::ALL
        .iter()
        .map(|k| validate(k.default_spec()).expect("default parameters satisfy every constraint"))
        .collect()
}

/// Every family at default parameters through [`verify_with`] on its
/// natural 201-point grid with `h = 10⁻³`.
pub fn criterion_1() -> CriterionResult {
    let mut rec = Recorder::new(1, CRITERIA[0].1);
    let opts = VerifyOptions::with_h(FAMILY_H);
    for s in default_solutions() {
        let start = Instant::now();
        let report = verify_with(&s, &natural_grid(&s, FAMILY_GRID), &opts);
        let seconds = start.elapsed().as_secs_f64();
        let jump = report.interface.map_or("none".to_string(), |j| format!("{:.1e}", j.max_jump));
        let order = report.observed_order.map_or("-".to_string(), |o| format!("{o:.2}"));
        rec.check(
            report.verdict.passed() && seconds <= FAMILY_SECONDS,
            format!(
                "{:<26} residual {:.2e} (residual/h^2 {:.3}, order {}), jump {}, sign violations {}, {:.2} s",
                s.kind().name(),
                report.max_residual,
                report.max_residual / (FAMILY_H * FAMILY_H),
                order,
                jump,
                report.sign_violations,
                seconds
            ),
        );
    }
    rec.finish()
}

/// `U = H` and `∂U/∂r = K` on `r = R` at 360 angles, and the Cauchy radius.
pub fn criterion_2() -> CriterionResult {
    let mut rec = Recorder::new(2, CRITERIA[1].1);
    let mut specs: Vec<FamilySpec> = FamilyKind::ALL.iter().map(|k| k.default_spec()).collect();
    specs.push(FamilySpec::CauchyEq1Mixed { radius: 1.0, boundary_value: LN_2, boundary_slope: 1.0 });
    for spec in specs {
        let s = validate(spec).expect("valid parameters");
        let (Some(radius), (h, k)) = (s.disk_radius(), s.spec().boundary_data()) else { continue };
        let mut err_h = 0.0f64;
        let mut err_k = 0.0f64;
        for j in 0..360 {
            let theta = TAU * j as f64 / 360.0;
            if let Some(h) = h {
                err_h = err_h.max((s.eval_polar(radius, theta).unwrap_or(f64::NAN) - h).abs());
            }
            if let Some(k) = k {
                err_k = err_k.max((s.radial_derivative(radius, theta).unwrap_or(f64::NAN) - k).abs());
            }
        }
        let fmt_err = |e: Option<f64>, v: f64| e.map_or("-".to_string(), |_| format!("{v:.1e}"));
        rec.check(
            err_h <= 1e-12 && err_k <= 1e-12,
            format!(
                "{:<26} |U - H| {}, |dU/dr - K| {} ({:?})",
                s.kind().name(),
                fmt_err(h, err_h),
                fmt_err(k, err_k),
                s.interface()
            ),
        );
    }
    let a = crate::families::cauchy_interface_radius(1.0, LN_2, 1.0).unwrap_or(f64::NAN);
    rec.check((a - 0.5).abs() <= 1e-15, format!("a(R=1, H=ln 2, K=1) = {a}"));
    rec.finish()
}

fn tricomi_grid(n: usize) -> Vec<Point> {
    GridSpec::Cartesian { nx: n, ny: n, x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 1.0 }
        .nodes()
        .into_iter()
        .filter(|&p| classify_tricomi(p, DEFAULT_BOUNDARY_TOL).in_closed_domain())
        .collect()
}

/// `φ = sin θ` through the whole top-down pipeline reproduces `U = y`.
pub fn criterion_3() -> CriterionResult {
    let mut rec = Recorder::new(3, CRITERIA[2].1);
    let field = match TopDownField::new(BoundaryPhi::SinTheta, 256, KernelConstantMode::CorrectedConstant) {
        Ok(f) => f,
        Err(e) => {
            rec.check(false, format!("pipeline construction failed: {e}"));
            return rec.finish();
        }
    };
    let nodes = tricomi_grid(101);
    let errors: Vec<f64> = nodes
        .par_iter()
        .map(|&p| field.eval(p).map_or(f64::INFINITY, |u| (u - p.y).abs()))
        .collect();
    let worst = errors.iter().copied().fold(0.0, f64::max);
    rec.check(worst <= 1e-6, format!("max |U - y| = {worst:.2e} over {} nodes of D1 and D2", nodes.len()));
    let trace = (0..100)
        .map(|k| {
            let x = -1.0 + k as f64 / 99.0;
            field.trace_ac(x).map_or(f64::INFINITY, |f| (f + x + 1.0).abs())
        })
        .fold(0.0, f64::max);
    rec.check(trace <= 1e-8, format!("max |trace_ac + (x + 1)| = {trace:.2e} at 100 samples"));
    let seconds = rec.elapsed();
    rec.check(seconds <= 10.0, format!("runtime {seconds:.2} s (limit 10 s)"));
    rec.finish()
}

/// Both kernel constants against exact `ν` of `U = y` and `U = 2xy`.
pub fn criterion_4() -> CriterionResult {
    let mut rec = Recorder::new(4, CRITERIA[3].1);
    let xs: Vec<f64> = (0..50).map(|k| -0.98 + 1.96 * k as f64 / 49.0).collect();
    let cases: [(&str, BoundaryPhi, KernelConstantMode, fn(f64) -> f64); 3] = [
        ("paper constant, sin", BoundaryPhi::SinTheta, KernelConstantMode::PaperConstant, |_| 2.0),
        ("corrected constant, sin", BoundaryPhi::SinTheta, KernelConstantMode::CorrectedConstant, |_| 1.0),
        ("corrected constant, sin 2", BoundaryPhi::Sin2Theta, KernelConstantMode::CorrectedConstant, |x| 2.0 * x),
    ];
    for (label, phi, mode, expected) in cases {
        let worst = xs
            .iter()
            .map(|&x| nu_eval(&phi, x, 256, mode).map_or(f64::INFINITY, |v| (v - expected(x)).abs()))
            .fold(0.0, f64::max);
        rec.check(worst <= 1e-8, format!("{label}: max deviation {worst:.2e} from the predicted value"));
    }
    let ratio = nu_eval(&BoundaryPhi::SinTheta, 0.3, 256, KernelConstantMode::PaperConstant).unwrap_or(f64::NAN)
        / nu_eval(&BoundaryPhi::SinTheta, 0.3, 256, KernelConstantMode::CorrectedConstant).unwrap_or(f64::NAN);
    rec.note(format!("paper/corrected ratio {ratio}; exact nu of U = y is 1"));
    rec.finish()
}

fn random_d1(rng: &mut ChaCha8Rng, margin: f64) -> Point {
    loop {
        let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(margin..1.0));
        if p.norm() < 1.0 - margin {
            return p;
        }
    }
}

fn random_d2(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let p = Point::new(x, -rng.gen_range(0.0..(1.0 - x.abs())));
        if classify_tricomi(p, DEFAULT_BOUNDARY_TOL) == Region::D2Triangle {
            return p;
        }
    }
}

/// Finite-difference oracle against the boundary integral.
pub fn criterion_5() -> CriterionResult {
    let mut rec = Recorder::new(5, CRITERIA[4].1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let probes: Vec<Point> = (0..100).map(|_| random_d1(&mut rng, 0.02)).collect();
    for phi in [BoundaryPhi::SinTheta, BoundaryPhi::Sin2Theta] {
        let reference = |p: Point| harmonic_eval_d1(&phi, p, 256).unwrap_or(f64::NAN);
        let mut node_errors = Vec::new();
        // interior nodes of the coarsest grid are nodes of the finer ones
        let coarse: Vec<(usize, usize, f64)> = (1..64)
            .flat_map(|i| (1..64).map(move |j| (i, j)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(i, j)| {
                let p = Point::from_polar(i as f64 / 64.0, PI * j as f64 / 64.0);
                (i, j, reference(p))
            })
            .collect();
        for n in [65, 129, 257] {
            let oracle = match oracle_halfdisk(&phi, n, n) {
                Ok(o) => o,
                Err(e) => {
                    rec.check(false, format!("{phi} {n}x{n}: {e}"));
                    return rec.finish();
                }
            };
            let step = (n - 1) / 64;
            let err = coarse
                .iter()
                .map(|&(i, j, u)| (oracle.node_value(i * step, j * step) - u).abs())
                .fold(0.0, f64::max);
            let diag = oracle.diagnostics();
            rec.note(format!(
                "{phi} {n}x{n}: {} sweeps, final update {:.1e}, max node error {err:.3e}",
                diag.sweeps, diag.final_update
            ));
            node_errors.push(err);
            if n == 129 {
                let worst = probes
                    .iter()
                    .map(|&p| (oracle.value_at(p).unwrap_or(f64::NAN) - reference(p)).abs())
                    .fold(0.0, f64::max);
                rec.check(worst <= 1e-2, format!("{phi} 129x129: max |oracle - boundary integral| {worst:.2e} at 100 points"));
            }
        }
        for (w, label) in node_errors.windows(2).zip(["65/129", "129/257"]) {
            let order = (w[0] / w[1]).log2();
            rec.check((order - 2.0).abs() <= 0.2, format!("{phi} observed order {label}: {order:.3}"));
        }
    }
    let seconds = rec.elapsed();
    rec.check(seconds <= 60.0, format!("runtime {seconds:.2} s (limit 60 s)"));
    rec.finish()
}

/// Closed forms of the cubic example and the location of its zero level.
pub fn criterion_6() -> CriterionResult {
    let mut rec = Recorder::new(6, CRITERIA[5].1);
    let f = CharacteristicF::Cubic;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut err_d1 = 0.0f64;
    let mut err_d2 = 0.0f64;
    for _ in 0..500 {
        let p = random_d1(&mut rng, 0.0);
        let exact = p.y / 4.0 * (3.0 * (p.x + 1.0).powi(2) - p.y * p.y);
        err_d1 = err_d1.max((problem2_d1(&f, p).unwrap_or(f64::NAN) - exact).abs());
        let q = random_d2(&mut rng);
        let exact = q.y / 4.0 * (3.0 * (q.x + 1.0).powi(2) + q.y * q.y);
        err_d2 = err_d2.max((problem2_d2(&f, q).unwrap_or(f64::NAN) - exact).abs());
    }
    rec.check(err_d1 <= 1e-12, format!("D1: max |U - (y/4)(3(x+1)^2 - y^2)| = {err_d1:.2e} at 500 points"));
    rec.check(err_d2 <= 1e-12, format!("D2: max |U - (y/4)(3(x+1)^2 + y^2)| = {err_d2:.2e} at 500 points"));
    match positivity_probe(&f, 200) {
        Ok(report) => {
            let dist = report
                .max_zero_level_distance(|p| (3f64.sqrt() * (p.x + 1.0) - p.y).abs() / 2.0)
                .unwrap_or(f64::INFINITY);
            rec.check(
                dist <= 2.0 / 200.0,
                format!(
                    "probe 200x200: {} zero-level samples, max distance to y = sqrt(3)(x+1) {dist:.2e} (limit 1e-2)",
                    report.zero_level.len()
                ),
            );
        }
        Err(e) => rec.check(false, format!("probe failed: {e}")),
    }
    rec.finish()
}

/// Random `f(x) = −Σ b_k (x+1)^(k+1)/(k+1)` with `b_k ≥ 0`, `b_0 > 0`:
/// `f(−1) = 0` and `f′ < 0` on `(−1, 0]`.
pub fn random_admissible_polynomial(rng: &mut impl Rng, degree: usize) -> CharacteristicF {
    let mut around_a = vec![0.0; degree + 1];
    for k in 0..degree {
        let b = if k == 0 { rng.gen_range(0.1..1.0) } else { rng.gen_range(0.0..1.0) };
        around_a[k + 1] = -b / (k + 1) as f64;
    }
    CharacteristicF::Polynomial(crate::tricomi::taylor_shift(&around_a, 1.0))
}

/// Power series against the direct complex evaluation.
pub fn criterion_7() -> CriterionResult {
    let mut rec = Recorder::new(7, CRITERIA[6].1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut all_admissible = true;
    for _ in 0..20 {
        let degree = rng.gen_range(1..=8);
        let f = random_admissible_polynomial(&mut rng, degree);
        all_admissible &= f.admissibility().admissible;
        let coeffs = f.to_series_coeffs();
        for _ in 0..200 {
            let p = random_d1(&mut rng, 1e-3);
            let series = series_eval_d1(&coeffs, p, DEFAULT_SERIES_TERMS).map_or(f64::NAN, |s| s.value);
            let direct = problem2_d1(&f, p).unwrap_or(f64::NAN);
            let diff = (series - direct).abs();
            worst = if diff.is_nan() { f64::INFINITY } else { worst.max(diff) };
        }
    }
    rec.check(all_admissible, "all 20 random polynomials are admissible".to_string());
    rec.check(worst <= 1e-10, format!("max |series - direct| = {worst:.2e} over 20 x 200 points"));
    rec.finish()
}

/// `ν > 0` for admissible `φ`, and the d'Alembert extension of positive
/// `ν` is negative inside `D2`.
pub fn criterion_8() -> CriterionResult {
    let mut rec = Recorder::new(8, CRITERIA[7].1);
    for phi in [BoundaryPhi::SinTheta, BoundaryPhi::SinCubed] {
        let min = (0..199)
            .map(|k| nu_eval(&phi, -0.99 + 0.01 * k as f64, 256, KernelConstantMode::CorrectedConstant).unwrap_or(f64::NAN))
            .fold(f64::INFINITY, |m, v| if v.is_nan() { f64::NEG_INFINITY } else { m.min(v) });
        rec.check(min > 0.0, format!("phi = {phi}: min nu on [-0.99, 0.99] = {min:.4e}"));
    }
    let mut nus = vec![NuFunction::constant(1.0), NuFunction::from_f(CharacteristicF::Cubic)];
    for phi in [BoundaryPhi::SinTheta, BoundaryPhi::SinCubed] {
        if let Ok(nu) = NuFunction::analytic(phi, 256, KernelConstantMode::CorrectedConstant) {
            nus.push(nu);
        }
    }
    let interior: Vec<Point> = GridSpec::Cartesian { nx: 41, ny: 21, x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 0.0 }
        .nodes()
        .into_iter()
        .filter(|&p| classify_tricomi(p, DEFAULT_BOUNDARY_TOL) == Region::D2Triangle)
        .collect();
    for nu in &nus {
        let max = interior
            .par_iter()
            .map(|&p| dalembert_extend(nu, p, 256).map_or(f64::INFINITY, |v| v.value))
            .reduce(|| f64::NEG_INFINITY, f64::max);
        rec.check(
            max < 0.0,
            format!("{:?}: max U over {} interior D2 nodes = {max:.3e}", nu.provenance(), interior.len()),
        );
    }
    rec.finish()
}

/// Corrupted fields must fail verification and inadmissible data must be
/// flagged.
pub fn criterion_9() -> CriterionResult {
    let mut rec = Recorder::new(9, CRITERIA[8].1);
    let opts = VerifyOptions::with_h(FAMILY_H);
    for s in default_solutions() {
        let corrupted = Perturbed::new(&s, |p| 0.01 * p.x.powi(3), |p| (0.03 * p.x * p.x, 0.0));
        let report = verify_with(&corrupted, &natural_grid(&s, FAMILY_GRID), &opts);
        rec.check(
            !report.verdict.passed(),
            format!("{:<26} + 0.01 x^3: verdict {:?}, residual {:.2e}", s.kind().name(), report.verdict, report.max_residual),
        );
    }
    let increasing = CharacteristicF::Polynomial(vec![0.0, 0.0, 1.0, 1.0]);
    let flagged = !increasing.admissibility().admissible;
    let probe_flagged = positivity_probe(&increasing, 50).is_ok_and(|r| !r.admissibility.admissible);
    rec.check(flagged && probe_flagged, format!("f = x^2 + x^3 (f' > 0 near -1) flagged: {flagged}, in probe: {probe_flagged}"));
    let negative_table = PhiTable::new(
        (0..=90).map(|k| PI * k as f64 / 90.0).collect(),
        (0..=90).map(|k| -(PI * k as f64 / 90.0).sin()).collect(),
    )
    .map(BoundaryPhi::Table);
    for (label, phi) in [("sin 2theta", Ok(BoundaryPhi::Sin2Theta)), ("-sin theta table", negative_table)] {
        let flagged = phi.map(|p| !p.admissibility().admissible).unwrap_or(false);
        rec.check(flagged, format!("phi = {label} flagged inadmissible: {flagged}"));
    }
    rec.finish()
}
