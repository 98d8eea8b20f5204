//! Command-line front end: evaluates families and the two Tricomi pipelines
//! onto grids, verifies them, and runs the acceptance suite.

mod config;
mod output;

pub use config::RunConfig;
pub use output::{read_phi_table, write_field_csv, FieldRow};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Debug;
use std::path::{Path, PathBuf};
use thiserror::Error;
use typechange::acceptance::{CriterionResult, CRITERIA};
use typechange::families::{validate, Callable1D, FamilyError, FamilyKind, FamilyParams, Solution};
use typechange::geometry::{classify_tricomi, Point, Region, DEFAULT_BOUNDARY_TOL};
use typechange::numerics::{
    natural_grid, oracle_halfdisk, verify_with, Field, GridSpec, OracleDiagnostics, ResidualReport, TaggedField, Tolerances,
    VerifyOptions,
};
use typechange::tricomi::{
    positivity_probe, BottomUpField, BoundaryPhi, CharacteristicF, KernelConstantMode, NuProvenance, ProbeReport,
    TopDownField, TricomiError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {msg}")]
    Usage { flag: &'static str, msg: String },
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

/// Leading identifier of a `Debug` rendering, i.e. the enum variant.
fn variant_name(e: &impl Debug) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !(c.is_alphanumeric() || c == '_')).next().unwrap_or_default().to_string()
}

impl From<TricomiError> for CliError {
    fn from(e: TricomiError) -> Self {
        let name = match &e {
            TricomiError::Numerics(inner) => format!("NumericsError::{}", variant_name(inner)),
            other => format!("TricomiError::{}", variant_name(other)),
        };
        CliError::Numeric(format!("{name}: {e}"))
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        CliError::Numeric(format!("FamilyError::{}: {e}", variant_name(&e)))
    }
}

/// Whether a completed command passed its checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Parser)]
#[command(name = "typechange", version, about = "Mixed-type PDE laboratory: closed-form families and Tricomi pipelines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form type-changing families
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Top-down Tricomi problem from arc data phi
    Tricomi1(Tricomi1Args),
    /// Bottom-up Tricomi problem from characteristic data f
    Tricomi2(Tricomi2Args),
    /// Runs the acceptance criteria and prints a PASS/FAIL table
    Suite(SuiteArgs),
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Evaluates a family on its natural grid and writes a CSV
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finite-difference residual, interface and sign checks
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Stencil spacing
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        h: f64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        tol_residual: Option<f64>,
        #[arg(long)]
        tol_jump_analytic: Option<f64>,
        #[arg(long)]
        tol_jump_difference: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// One of the thirteen family names, e.g. dirichlet-eq1-mixed
    #[arg(long)]
    pub family: String,
    /// Disk radius
    #[arg(long = "R", allow_negative_numbers = true)]
    pub radius: Option<f64>,
    /// Dirichlet value on r = R
    #[arg(long = "H", allow_negative_numbers = true)]
    pub boundary_value: Option<f64>,
    /// Radial slope on r = R
    #[arg(long = "K", allow_negative_numbers = true)]
    pub boundary_slope: Option<f64>,
    /// Free constant
    #[arg(long = "C", allow_negative_numbers = true)]
    pub constant: Option<f64>,
    /// Interface radius
    #[arg(long = "a", allow_negative_numbers = true)]
    pub interface_radius: Option<f64>,
    /// Goursat datum on y = x, ascending coefficients c0,c1,...
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub f1: Option<Vec<f64>>,
    /// Goursat datum on y = -x, ascending coefficients c0,c1,...
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub f2: Option<Vec<f64>>,
    /// Nodes per grid direction
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct Tricomi1Args {
    /// sin, sin2, sin3, or a two-column theta,phi CSV file
    #[arg(long)]
    pub phi: String,
    #[arg(long, default_value_t = 256)]
    pub n_quad: usize,
    /// paper or corrected
    #[arg(long, default_value = "corrected")]
    pub kernel: String,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Also solve the finite-difference oracle on an n x n polar grid
    #[arg(long)]
    pub oracle: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Tricomi2Args {
    /// cubic, poly:c0,c1,... or series:a0,a1,...
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Locate the positive set of the continuation and its zero level
    #[arg(long)]
    pub probe: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Subset of criteria to run, e.g. 2,6
    #[arg(long, value_delimiter = ',')]
    pub criteria: Option<Vec<u8>>,
    /// Print the details of passing criteria too
    #[arg(long)]
    pub verbose: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Parses `args` (program name first), executes, and returns the exit code:
/// 0 on success, 1 on a failed check or numeric failure, 2 on bad usage.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Family(FamilyCommand::Eval { family, out }) => family_eval(&family, &out),
        Command::Family(FamilyCommand::Verify { family, h, report, tol_residual, tol_jump_analytic, tol_jump_difference }) => {
            let defaults = Tolerances::default();
            let tolerances = Tolerances {
                residual: tol_residual.unwrap_or(defaults.residual),
                jump_analytic: tol_jump_analytic.unwrap_or(defaults.jump_analytic),
                jump_difference: tol_jump_difference.unwrap_or(defaults.jump_difference),
            };
            family_verify(&family, h, tolerances, report.as_deref())
        }
        Command::Tricomi1(args) => tricomi1(&args),
        Command::Tricomi2(args) => tricomi2(&args),
        Command::Suite(args) => suite(&args),
    }
}

fn family_config(args: &FamilyArgs, subcommand: &str) -> RunConfig {
    RunConfig {
        subcommand: subcommand.into(),
        selector: args.family.clone(),
        radius: args.radius,
        boundary_value: args.boundary_value,
        boundary_slope: args.boundary_slope,
        constant: args.constant,
        interface_radius: args.interface_radius,
        goursat: match (&args.f1, &args.f2) {
            (None, None) => None,
            (f1, f2) => Some((f1.clone().unwrap_or_default(), f2.clone().unwrap_or_default())),
        },
        grid: Some(args.grid),
        ..RunConfig::default()
    }
}

fn build_family(args: &FamilyArgs) -> Result<Solution, CliError> {
    let kind = FamilyKind::from_name(&args.family).ok_or_else(|| CliError::Usage {
        flag: "--family",
        msg: format!(
            "unknown family {:?}; expected one of {}",
            args.family,
            FamilyKind::ALL.map(FamilyKind::name).join(", ")
        ),
    })?;
    if args.grid < 2 {
        return Err(CliError::Usage { flag: "--grid", msg: format!("{} < 2", args.grid) });
    }
    let params = FamilyParams {
        radius: args.radius,
        boundary_value: args.boundary_value,
        boundary_slope: args.boundary_slope,
        constant: args.constant,
        interface_radius: args.interface_radius,
        f1: args.f1.clone().map(Callable1D::polynomial),
        f2: args.f2.clone().map(Callable1D::polynomial),
    };
    validate(kind.build(&params)).map_err(|e| match e {
        FamilyError::ConstraintViolation(_) | FamilyError::BadParameter { .. } | FamilyError::GoursatMismatch { .. } => {
            CliError::Usage { flag: "--R/--H/--K/--C/--a/--f1/--f2", msg: e.to_string() }
        }
        other => other.into(),
    })
}

fn family_eval(args: &FamilyArgs, out: &Path) -> Result<Outcome, CliError> {
    let solution = build_family(args)?;
    let nodes: Vec<Point> = natural_grid(&solution, args.grid)
        .nodes()
        .into_iter()
        .filter(|&p| solution.contains(p))
        .collect();
    let rows = nodes
        .par_iter()
        .map(|&p| {
            let u = solution.eval(p)?;
            let (ux, uy) = solution.grad(p)?;
            let region = if solution.on_interface(p) { "interface" } else { solution.branch(p).as_str() };
            let operator = TaggedField::operator(&solution, p).as_str();
            Ok(FieldRow { x: p.x, y: p.y, u, ux, uy, region, operator })
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    write_field_csv(out, &rows)?;
    println!("{}: wrote {} rows to {}", solution.kind(), rows.len(), out.display());
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    config: &'a RunConfig,
    report: &'a ResidualReport,
}

fn family_verify(args: &FamilyArgs, h: f64, tolerances: Tolerances, report_path: Option<&Path>) -> Result<Outcome, CliError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(CliError::Usage { flag: "--h", msg: format!("{h} is not a positive spacing") });
    }
    let solution = build_family(args)?;
    let opts = VerifyOptions { tolerances, ..VerifyOptions::with_h(h) };
    let report = verify_with(&solution, &natural_grid(&solution, args.grid), &opts);
    let config = RunConfig {
        h: Some(h),
        tolerances: Some(tolerances),
        report: report_path.map(Path::to_path_buf),
        ..family_config(args, "family verify")
    };
    if let Some(path) = report_path {
        output::write_json(path, &VerifyDocument { config: &config, report: &report })?;
    }
    println!(
        "{} {:?}: max residual {:e} over {} nodes, sign violations {}, interface {}",
        solution.kind(),
        report.verdict,
        report.max_residual,
        report.nodes_in_domain,
        report.sign_violations,
        report.interface.as_ref().map_or("none".to_string(), |j| format!("jump {:e}", j.max_jump)),
    );
    Ok(if report.verdict.passed() { Outcome::Pass } else { Outcome::Fail })
}

fn tricomi_nodes(grid: usize) -> Vec<Point> {
    GridSpec::Cartesian { nx: grid, ny: grid, x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 1.0 }
        .nodes()
        .into_iter()
        .filter(|&p| classify_tricomi(p, DEFAULT_BOUNDARY_TOL).in_closed_domain())
        .collect()
}

fn parse_phi(spec: &str) -> Result<BoundaryPhi, CliError> {
    if let Some(preset) = BoundaryPhi::from_name(spec) {
        return Ok(preset);
    }
    let path = Path::new(spec);
    if path.is_file() {
        eprintln!("note: {spec} is a tabulated boundary datum, linearly interpolated; treat results as lower confidence");
        return read_phi_table(path);
    }
    Err(CliError::Usage {
        flag: "--phi",
        msg: format!("{spec:?} is neither a preset (sin, sin2, sin3) nor a readable table"),
    })
}

#[derive(Serialize)]
struct OracleComparison {
    diagnostics: OracleDiagnostics,
    nodes_compared: usize,
    max_abs_difference: f64,
}

#[derive(Serialize)]
struct Tricomi1Document<'a> {
    config: &'a RunConfig,
    nu: &'a NuProvenance,
    rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleComparison>,
}

fn tricomi1(args: &Tricomi1Args) -> Result<Outcome, CliError> {
    let phi = parse_phi(&args.phi)?;
    let mode = KernelConstantMode::from_name(&args.kernel).ok_or_else(|| CliError::Usage {
        flag: "--kernel",
        msg: format!("{:?} is not paper or corrected", args.kernel),
    })?;
    if args.grid < 2 {
        return Err(CliError::Usage { flag: "--grid", msg: format!("{} < 2", args.grid) });
    }
    let admissibility = phi.admissibility();
    for issue in &admissibility.issues {
        eprintln!("warning: phi {issue}");
    }
    let field = TopDownField::new(phi.clone(), args.n_quad, mode).map_err(|e| match e {
        TricomiError::BadArgument { .. } | TricomiError::OutOfRange { .. } => {
            CliError::Usage { flag: "--n-quad", msg: e.to_string() }
        }
        other => other.into(),
    })?;
    let rows = tricomi_nodes(args.grid)
        .par_iter()
        .map(|&p| {
            let u = field.eval(p)?;
            let (ux, uy) = field.grad(p)?;
            let region = classify_tricomi(p, DEFAULT_BOUNDARY_TOL).as_str();
            let operator = field.operator(p).as_str();
            Ok(FieldRow { x: p.x, y: p.y, u, ux, uy, region, operator })
        })
        .collect::<Result<Vec<_>, TricomiError>>()?;
    write_field_csv(&args.out, &rows)?;
    println!("tricomi1 {} ({} kernel): wrote {} rows to {}", phi.name(), mode.as_str(), rows.len(), args.out.display());

    let oracle = match args.oracle {
        Some(n) => {
            let oracle = oracle_halfdisk(&phi, n, n).map_err(|e| match e {
                typechange::numerics::NumericsError::GridTooSmall { .. } => {
                    CliError::Usage { flag: "--oracle", msg: e.to_string() }
                }
                other => TricomiError::from(other).into(),
            })?;
            let diffs: Vec<f64> = rows
                .iter()
                .filter_map(|r| oracle.value_at(Point::new(r.x, r.y)).map(|v| (v - r.u).abs()))
                .collect();
            let max_abs_difference = diffs.iter().copied().fold(0.0, f64::max);
            println!(
                "oracle {n}x{n}: {} sweeps, max |U - U_oracle| = {max_abs_difference:e} over {} nodes with y >= 0",
                oracle.diagnostics().sweeps,
                diffs.len()
            );
            Some(OracleComparison {
                diagnostics: oracle.diagnostics().clone(),
                nodes_compared: diffs.len(),
                max_abs_difference,
            })
        }
        None => None,
    };

    if let Some(path) = &args.report {
        let config = RunConfig {
            subcommand: "tricomi1".into(),
            selector: args.phi.clone(),
            grid: Some(args.grid),
            n_quad: Some(args.n_quad),
            kernel: Some(mode.as_str().into()),
            oracle: args.oracle,
            out: Some(args.out.clone()),
            report: Some(path.clone()),
            ..RunConfig::default()
        };
        let doc = Tricomi1Document { config: &config, nu: field.nu().provenance(), rows: rows.len(), oracle };
        output::write_json(path, &doc)?;
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct Tricomi2Document<'a> {
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<&'a ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_level_fit: Option<LineFit>,
}

/// Least-squares line `y = slope·x + intercept` through the zero level.
#[derive(Debug, Clone, Copy, Serialize)]
struct LineFit {
    slope: f64,
    intercept: f64,
    max_deviation: f64,
}

fn fit_line(points: &[Point]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.x / n, b + p.y / n));
    let sxx: f64 = points.iter().map(|p| (p.x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.x - mx) * (p.y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_deviation = points
        .iter()
        .map(|p| (p.y - slope * p.x - intercept).abs())
        .fold(0.0, f64::max);
    Some(LineFit { slope, intercept, max_deviation })
}

fn tricomi2(args: &Tricomi2Args) -> Result<Outcome, CliError> {
    let f: CharacteristicF = args.f.parse().map_err(|msg| CliError::Usage { flag: "--f", msg })?;
    if args.out.is_none() && !args.probe {
        return Err(CliError::Usage { flag: "--out", msg: "nothing to do without --out or --probe".into() });
    }
    if args.grid < 2 {
        return Err(CliError::Usage { flag: "--grid", msg: format!("{} < 2", args.grid) });
    }
    let admissibility = f.admissibility();
    for issue in &admissibility.issues {
        eprintln!("warning: f {issue}");
    }
    let field = BottomUpField::new(f.clone());

    let mut rows = None;
    if let Some(out) = &args.out {
        let nodes: Vec<Point> =
            GridSpec::Cartesian { nx: args.grid, ny: args.grid, x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 1.2 }
                .nodes()
                .into_iter()
                .filter(|&p| field.contains(p))
                .collect();
        let field_rows = nodes
            .par_iter()
            .map(|&p| {
                let u = field.eval(p)?;
                let (ux, uy) = field.grad(p)?;
                let region = match classify_tricomi(p, DEFAULT_BOUNDARY_TOL) {
                    Region::Outside => "Continuation",
                    r => r.as_str(),
                };
                Ok(FieldRow { x: p.x, y: p.y, u, ux, uy, region, operator: field.operator(p).as_str() })
            })
            .collect::<Result<Vec<_>, TricomiError>>()?;
        write_field_csv(out, &field_rows)?;
        println!("tricomi2 {}: wrote {} rows to {}", f.label(), field_rows.len(), out.display());
        rows = Some(field_rows.len());
    }

    let probe = if args.probe {
        let report = positivity_probe(&f, args.grid).map_err(|e| match e {
            TricomiError::BadArgument { .. } => CliError::Usage { flag: "--grid", msg: e.to_string() },
            other => other.into(),
        })?;
        println!(
            "probe {n}x{n}: {} positive nodes, {} in the component touching y = 0+, {} failed, {} zero-level samples",
            report.positive_nodes,
            report.component_nodes,
            report.failed_nodes,
            report.zero_level.len(),
            n = report.grid_n,
        );
        Some(report)
    } else {
        None
    };
    let zero_level_fit = probe.as_ref().and_then(|r| fit_line(&r.zero_level));
    if let Some(fit) = zero_level_fit {
        println!(
            "zero level fit: y = {:.6} x + {:.6} (max deviation {:.2e})",
            fit.slope, fit.intercept, fit.max_deviation
        );
    }

    if let Some(path) = &args.report {
        let config = RunConfig {
            subcommand: "tricomi2".into(),
            selector: f.label(),
            grid: Some(args.grid),
            probe: args.probe,
            out: args.out.clone(),
            report: Some(path.clone()),
            ..RunConfig::default()
        };
        let doc = Tricomi2Document { config: &config, rows, probe: probe.as_ref(), zero_level_fit };
        output::write_json(path, &doc)?;
    }
    Ok(Outcome::Pass)
}

fn suite(args: &SuiteArgs) -> Result<Outcome, CliError> {
    let selected: Vec<_> = match &args.criteria {
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
                return Err(CliError::Usage { flag: "--criteria", msg: format!("no criterion {bad}") });
            }
            CRITERIA.iter().filter(|c| ids.contains(&c.0)).collect()
        }
        None => CRITERIA.iter().collect(),
    };
    let mut results: Vec<CriterionResult> = Vec::with_capacity(selected.len());
    for (_, _, criterion) in selected {
        let result = criterion();
        println!(
            "{:>2}  {:<4}  {:>7.2} s  {}",
            result.id,
            if result.passed { "PASS" } else { "FAIL" },
            result.elapsed_s,
            result.name
        );
        if args.verbose || !result.passed {
            for line in &result.details {
                println!("            {line}");
            }
        }
        results.push(result);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    if let Some(path) = &args.json {
        output::write_json(path, &results)?;
    }
    Ok(if passed == results.len() { Outcome::Pass } else { Outcome::Fail })
}
