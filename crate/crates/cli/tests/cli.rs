use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn typechange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_typechange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

struct Row {
    x: f64,
    y: f64,
    u: f64,
    region: String,
    operator: String,
}

fn read_rows(path: &Path) -> Vec<Row> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,u,ux,uy,region,operator"));
    lines
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 7, "{line}");
            let num = |i: usize| cells[i].parse::<f64>().unwrap();
            Row { x: num(0), y: num(1), u: num(2), region: cells[5].into(), operator: cells[6].into() }
        })
        .collect()
}

fn path_str(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn family_eval_boundary_and_interface_rows() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "f.csv");
    let run = typechange(&[
        "family", "eval", "--family", "dirichlet-eq1-mixed", "--R", "1", "--H", "1", "--a", "0.5", "--grid", "201",
        "--out", &out,
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let rows = read_rows(Path::new(&out));
    // polar grid: centre once plus 200 rings of 201 angles
    assert_eq!(rows.len(), 1 + 200 * 201);
    let on = |r: f64| rows.iter().filter(move |row| (row.x.hypot(row.y) - r).abs() <= 1e-12);
    assert_eq!(on(1.0).count(), 201);
    assert_eq!(on(0.5).count(), 201);
    for row in on(1.0) {
        assert!((row.u - 1.0).abs() <= 1e-12, "u = {} on r = 1", row.u);
        assert_eq!(row.operator, "laplace");
    }
    for row in on(0.5) {
        assert!(row.u.abs() <= 1e-12, "u = {} on r = 0.5", row.u);
        assert_eq!((row.region.as_str(), row.operator.as_str()), ("interface", "interface"));
    }
    assert!(rows.iter().filter(|r| r.x.hypot(r.y) < 0.49).all(|r| r.u < 0.0 && r.operator == "wave"));
}

#[test]
fn family_eval_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "g.csv");
    let args = ["family", "eval", "--family", "goursat-eq1", "--grid", "61", "--out", out.as_str()];
    assert_eq!(code(&typechange(&args)), 0);
    let first = fs::read(&out).unwrap();
    assert_eq!(code(&typechange(&args)), 0);
    assert_eq!(first, fs::read(&out).unwrap());
}

#[test]
fn family_verify_reports_and_honours_tolerance_overrides() {
    let dir = TempDir::new().unwrap();
    let report = path_str(&dir, "v.json");
    let args = ["family", "verify", "--family", "half-plane-eq1", "--grid", "101", "--report", report.as_str()];
    assert_eq!(code(&typechange(&args)), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["config"]["subcommand"], "family verify");
    assert_eq!(json["config"]["selector"], "half-plane-eq1");
    assert_eq!(json["config"]["h"], 1e-3);
    assert_eq!(json["report"]["verdict"], "PASS");
    let first = fs::read(&report).unwrap();
    assert_eq!(code(&typechange(&args)), 0);
    assert_eq!(first, fs::read(&report).unwrap());

    // truncation error of the second-order stencil is about 5e-5 here
    let strict = ["family", "verify", "--family", "cauchy-eq1-mixed", "--grid", "101", "--tol-residual", "1e-6"];
    assert_eq!(code(&typechange(&strict)), 1);
    let loose = ["family", "verify", "--family", "cauchy-eq1-mixed", "--grid", "101", "--tol-residual", "1e-4"];
    assert_eq!(code(&typechange(&loose)), 0);
}

#[test]
fn tricomi1_sin_reproduces_y() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "t.csv");
    let run = typechange(&["tricomi1", "--phi", "sin", "--n-quad", "256", "--kernel", "corrected", "--grid", "101", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let rows = read_rows(Path::new(&out));
    assert!(rows.len() > 6000);
    for row in &rows {
        assert!((row.u - row.y).abs() <= 1e-6, "u = {} at ({}, {})", row.u, row.x, row.y);
    }
    assert!(rows.iter().any(|r| r.region == "D2Triangle" && r.operator == "wave"));
    assert!(rows.iter().any(|r| r.region == "D1Upper" && r.operator == "laplace"));
}

#[test]
fn tricomi1_reads_boundary_tables_and_compares_with_the_oracle() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("phi.csv");
    let mut text = String::from("theta,phi\n");
    for k in 0..=36 {
        let t = std::f64::consts::PI * k as f64 / 36.0;
        text.push_str(&format!("{t},{}\n", t.sin()));
    }
    fs::write(&table, text).unwrap();
    let (out, report) = (path_str(&dir, "t.csv"), path_str(&dir, "t.json"));
    let run = typechange(&[
        "tricomi1", "--phi", table.to_str().unwrap(), "--grid", "11", "--out", &out, "--oracle", "33", "--report", &report,
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stderr).contains("lower confidence"));
    // five-degree interpolation of sin θ
    for row in read_rows(Path::new(&out)) {
        assert!((row.u - row.y).abs() <= 2e-3, "u = {} at ({}, {})", row.u, row.x, row.y);
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["nu"]["phi"], "table");
    assert_eq!(json["config"]["oracle"], 33);
    assert!(json["oracle"]["max_abs_difference"].as_f64().unwrap() <= 1e-2);
}

#[test]
fn tricomi2_cubic_probe_finds_the_zero_line() {
    let dir = TempDir::new().unwrap();
    let (out, report) = (path_str(&dir, "c.csv"), path_str(&dir, "c.json"));
    let run = typechange(&["tricomi2", "--f", "cubic", "--grid", "101", "--probe", "--out", &out, "--report", &report]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let zero = json["probe"]["zero_level"].as_array().unwrap();
    assert!(zero.len() > 50);
    for p in zero {
        let (x, y) = (p["x"].as_f64().unwrap(), p["y"].as_f64().unwrap());
        assert!((3f64.sqrt() * (x + 1.0) - y).abs() / 2.0 <= 1e-2, "({x}, {y})");
    }
    let slope = json["zero_level_fit"]["slope"].as_f64().unwrap();
    assert!((slope - 3f64.sqrt()).abs() <= 1e-2);
    for row in read_rows(Path::new(&out)) {
        let expected = if row.u > 0.0 { "laplace" } else if row.u < 0.0 { "wave" } else { "interface" };
        assert_eq!(row.operator, expected);
    }
    let first = fs::read(&report).unwrap();
    assert_eq!(code(&typechange(&["tricomi2", "--f", "cubic", "--grid", "101", "--probe", "--out", &out, "--report", &report])), 0);
    assert_eq!(first, fs::read(&report).unwrap());
}

#[test]
fn usage_errors_exit_with_two_and_name_the_flag() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir, "x.csv");
    let cases: [(&[&str], &str); 7] = [
        (&["family", "eval", "--family", "nope", "--out", &out], "--family"),
        (&["family", "eval", "--family", "dirichlet-eq1-mixed", "--a", "2", "--out", &out], "--a"),
        (&["family", "verify", "--family", "half-plane-eq1", "--h", "-1"], "--h"),
        (&["tricomi1", "--phi", "cos", "--out", &out], "--phi"),
        (&["tricomi1", "--phi", "sin", "--kernel", "exact", "--out", &out], "--kernel"),
        (&["tricomi2", "--f", "poly:1,x"], "--f"),
        (&["suite", "--criteria", "42"], "--criteria"),
    ];
    for (args, flag) in cases {
        let run = typechange(args);
        let stderr = String::from_utf8_lossy(&run.stderr);
        assert_eq!(code(&run), 2, "{args:?}: {stderr}");
        assert!(stderr.contains(flag), "{args:?}: {stderr}");
    }
    assert_eq!(code(&typechange(&["bogus"])), 2);
    assert_eq!(code(&typechange(&["tricomi2", "--f", "cubic"])), 2);
    assert_eq!(code(&typechange(&["--help"])), 0);
}

#[test]
fn suite_runs_selected_criteria() {
    let run = typechange(&["suite", "--criteria", "2,6"]);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(code(&run), 0, "{stdout}");
    assert!(stdout.contains("PASS") && stdout.contains("2/2 criteria passed"), "{stdout}");
}

#[test]
fn run_is_callable_in_process() {
    assert_eq!(typechange_cli::run(["typechange", "suite", "--criteria", "0"]), 2);
}
