use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use barypoly::fixtures;
use barypoly::numerics::ratio;
use barypoly::{Location, RationalVector};
use barypoly_cli::{
    grid_points, parse_points, run_analyze, run_oracle_check, run_sweep, AnalysisReport,
    AnalyzeOptions, SweepMode, SweepOptions,
};
use tempfile::TempDir;

fn bin() -> &'static Path {
    Path::new(env!("CARGO_BIN_EXE_barypoly"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write_fixture(dir: &TempDir, name: &str) -> PathBuf {
    let out = run(&["examples", name]);
    assert!(out.status.success());
    let path = dir.path().join(format!("{name}.json"));
    std::fs::write(&path, out.stdout).unwrap();
    path
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn analyze_square_center() {
    let dir = TempDir::new().unwrap();
    let sq = write_fixture(&dir, "square");
    let out = run(&["analyze", sq.to_str().unwrap(), "--point", "1/2 1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    let analysis = report.analysis.unwrap();
    assert_eq!(analysis.vertex_count, 2);
    assert_eq!(analysis.dim, 1);
    assert_eq!(
        analysis.lambda_vertices[0].zero_sets,
        vec![vec![1], vec![3]]
    );
    assert_eq!(analysis.lambda_vertices[1].support, vec![1, 3]);
}

#[test]
fn analyze_outside_exits_two() {
    let dir = TempDir::new().unwrap();
    let sq = write_fixture(&dir, "square");
    let out = run(&["analyze", sq.to_str().unwrap(), "--point", "2,2"]);
    assert_eq!(out.status.code(), Some(2));
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.location, Location::Outside);
    assert!(report.analysis.is_none());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["kind"], "separator");
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"vertices\": [").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap(), "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "parse_error");

    let missing = run(&["validate", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(stderr_json(&missing)["error"], "io_error");
}

#[test]
fn validation_errors_are_reported() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("inner.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "vertices": [[0,0],[2,0],[0,2],["1/2","1/2"]]}"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "non_extreme_vertex");
    assert!(err["detail"].as_str().unwrap().contains("vertex 4"));

    let sq = write_fixture(&dir, "square");
    let ok = run(&["validate", sq.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let wrong_len = run(&["analyze", sq.to_str().unwrap(), "--point", "1/2"]);
    assert_eq!(wrong_len.status.code(), Some(1));
    assert_eq!(stderr_json(&wrong_len)["error"], "dimension_mismatch");
}

#[test]
fn decimal_numbers_are_exact() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dec.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "vertices": [[0,0],[0.1,0],[0.1,0.1],[0,0.1]]}"#,
    )
    .unwrap();
    let out = run(&["analyze", path.to_str().unwrap(), "--point", "0.05,0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.polytope.vertices[1][0], ratio(1, 10));
    assert_eq!(report.analysis.unwrap().vertex_count, 2);
}

#[test]
fn report_round_trips() {
    for name in fixtures::NAMES {
        let poly = fixtures::by_name(name).unwrap();
        let report = run_analyze(&poly, &poly.centroid(), AnalyzeOptions::default()).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report, "{name}");
        let timed = run_analyze(
            &poly,
            &poly.centroid(),
            AnalyzeOptions {
                timing: true,
                parallel: true,
            },
        )
        .unwrap();
        assert_eq!(timed.analysis, report.analysis);
        assert!(timed.timing.is_some());
    }
}

#[test]
fn examples_cover_all_fixtures() {
    for name in fixtures::NAMES {
        assert!(run(&["examples", name]).status.success());
    }
    assert_eq!(run(&["examples", "dodecahedron"]).status.code(), Some(1));
}

#[test]
fn oracle_check_agrees() {
    let dir = TempDir::new().unwrap();
    let cube = write_fixture(&dir, "prism8");
    let out = Command::new(bin())
        .args([
            "oracle-check",
            cube.to_str().unwrap(),
            "--point",
            "1/3,1/4,1/5",
        ])
        .env("BARYPOLY_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["agreement"], true);
    assert_eq!(v["seed"], 17);

    let bad_seed = Command::new(bin())
        .args([
            "oracle-check",
            cube.to_str().unwrap(),
            "--point",
            "1/3,1/4,1/5",
        ])
        .env("BARYPOLY_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(bad_seed.status.code(), Some(1));

    let pent = fixtures::pentagon();
    let check = run_oracle_check(&pent, &pent.centroid(), 0, 5).unwrap();
    assert!(check.samples_in_hull);
    assert_eq!(check.cross_check, Some(true));
}

fn sweep_to_string(options: &SweepOptions, points: &[RationalVector]) -> String {
    let mut buf = Vec::new();
    run_sweep(&fixtures::square(), points, options, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn census_grid_rows() {
    let sq = fixtures::square();
    let pts = grid_points(&sq, 9);
    assert_eq!(pts.len(), 81);
    assert_eq!(pts[1], RationalVector::new(vec![ratio(1, 10), ratio(1, 5)]));
    let csv = sweep_to_string(&SweepOptions::new(SweepMode::Census), &pts);
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "index,p1,p2,location,vertex_count,dim,theorem_count_match,degenerate,error"
    );
    assert_eq!(lines.len(), 82);
    assert!(lines[1..].iter().all(|l| l.contains(",interior,2,1,true,")));
}

#[test]
fn empty_grid_is_header_only() {
    let csv = sweep_to_string(
        &SweepOptions::new(SweepMode::Continuity),
        &grid_points(&fixtures::square(), 0),
    );
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("index,p1,p2,"));
    assert!(csv.contains("d_8,verdict,error"));
}

#[test]
fn semidiff_sweep_at_center() {
    let mut options = SweepOptions::new(SweepMode::Semidiff);
    options.t0 = ratio(1, 16);
    options.zero_set = Some(vec![3]);
    let pts = parse_points("# center\n1/2 1/2\n", 2).unwrap();
    let csv = sweep_to_string(&options, &pts);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let distances: Vec<f64> = row[8..17].iter().map(|s| s.parse().unwrap()).collect();
    assert!(distances.iter().all(|&d| d < 1e-6));
    assert_eq!(row[18], "4");
}

#[test]
fn row_errors_do_not_stop_the_sweep() {
    let options = SweepOptions::new(SweepMode::Continuity);
    let pts = parse_points("2,2\n1/2,1/2\n15/16, 1/2\n", 2).unwrap();
    let csv = sweep_to_string(&options, &pts);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows[0].starts_with("1,2,2,outside,") && rows[0].ends_with(",infeasible"));
    assert!(rows[1].ends_with(','));
    assert!(rows[2].contains(",interior,2,1,") && rows[2].ends_with(",leaves_polytope"));
}

#[test]
fn parallel_and_serial_sweeps_match() {
    let pent = fixtures::pentagon();
    let pts = grid_points(&pent, 4);
    let mut outputs = Vec::new();
    for jobs in [Some(1), Some(3), None] {
        let mut options = SweepOptions::new(SweepMode::Continuity);
        options.jobs = jobs;
        options.t0 = ratio(1, 32);
        let mut buf = Vec::new();
        run_sweep(&pent, &pts, &options, &mut buf).unwrap();
        outputs.push(buf);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn points_file_parsing() {
    assert!(parse_points("1,2,3\n", 2).is_err());
    assert!(parse_points("1,x\n", 2).is_err());
    assert_eq!(parse_points("\n  # nothing\n", 2).unwrap().len(), 0);
}
