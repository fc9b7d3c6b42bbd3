//! End-to-end tests of the `cvrisk` binary: flags, exit codes, output
//! formats and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvrisk"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cvrisk")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const FRONTIER_RHO0: [&str; 11] = [
    "frontier", "--mu1", "12", "--sigma1", "20", "--mu2", "4", "--sigma2", "9", "--rho", "0",
];

#[test]
fn identical_flags_produce_byte_identical_output() {
    let first = run(&[&FRONTIER_RHO0[..], &["--paper-grid"]].concat());
    let second = run(&[&FRONTIER_RHO0[..], &["--paper-grid"]].concat());
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn frontier_matches_the_golden_table() {
    let out = run(&[&FRONTIER_RHO0[..], &["--paper-grid"]].concat());
    assert!(out.status.success());
    let golden = std::fs::read_to_string(fixture("../golden/frontier_rho0.csv")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn frontier_grid_flags_are_required_and_exclusive() {
    let neither = run(&FRONTIER_RHO0);
    assert_eq!(neither.status.code(), Some(1));
    let both = run(&[&FRONTIER_RHO0[..], &["--paper-grid", "--w-step", "0.5"]].concat());
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let bad_rho = run(&[
        "frontier", "--mu1", "12", "--sigma1", "20", "--mu2", "4", "--sigma2", "9", "--rho",
        "1.5", "--paper-grid",
    ]);
    assert_eq!(bad_rho.status.code(), Some(1));
    let zero_mu = run(&["riskcurve", "--mu-list", "5,0,10", "--sigma-max", "30"]);
    assert_eq!(zero_mu.status.code(), Some(1));
    let bad_step = run(&[&FRONTIER_RHO0[..], &["--w-step", "0.7"]].concat());
    assert_eq!(bad_step.status.code(), Some(1));
    let bad_window = run(&[
        "analyze", "--input", "x.csv", "--window", "2018-01x2019-01",
    ]);
    assert_eq!(bad_window.status.code(), Some(1));
    let unknown = run(&["explode"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let missing = run(&["analyze", "--input", "/no/such/file.csv", "--window", "2014-01:2016-12"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "id,year,month,close\nA,2020,1,10\nA,2020,1,11\n").unwrap();
    let dup = run(&["analyze", "--input", bad.to_str().unwrap(), "--window", "2014-01:2016-12"]);
    assert_eq!(dup.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["frontier", "--help"]).status.code(), Some(0));
}

#[test]
fn analyze_reports_both_methods_per_security() {
    let input = fixture("prices_multi.csv");
    let out = run(&[
        "analyze", "--input", input.to_str().unwrap(), "--window", "2014-01:2016-12",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "id,method,n,mu,sigma,cv,risk,tier,bubble");
    // Three kept securities (CCC has a hole), two methods each, sorted.
    assert_eq!(lines.len(), 1 + 6);
    assert!(lines[1].starts_with("AAA,monthly_annual,24,"));
    assert!(lines[2].starts_with("AAA,end_of_year,2,"));
    assert!(lines[3].starts_with("BBB,"));
    assert!(lines[5].starts_with("DDD,"));
    // The dropped security is reported on stderr, not in the table.
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("CCC"));
    assert!(err.contains("2015-06"));
    assert!(!text.contains("CCC"));
}

#[test]
fn flat_prices_emit_empty_cv_field_and_null_json() {
    let input = fixture("prices_multi.csv");
    let csv = run(&[
        "analyze", "--input", input.to_str().unwrap(), "--window", "2014-01:2016-12",
    ]);
    let flat_row: Vec<String> = stdout(&csv)
        .lines()
        .find(|l| l.starts_with("BBB,monthly_annual"))
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    // id,method,n,mu,sigma,cv,risk,tier,bubble -> cv is index 5.
    assert_eq!(flat_row[5], "");
    assert_eq!(flat_row[6], "50.00");
    assert_eq!(flat_row[7], "elevated");

    let json = run(&[
        "analyze", "--input", input.to_str().unwrap(), "--window", "2014-01:2016-12",
        "--format", "json",
    ]);
    let rows: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let flat = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == "BBB" && r["method"] == "monthly_annual")
        .unwrap();
    assert!(flat["cv"].is_null());
    assert_eq!(flat["risk"], 50.0);
}

#[test]
fn analyze_shows_the_method_divergence() {
    // DDD grows exactly 10% December to December but swings wildly in
    // between: the monthly-annual CV must exceed the end-of-year CV.
    let input = fixture("prices_multi.csv");
    let out = run(&[
        "analyze", "--input", input.to_str().unwrap(), "--window", "2014-01:2016-12",
        "--decimals", "4",
    ]);
    let text = stdout(&out);
    let cv_of = |needle: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(needle))
            .unwrap()
            .split(',')
            .nth(5)
            .unwrap()
            .parse()
            .unwrap()
    };
    let monthly = cv_of("DDD,monthly_annual");
    let end_of_year = cv_of("DDD,end_of_year");
    assert!(monthly > end_of_year + 0.1, "{monthly} vs {end_of_year}");
}

#[test]
fn empty_kept_set_warns_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let sparse = dir.path().join("sparse.csv");
    // One security, nowhere near covering the window.
    std::fs::write(&sparse, "id,year,month,close\nA,2014,1,10\nA,2014,2,11\n").unwrap();
    let out = run(&[
        "analyze", "--input", sparse.to_str().unwrap(), "--window", "2014-01:2016-12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "id,method,n,mu,sigma,cv,risk,tier,bubble\n");
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("warning"));
}

#[test]
fn too_short_window_is_a_usage_error() {
    let input = fixture("prices_multi.csv");
    let out = run(&[
        "analyze", "--input", input.to_str().unwrap(), "--window", "2014-01:2014-12",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = run(&[
        &FRONTIER_RHO0[..],
        &["--paper-grid", "--out", path.to_str().unwrap()],
    ]
    .concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let golden = std::fs::read_to_string(fixture("../golden/frontier_rho0.csv")).unwrap();
    assert_eq!(written, golden);
}

#[test]
fn relative_out_paths_respect_the_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([&FRONTIER_RHO0[..], &["--paper-grid", "--out", "rel.csv"]].concat())
        .env("CVRISK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("rel.csv").exists());
}

#[test]
fn density_counts_match_the_kept_cohort() {
    let input = fixture("prices_multi.csv");
    let out = run(&[
        "density", "--input", input.to_str().unwrap(), "--window", "2014-01:2016-12",
        "--time-bins", "2", "--return-bins", "3", "--return-range", "-50,50",
    ]);
    assert!(out.status.success());
    let total: u64 = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    // Only AAA passes the CV ceiling; its 24 monthly-annual returns all
    // land in range.
    assert_eq!(total, 24);
}

#[test]
fn riskcurve_emits_one_series_per_mu() {
    let out = run(&[
        "riskcurve", "--mu-list", "5,10,15", "--sigma-max", "30", "--points", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 21);
    // Non-decreasing risk within each series.
    let mut last_mu = f64::NAN;
    let mut last_risk = 0.0f64;
    for line in text.lines().skip(1) {
        let mut it = line.split(',');
        let mu: f64 = it.next().unwrap().parse().unwrap();
        let _sigma: f64 = it.next().unwrap().parse().unwrap();
        let risk: f64 = it.next().unwrap().parse().unwrap();
        if mu == last_mu {
            assert!(risk >= last_risk);
        }
        last_mu = mu;
        last_risk = risk;
    }
}
