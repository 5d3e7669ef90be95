use std::path::PathBuf;
use std::process::{Command, Output};

use modhyp_cli::cache::{read_entry, Cache};
use modhyp_cli::{Suite, SuiteParams};
use serde_json::Value;

fn modhyp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modhyp"))
        .args(args)
        .env_remove("MODHYP_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/section24.csv")
}

#[test]
fn points_csv_and_json() {
    let out = modhyp(&["points", "--a", "1", "--n", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "x,y\n1,1\n2,3\n3,2\n4,4\n");

    let out = modhyp(&["points", "--a", "1", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["command"], "points");
    assert_eq!(v["result"]["points"], serde_json::json!([[1, 1]]));
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["points", "--a", "2", "--n", "4"][..],
        &["points", "--n", "1"],
        &["points", "--n", "2147483649"],
        &["census", "--a", "3", "--n", "9"],
        &["census", "--n", "2"],
        &["distances", "--a", "5", "--n", "10"],
        &["gap", "--k", "20"],
        &["gap", "--k", "0"],
        &["verify", "no-such-suite"],
        &["verify", "theorem14", "--p", "15"],
        &["verify", "tables", "--fixtures", "/nonexistent/table.csv"],
        &["census", "--n", "7", "--jobs", "0"],
        &["census", "--n", "7", "--format", "xml"],
    ] {
        let out = modhyp(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn census_examples() {
    let v = json(&modhyp(&["census", "--a", "1", "--n", "7"]));
    assert_eq!(v["result"]["ordinary"], 15);
    assert_eq!(v["result"]["max_collinear"], 2);
    assert_eq!(v["result"]["histogram"], serde_json::json!({"2": 15}));
    assert!(v.get("pass").is_none());

    let out = modhyp(&["census", "--a", "1", "--n", "12", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "n,a,ordinary,max_collinear\n12,1,0,4\n");

    let out = modhyp(&["census", "--n", "11", "--all-a", "--format", "csv"]);
    let rows: Vec<String> = stdout(&out).lines().skip(1).map(str::to_string).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.ends_with(",45,2")));
}

#[test]
fn distances_examples() {
    let v = json(&modhyp(&["distances", "--a", "1", "--n", "9", "--values"]));
    assert_eq!(v["result"]["count"], 4);
    assert_eq!(v["result"]["values"], serde_json::json!([2, 29, 65, 128]));
    let v = json(&modhyp(&["distances", "--a", "1", "--n", "9"]));
    assert!(v["result"].get("values").is_none());

    let v = json(&modhyp(&["distances", "--a", "4", "--n", "2401"]));
    assert_eq!(v["result"]["count"], 1027);
    let v = json(&modhyp(&["distances", "--a", "1", "--n", "59049"]));
    assert_eq!(v["result"]["count"], 19682);
}

#[test]
fn gap_examples() {
    let v = json(&modhyp(&["gap", "--k", "1"]));
    assert_eq!((v["result"]["a"].as_i64(), v["result"]["p"].as_i64()), (Some(9), Some(11)));
    assert_eq!(v["result"]["s"].as_array().unwrap().len(), 2);
    assert_eq!(v["pass"], true);

    let out = modhyp(&["gap", "--k", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "k,a,p,s_size,gap,pass\n2,225,227,4,3,true\n");
}

#[test]
fn verify_exit_codes() {
    let out = modhyp(&["verify", "ordinary-moduli", "--n-max", "100"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["cases"][0]["computed"], serde_json::json!([2, 8, 12, 24]));

    let fx = fixtures();
    let out = modhyp(&["verify", "tables", "--fixtures", fx.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["summary"]["passed"], 86);

    let out = modhyp(&["verify", "theorem14", "--p", "13", "--all-a"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["summary"]["total"], 156);

    // A wrong table row must surface as a verification failure, not an input error.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "p,m,a,expected_count\n3,2,1,4\n5,2,1,11\n").unwrap();
    let out = modhyp(&["verify", "tables", "--fixtures", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["result"]["summary"]["failed"], 1);
}

#[test]
fn verify_formats() {
    let out = modhyp(&["verify", "gap", "--k", "1", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("case,pass,inputs,expected,computed\n0,true,"));
    let out = modhyp(&["verify", "gap", "--k", "1", "--format", "text"]);
    assert!(stdout(&out).ends_with("gap: 1/1 passed\n"));
}

#[test]
fn output_is_independent_of_jobs() {
    for args in [
        &["verify", "prime-lines", "--n-max", "31"][..],
        &["verify", "theorem14", "--n-max", "13", "--format", "csv"],
        &["census", "--n", "27", "--all-a"],
        &["distances", "--n", "125", "--all-a", "--values"],
    ] {
        let one = modhyp(&[args, &["--jobs", "1"]].concat());
        let four = modhyp(&[args, &["--jobs", "4"]].concat());
        let default = modhyp(args);
        assert_eq!(code(&one), code(&four));
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stdout, default.stdout, "{args:?}");
    }
}

#[test]
fn seeded_samples_are_reproducible() {
    let args = ["verify", "theorem14", "--p", "37", "--samples", "10", "--seed", "7"];
    let a = json(&modhyp(&args));
    let b = json(&modhyp(&args));
    assert_eq!(a, b);
    assert_eq!(a["result"]["summary"]["total"], 10);
    let other = json(&modhyp(&["verify", "theorem14", "--p", "37", "--samples", "10", "--seed", "8"]));
    assert_ne!(a["result"]["cases"], other["result"]["cases"]);
}

#[test]
fn cache_round_trip_and_rerun_diff() {
    let dir = tempfile::tempdir().unwrap();
    let cache_dir = dir.path().to_str().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_modhyp"))
            .args(["verify", "special-line", "--n-max", "300"])
            .env("MODHYP_CACHE_DIR", cache_dir)
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(code(&first), 0);
    assert!(String::from_utf8_lossy(&first.stderr).contains("no previous report"));
    let second = run();
    assert!(String::from_utf8_lossy(&second.stderr).contains("no change"));
    assert_eq!(first.stdout, second.stdout);

    let files: Vec<_> = std::fs::read_dir(dir.path().join("special-line"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 2);
    let stored = read_entry(&files[0]).unwrap();
    let printed: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(serde_json::to_value(&stored.report).unwrap(), printed["result"]);
}

#[test]
fn cache_reports_changes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let params = SuiteParams {
        k: Some(1),
        ..Default::default()
    };
    let report = modhyp_cli::suites::run(Suite::Gap, &params).unwrap();
    cache.write(&report, 0).unwrap();
    let (_, back) = cache.latest_matching(&report).unwrap().unwrap();
    assert_eq!(back.report, report);
    assert!(report.diff(&back.report).is_empty());

    let mut changed = report.clone();
    changed.cases[0].computed = serde_json::json!({"s_size": 3});
    changed.cases[0].pass = false;
    let diff = changed.diff(&report);
    assert_eq!(diff.len(), 1);
    assert!(diff[0].contains("pass=false"));

    let other = modhyp_cli::suites::run(Suite::Gap, &SuiteParams { k: Some(2), ..Default::default() }).unwrap();
    assert!(cache.latest_matching(&other).unwrap().is_none());
}
