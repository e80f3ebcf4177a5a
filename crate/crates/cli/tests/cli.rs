use std::process::{Command, Output};

use serde_json::Value;

fn segrelat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segrelat"))
        .args(args)
        .env_remove("SEGRELAT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = segrelat(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn wtable_csv() {
    let out = segrelat(&["--format", "csv", "wtable", "--nmax", "5", "--tmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "t,0,1,2,3,4,5\n1,1,1,1,1,1,1\n2,1,1,3,19,211,3651\n3,1,1,7,163,8983,966751\n"
    );
}

#[test]
fn wtable_routes_agree() {
    let base = json(&["wtable", "--nmax", "4", "--tmax", "3"]);
    for route in ["brute", "dimension", "genfun"] {
        let v = json(&["wtable", "--nmax", "4", "--tmax", "3", "--route", route]);
        assert_eq!(v["rows"], base["rows"], "{route}");
    }
}

#[test]
fn phi_flags_negative_coefficient() {
    let v = json(&["phi", "--schur", "3,2,2", "--t", "2"]);
    assert_eq!(v["not_all_nonnegative"], Value::Bool(true));
    let neg = v["negative_terms"].as_array().unwrap();
    let hit = neg.iter().any(|term| {
        term["mus"] == serde_json::json!([[6, 1], [4, 3]])
            && term["coeff"] == Value::String("-1".into())
    });
    assert!(hit, "{neg:?}");
    let ok = json(&["phi", "--schur", "3,1", "--t", "2"]);
    assert_eq!(ok["not_all_nonnegative"], Value::Bool(false));
}

#[test]
fn verify_el_on_fixture_square() {
    let v = json(&["poset", "verify-el", "--fixture", "repeated-labels-square"]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["decreasing_chains"], 2);
    assert_eq!(v["mobius"], "-2");
}

#[test]
fn beta_reports_dimension() {
    let v = json(&["beta", "--n", "3", "--t", "2"]);
    assert_eq!(v["dimension"], "19");
    assert_eq!(v["schur_nonnegative"], Value::Bool(true));
    let z = json(&[
        "beta",
        "--n",
        "3",
        "--t",
        "2",
        "--basis",
        "Z",
        "--rank-set",
        "1",
        "--route",
        "syt",
    ]);
    assert!(z["alpha"].is_object());
}

#[test]
fn empty_rank_set() {
    let v = json(&["wq", "--n", "4", "--t", "2", "--rank-set", "none"]);
    assert_eq!(v["rank_set"], serde_json::json!([]));
    assert_eq!(v["coeffs"], serde_json::json!(["1"]));
    let ps = json(&["ps", "--n", "4", "--t", "2", "--rank-set", "none"]);
    assert_eq!(ps["equal"], Value::Bool(true));
}

#[test]
fn exit_codes() {
    assert_eq!(
        segrelat(&["wq", "--n", "3", "--t", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(segrelat(&["wq", "--n", "3"]).status.code(), Some(1));
    assert_eq!(
        segrelat(&["wq", "--n", "3", "--t", "2", "--rank-set", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(segrelat(&["--help"]).status.code(), Some(0));
    let over = segrelat(&[
        "wtable", "--nmax", "6", "--tmax", "3", "--route", "brute", "--budget", "1000",
    ]);
    assert_eq!(over.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&over.stderr).contains("budget"));
}

#[test]
fn non_el_file_exits_with_verification_failure() {
    // Both maximal chains of this square are increasing.
    let text = "poset v1\ne 0 0\ne a 1\ne b 1\ne 1 2\nc 0 a 1\nc 0 b 1\nc a 1 2\nc b 1 2\n";
    let dir = std::env::temp_dir().join(format!("segrelat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.poset");
    std::fs::write(&path, text).unwrap();
    let out = segrelat(&["poset", "verify-el", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], Value::Bool(false));
    assert!(v["witness"].is_object());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn poset_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("segrelat-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b2sq.poset");
    let built = segrelat(&[
        "poset",
        "build",
        "--boolean",
        "2",
        "--segre",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(built.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let again = segrelat(&["poset", "build", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
    let mu = json(&["poset", "mobius", "--file", path.to_str().unwrap()]);
    assert_eq!(mu["mobius"], "3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn census_csv() {
    let out = segrelat(&["--format", "csv", "poset", "census", "--boolean", "2"]);
    assert_eq!(stdout(&out), "word,descents,count\n1 2,,1\n2 1,1,1\n");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--format",
        "latex",
        "beta",
        "--n",
        "4",
        "--t",
        "2",
        "--rank-set",
        "1,3",
    ];
    let a = segrelat(&args);
    let b = segrelat(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v1 = stdout(&segrelat(&["verify"]));
    let v2 = stdout(&segrelat(&["verify"]));
    assert_eq!(v1, v2);
}

#[test]
fn verify_small_passes() {
    let v = json(&["verify"]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 9);
}
