use std::process::{Command, Output};

fn groupsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn simulate_prints_trial_json() {
    let out = groupsync(&[
        "simulate", "--graph", "complete:12", "--group", "cyclic:3", "--p", "0.05", "--seed", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["n"], 12);
    assert_eq!(v["p"], 0.05);
    assert!(v["exact_recovery"].is_boolean());
    assert!(v["edge_error_count"].is_number());
    assert!(v.get("wall_time").is_some());
}

#[test]
fn simulate_is_deterministic_apart_from_timing() {
    let args = [
        "simulate", "--graph", "lattice:5,2", "--group", "prod:cyclic:2*cyclic:3", "--p", "0.2",
        "--estimator", "trivial", "--seed", "11",
    ];
    let strip = |out: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("wall_time");
        v
    };
    assert_eq!(strip(groupsync(&args)), strip(groupsync(&args)));
}

#[test]
fn simulate_writes_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trial.json");
    let out = groupsync(&[
        "simulate", "--graph", "complete:6", "--group", "sym:3", "--p", "0.1", "--estimator", "map",
        "--record", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rec["x"].as_array().unwrap().len(), 6);
    assert_eq!(rec["y"].as_array().unwrap().len(), 30);
    assert_eq!(rec["group"], "sym:3");
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        &["simulate", "--graph", "complete:1", "--group", "cyclic:2", "--p", "0.1"][..],
        &["simulate", "--graph", "complete:5", "--group", "cyclic:1", "--p", "0.1"],
        &["simulate", "--graph", "complete:5", "--group", "cyclic:2", "--p", "1.5"],
        &["simulate", "--graph", "complete:5", "--group", "cyclic:2", "--p", "0.1", "--estimator", "magic"],
        &["simulate", "--graph", "torus:5", "--group", "cyclic:2", "--p", "0.1"],
        &["sweep", "--config", "/nonexistent/config.json"],
        &["bounds", "--group-order", "2", "--p", "0.1", "--n", "10", "--d", "4"],
        &["frobnicate"],
    ] {
        let out = groupsync(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bounds_prints_csv_row() {
    let out = groupsync(&[
        "bounds", "--group-order", "2", "--p", "0.1", "--n", "100", "--d", "4", "--set-size", "800",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("group_order,p,n,f,h,p_c,failure_bound,offset_bound")
    );
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(row.len(), 8);
    assert!((row[3] - 0.82).abs() < 1e-12);
    assert!((row[4] - 0.18).abs() < 1e-12);
    assert!((row[5] - 0.5).abs() < 1e-12);
    assert!(row[6] > 0.0 && row[6] < 1e-3);
    assert!(row[7] > 0.0 && row[7] < 1.0);
}

#[test]
fn sweep_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"graph":{"family":"complete"},"group":"cyclic:2","flip_probs":[0.1],
            "sizes":[8],"estimator":"triangle","trials":10,"seed":1}"#,
    )
    .unwrap();
    let out = groupsync(&["sweep", "--config", cfg.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,p,trials,successes,frequency,wilson_lo,wilson_hi,mean_edge_errors,analytic_bound")
    );
    assert!(lines.next().unwrap().starts_with("8,0.1,10,"));
}

#[test]
fn verify_passes() {
    let out = groupsync(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}
