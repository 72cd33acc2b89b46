use bsy::cli::run_with;
use std::path::PathBuf;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["bsy"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bsy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn zeros_round_trip_then_integral_row() {
    let cache = scratch("cache.txt");
    let c = cache.to_str().unwrap();
    let (code, out, err) = run(&["zeros", "find", "--max-t", "100", "--out", c]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("count"));
    let (code, out, _) = run(&["zeros", "verify", "--in", c]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["count"], 29);

    let (code, out, err) = run(&["integral", "--T", "50", "--zeros", c]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "T,I,abs_err,subintervals,singularities");
    let cols: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(cols[0], 50.0);
    assert_eq!(cols[4], 10.0);
    // 17 significant digits
    assert_eq!(lines[1].split(',').next().unwrap(), "5.0000000000000000e1");
}

#[test]
fn tampered_zero_file_fails_verification() {
    let path = scratch("bad.txt");
    std::fs::write(&path, "# test\n14.134725141734693\n21.0\n25.010857580145688\n").unwrap();
    let (code, out, err) = run(&["zeros", "verify", "--in", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("\"verified\":false"));
    let e: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"], "Inconsistent");
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = run(&["zeta", "eval", "--sigma", "2", "--t", "0", "--frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("--frobnicate"));
    let (code, _, err) = run(&["report", "no-such-suite"]);
    assert_eq!(code, 1);
    assert!(err.contains("no-such-suite"));
    let (code, _, _) = run(&["integral"]);
    assert_eq!(code, 1);
}

#[test]
fn computational_errors_exit_two_with_json() {
    let (code, _, err) = run(&["zeta", "eval", "--sigma", "1", "--t", "0"]);
    assert_eq!(code, 2);
    let e: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"], "PoleAt1");
}

#[test]
fn zeta_json_output() {
    let (code, out, _) = run(&["--format", "json", "zeta", "eval", "--sigma", "2", "--t", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let re: f64 = v["re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
    assert!(out.contains("\"re\":1.6449340668"));
    assert!(out.contains("e0,"));
}

#[test]
fn config_file_and_flag_precedence() {
    let path = scratch("run.conf");
    std::fs::write(&path, "# looser\nquad_tol = 1e-8\noutput_format = json\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["--config", p, "zeta", "theta", "--t", "100"]);
    assert_eq!(code, 0);
    assert!(out.starts_with('{'));
    let (code, out, _) = run(&["--config", p, "--format", "csv", "zeta", "theta", "--t", "100"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("t,theta"));
    std::fs::write(&path, "quad_tol = banana\n").unwrap();
    let (code, _, err) = run(&["--config", p, "zeta", "theta", "--t", "100"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1"));
}

#[test]
fn report_suites_emit_verdicts() {
    for suite in ["weight-identity", "zero-sum", "resonator-exactness"] {
        let (code, out, err) = run(&["report", suite]);
        assert_eq!(code, 0, "{suite}: {err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["pass"], true);
        assert!(v["criterion_id"].is_u64());
    }
}

#[test]
fn resonator_build_check_and_mv() {
    let table = scratch("toy.txt");
    let t = table.to_str().unwrap();
    let args = [
        "--mu",
        "1",
        "--N",
        "100",
        "--h",
        "0.1",
        "--override",
        "--A",
        "2",
        "--B",
        "30",
        "--L",
        "1",
    ];
    let mut build = vec!["resonator", "build"];
    build.extend_from_slice(&args);
    build.extend_from_slice(&["--sign", "plus", "--out", t]);
    let (code, _, err) = run(&build);
    assert_eq!(code, 0, "{err}");
    let mut check = vec!["resonator", "check"];
    check.extend_from_slice(&args);
    let (code, out, _) = run(&check);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let plus = v["ratio_plus"].as_f64().unwrap();
    assert!(plus > 0.0);

    let (code, out, _) = run(&["mv", "exact", "--table", t, "--T", "1000"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("T,mean_square,diagonal"));
    let (code, out, err) = run(&[
        "mv", "lemma3", "--table", t, "--alpha", "0.8", "--h", "0.1", "--T", "50",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    for k in ["lhs_re", "lhs_im", "rhs_re", "rhs_im", "normalized_gap"] {
        assert!(v[k].is_f64(), "{k}");
    }
}

#[test]
fn argument_scans_write_csv() {
    let (code, out, err) = run(&["arg", "s", "--t", "50"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("t,S"));
    let (code, out, err) = run(&["arg", "lemma2", "--T", "20", "--tmax", "60", "--points", "5"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,stat,normalized");
    assert_eq!(lines.len(), 6);
}
