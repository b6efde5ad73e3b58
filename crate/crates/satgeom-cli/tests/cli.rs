//! End-to-end tests of the `satgeom` binary: exit codes, JSON contracts,
//! file-format round trips, and determinism across worker counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn satgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satgeom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("satgeom-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn construct_json_contract() {
    let out = satgeom(&["construct", "--q", "64", "--c", "1", "--seed", "7", "--format", "json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["size"], 34);
    assert_eq!(v["w"], 33);
    assert_eq!(v["verified"], true);
    assert_eq!(v["seed"], 7);
    assert!((v["bound"].as_f64().unwrap() - 34.9445).abs() < 1e-3);
    assert_eq!(v["set"].as_array().unwrap().len(), 34);
}

#[test]
fn threshold_reproduces_the_mu2_order() {
    let out = satgeom(&["threshold", "--mu", "2", "--d", "1.2", "--qmax", "512", "--format", "json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["q_star"], 97);
    assert_eq!(v["last_fail_prime_power"], 89);
}

#[test]
fn verify_rejects_a_full_line_with_exit_1() {
    let set_path = temp_path("line.pts");
    // Line 0 of the generated Fano plane is {0,1,2}.
    std::fs::write(&set_path, "geometry pg(2,2)\n0 1 2\n").unwrap();
    let out = satgeom(&[
        "verify",
        "--q",
        "2",
        "--set-file",
        set_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["saturating"], false);
    assert_eq!(v["witness"]["point"], 3); // least-index external point
    std::fs::remove_file(&set_path).ok();
}

#[test]
fn construct_verify_round_trip() {
    let set_path = temp_path("roundtrip.pts");
    let out = satgeom(&[
        "construct",
        "--q",
        "4",
        "--seed",
        "1",
        "--set-out",
        set_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let verify = satgeom(&["verify", "--q", "4", "--set-file", set_path.to_str().unwrap()]);
    assert!(verify.status.success());
    std::fs::remove_file(&set_path).ok();
}

#[test]
fn plane_gen_check_round_trip() {
    let plane_path = temp_path("pg24.plane");
    let gen = satgeom(&["plane", "gen", "--q", "4", "--out", plane_path.to_str().unwrap()]);
    assert!(gen.status.success());
    let check = satgeom(&[
        "plane",
        "check",
        "--plane-file",
        plane_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(check.status.success());
    let v = stdout_json(&check);
    assert_eq!(v["valid"], true);
    assert_eq!(v["points"], 21);
    // Drop one index from a line row: complete file, broken axiom, exit 1.
    let text = std::fs::read_to_string(&plane_path).unwrap();
    let mut rows: Vec<&str> = text.lines().collect();
    let shortened = rows[1].rsplit_once(' ').unwrap().0.to_string();
    rows[1] = &shortened;
    std::fs::write(&plane_path, rows.join("\n")).unwrap();
    let bad = satgeom(&["plane", "check", "--plane-file", plane_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_file(&plane_path).ok();
}

#[test]
fn mc_results_do_not_depend_on_jobs() {
    let run = |jobs: &str| {
        let out = satgeom(&[
            "mc", "--q", "32", "--c", "1.2", "--trials", "40", "--seed", "5", "--jobs", jobs,
            "--format", "json",
        ]);
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn code_export_check_radius_pipeline() {
    let set_path = temp_path("code.pts");
    let matrix_path = temp_path("code.pcm");
    let construct = satgeom(&[
        "construct",
        "--q",
        "3",
        "--seed",
        "1",
        "--set-out",
        set_path.to_str().unwrap(),
    ]);
    assert!(construct.status.success());
    let export = satgeom(&[
        "code",
        "export",
        "--q",
        "3",
        "--set-file",
        set_path.to_str().unwrap(),
        "--out",
        matrix_path.to_str().unwrap(),
    ]);
    assert!(export.status.success());
    let radius = satgeom(&[
        "oracle",
        "radius",
        "--matrix-file",
        matrix_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(radius.status.success());
    let v = stdout_json(&radius);
    assert!(v["radius"].as_u64().unwrap() <= 2);
    let check = satgeom(&[
        "code",
        "check",
        "--matrix-file",
        matrix_path.to_str().unwrap(),
        "--mu",
        "1",
        "--format",
        "json",
    ]);
    assert!(check.status.success());
    assert_eq!(stdout_json(&check)["mcf"], true);
    // The syndrome route agrees.
    let direct = satgeom(&[
        "code",
        "check",
        "--matrix-file",
        matrix_path.to_str().unwrap(),
        "--mu",
        "1",
        "--direct",
    ]);
    assert!(direct.status.success());
    std::fs::remove_file(&set_path).ok();
    std::fs::remove_file(&matrix_path).ok();
}

#[test]
fn oracle_pi_agrees_with_formula() {
    let out = satgeom(&["oracle", "pi", "--q", "2", "--w", "1", "--format", "json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pi"], "4/7");
    assert_eq!(v["agrees"], true);
}

#[test]
fn usage_errors_exit_2_with_json_on_stderr() {
    let out = satgeom(&["construct", "--q", "12"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid-range");
    let no_source = satgeom(&["construct"]);
    assert_eq!(no_source.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = satgeom(&[
        "oracle",
        "pi",
        "--q",
        "5",
        "--w",
        "5",
        "--max-subsets",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget-exceeded");
}

#[test]
fn budget_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_satgeom"))
        .args(["oracle", "pi", "--q", "5", "--w", "5"])
        .env("SATGEOM_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_table_emits_the_csv_schema() {
    let out = satgeom(&[
        "bounds", "table", "--q-min", "97", "--q-max", "101", "--mu-max", "2", "--n-dims", "2,4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,mu,N,bound,valid,prior_bound,improves"));
    // Prime powers 97..101 are 97 and 101; times mu {1,2} and N {2,4}.
    assert_eq!(lines.count(), 8);
}

#[test]
fn q_below_threshold_is_a_precondition_error() {
    let out = satgeom(&["construct", "--q", "89", "--mu", "2", "--method", "direct"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "q-below-threshold");
}
