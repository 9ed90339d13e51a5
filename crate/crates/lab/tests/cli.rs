//! End-to-end checks of the experiment harness: determinism, exit codes,
//! config validation, and the CSV surfaces.

use std::fs;
use std::process::Command;

use lab::{run_experiment, Experiment};

fn run_bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn identical_config_and_seed_give_identical_output() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    for dir in [&dir1, &dir2] {
        let s = run_experiment(
            Experiment::QuakeConverge,
            r#"{"max_atoms": 4, "boxes": 6, "ts": [5.0, 10.0, 20.0], "tol": 1.0}"#,
            dir.path(),
            Some(42),
            None,
        )
        .unwrap();
        assert!(s.passed());
    }
    let a = fs::read(dir1.path().join("quake_converge.csv")).unwrap();
    let b = fs::read(dir2.path().join("quake_converge.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_override_changes_the_sample() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    for (dir, seed) in [(&dir1, 1), (&dir2, 2)] {
        run_experiment(
            Experiment::OrthoIdentity,
            r#"{"boxes": 50, "maps": 2}"#,
            dir.path(),
            Some(seed),
            None,
        )
        .unwrap();
    }
    let a = fs::read(dir1.path().join("ortho_identity.csv")).unwrap();
    let b = fs::read(dir2.path().join("ortho_identity.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn inline_lamination_reproduces_the_closed_form() {
    // Unit atom on the diagonal of the standard box, slightly enlarged
    // box supplied explicitly: the normalized masses converge to 1.
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{
        "lamination": {"atoms": [{"tail": 0.0, "head": 3.141592653589793, "weight": 1.0}]},
        "box_list": [{"a": -0.2, "b": 1.7707963267948966, "c": 2.941592653589793, "d": 4.912388980384689}],
        "ts": [10.0, 50.0, 200.0]
    }"#;
    let s = run_experiment(Experiment::QuakeConverge, config, dir.path(), None, None).unwrap();
    assert!(s.passed());
    let csv = fs::read_to_string(dir.path().join("quake_converge.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,box_id,normalized_mass,target_mass,abs_err"
    );
    let last = csv.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    let normalized: f64 = fields[2].parse().unwrap();
    assert!((normalized - 1.0).abs() < 0.02);
}

#[test]
fn invalid_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    // Crossing atoms are not a lamination.
    let crossing = r#"{"lamination": {"atoms": [
        {"tail": 0.0, "head": 3.141592653589793, "weight": 1.0},
        {"tail": 1.5707963267948966, "head": 4.71238898038469, "weight": 1.0}
    ]}}"#;
    assert!(run_experiment(Experiment::QuakeConverge, crossing, dir.path(), None, None).is_err());
    // Unknown fields are rejected.
    assert!(run_experiment(
        Experiment::QuakeBounds,
        r#"{"bogus": 1}"#,
        dir.path(),
        None,
        None
    )
    .is_err());
    // Non-increasing amplitude schedule.
    assert!(run_experiment(
        Experiment::QuakeConverge,
        r#"{"ts": [10.0, 5.0]}"#,
        dir.path(),
        None,
        None
    )
    .is_err());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(&config, "{}").unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cfg = config.to_str().unwrap().to_string();

    // All-pass run exits 0 and prints one summary line.
    let (code, stdout, _) = run_bin(&["quake-bounds", "--config", &cfg, "--out", &out]);
    assert_eq!(code, 0);
    assert!(stdout.contains("quake-bounds") && stdout.contains("PASS"));

    // An unreachable tolerance makes checks fail: exit 2.
    let (code, stdout, _) = run_bin(&[
        "commute-check",
        "--config",
        &cfg,
        "--out",
        &out,
        "--tol",
        "0",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 2);
    assert!(stdout.contains("FAIL"));

    // Validation problems exit 1.
    let (code, _, stderr) = run_bin(&["quake-bounds", "--config", "/nonexistent.json"]);
    assert_eq!(code, 1);
    assert!(!stderr.is_empty());
    fs::write(&config, r#"{"betas": [-1.0]}"#).unwrap();
    let (code, _, _) = run_bin(&["quake-bounds", "--config", &cfg, "--out", &out]);
    assert_eq!(code, 1);
}

#[test]
fn csv_headers_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let expect = [
        (
            Experiment::OrthoIdentity,
            "ortho_identity.csv",
            "map_id,box_id,a,b,c,d,mass,ortho_mass,residual",
            r#"{"boxes": 10, "maps": 1}"#,
        ),
        (
            Experiment::WeakstarDemo,
            "weakstar_demo.csv",
            "n,weak,uniform",
            r#"{"n_max": 2, "sampler": {"rotations": 8, "dilation_steps": 5, "shear_steps": 5}}"#,
        ),
        (
            Experiment::QsEstimate,
            "qs_estimate.csv",
            "map_id,pieces,estimate",
            r#"{"maps": 1, "max_atoms": 2, "sampler": {"rotations": 8, "dilation_steps": 5, "shear_steps": 5, "refine_rounds": 0}}"#,
        ),
        (
            Experiment::Seminorm,
            "seminorm.csv",
            "quantity,value",
            r#"{"max_atoms": 2, "sampler": {"rotations": 8, "dilation_steps": 5, "shear_steps": 5, "refine_rounds": 0}}"#,
        ),
        (
            Experiment::QuakeMonotone,
            "quake_monotone.csv",
            "config_id,t,case,delta_x,delta_y,ok",
            r#"{"configurations": 6}"#,
        ),
        (
            Experiment::CommuteCheck,
            "commute_check.csv",
            "pair_id,max_pointwise_dev,class_equal",
            r#"{"pairs": 3}"#,
        ),
    ];
    for (exp, file, header, cfg) in expect {
        let s = run_experiment(exp, cfg, dir.path(), Some(11), None).unwrap();
        assert!(s.passed(), "{exp} failed");
        let csv = fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(csv.lines().next().unwrap(), header, "{exp}");
    }
}
