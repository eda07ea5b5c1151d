use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stiff-euler"));
    c.env_remove("STIFF_EULER_OUT");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(String::from)
        .collect()
}

#[test]
fn default_run_keeps_the_constant_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--out", "out", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert_eq!(data_rows(&out.join("initial.csv")), data_rows(&out.join("final.csv")));
    let steps = fs::read_to_string(out.join("steps.csv")).unwrap();
    assert!(steps.starts_with("step,residual,iterations,wall_ms\n"));
    assert_eq!(steps.lines().count(), 21);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("config_hash = "));
}

#[test]
fn gamma_one_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "[gas]\ngamma = 1.0\n").unwrap();
    let o = run_in(dir.path(), &["--config", "c.toml", "--out", "out", "run"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("gamma"), "{}", stderr(&o));
}

#[test]
fn missing_field_file_is_named() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.toml"),
        "[initial]\nkind = \"file\"\npath = \"missing_field.csv\"\n",
    )
    .unwrap();
    let o = run_in(dir.path(), &["--config", "c.toml", "--out", "out", "run"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing_field.csv"), "{}", stderr(&o));
}

#[test]
fn run_from_field_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--out", "a", "run"]);
    assert!(o.status.success());
    let cfg = "n_steps = 0\n[initial]\nkind = \"file\"\npath = \"a/final.csv\"\n";
    fs::write(dir.path().join("c.toml"), cfg).unwrap();
    let o = run_in(dir.path(), &["--config", "c.toml", "--out", "b", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        data_rows(&dir.path().join("a/final.csv")),
        data_rows(&dir.path().join("b/final.csv"))
    );
}

#[test]
fn unknown_config_key_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "cells = 32\n[scheme]\ncfl_number = 0.3\n").unwrap();
    let o = run_in(dir.path(), &["--config", "c.toml", "run"]);
    let err = stderr(&o);
    assert!(!o.status.success());
    assert!(err.contains("cfl_number") && err.contains("line 3"), "{err}");
}

#[test]
fn single_point_ladder_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "[gas]\neps_ladder = [0.01]\n").unwrap();
    let o = run_in(dir.path(), &["--config", "c.toml", "--out", "out", "sweep-eps"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("ladder needs ≥ 4 points"), "{}", stderr(&o));
}

#[test]
fn omega_prints_full_precision_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["omega"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let values: Vec<f64> = text
        .lines()
        .map(|l| l.split(" = ").nth(1).unwrap().parse().unwrap())
        .collect();
    let expected = [-2.5, -0.8, 0.035, 0.0035];
    assert_eq!(values.len(), 4);
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() <= 1e-12, "{v} vs {e}");
    }
    // 17 significant digits: one before the point, sixteen after.
    assert!(text
        .lines()
        .all(|l| l.split('.').nth(1).unwrap().split('e').next().unwrap().len() == 16));
}

#[test]
fn jacobian_check_passes_for_seed_42() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--seed", "42", "check-jacobians", "--count", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("1D,100,100,") && text.contains("2D,100,100,"), "{text}");
}

#[test]
fn oracle_reports_second_order_slope() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--out", "out", "oracle-pl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("pL_k_nonzero_slope"))
        .unwrap()
        .to_string();
    assert!(line.ends_with("PASS [1.9, 2.1]"), "{line}");
    let header = fs::read_to_string(dir.path().join("out/oracle.csv")).unwrap();
    assert!(header.starts_with("epsilon,"));
}

#[test]
fn both_sweeps_pass_back_to_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--out", "out", "--jobs", "2", "sweep-eps", "--both"]);
    assert!(o.status.success(), "{}\n{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("[ap_sweep:previous_step]") && text.contains("[ap_sweep:constant]"));
    assert_eq!(text.matches(" PASS ").count(), 8, "{text}");
    assert!(!text.contains("FAIL"));
    let csv = fs::read_to_string(dir.path().join("out/sweep_constant.csv")).unwrap();
    assert!(csv.starts_with("epsilon,norm_rho_fluct,norm_p_fluct,norm_divu,norm_pL_fluct,slope_fit_context"));
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "cells = 16\nn_steps = 5\n[gas]\nepsilon = 0.01\n[initial]\nkind = \"well_prepared\"\n";
    fs::write(dir.path().join("c.toml"), cfg).unwrap();
    for out in ["a", "b"] {
        let o = run_in(dir.path(), &["--config", "c.toml", "--out", out, "run"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for file in [
        "initial.csv",
        "final.csv",
        "diagnostics.csv",
        "summary.txt",
        "config.toml",
    ] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn env_var_sets_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .current_dir(dir.path())
        .env("STIFF_EULER_OUT", "from_env")
        .args(["superconsistency"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("from_env/superconsistency.csv").exists());
    assert!(stdout(&o).contains("linearization_error_slope"));
}
