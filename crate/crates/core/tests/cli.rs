use std::fs;
use std::process::Command;

fn amcf() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_amcf"));
    c.env_remove("AMCF_OUTPUT_DIR");
    c
}

#[test]
fn simulate_example_converges() {
    let dir = tempfile::tempdir().unwrap();
    let out = amcf()
        .args(["simulate", "--r-star", "2", "--perturb-mode", "1", "--perturb-amp", "0.01"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["report"]["termination"], "converged");
    assert_eq!(summary["report"]["final_state"]["kind"], "cylinder");
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("# amcf "));
    assert_eq!(csv.lines().nth(1), Some("t,min_r,volume,area,h_avg,g_inf"));
}

#[test]
fn equilibrium_and_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = amcf()
        .args(["equilibrium", "--B", "0.5", "--k", "1", "--n", "512"])
        .env("AMCF_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("equilibrium.json")).unwrap()).unwrap();
    assert!(rep["report"]["g_inf"].as_f64().unwrap() < 1e-6);
    assert!(rep["report"]["cmc_deviation"].as_f64().unwrap() < 1e-6);
    assert_eq!(fs::read_to_string(dir.path().join("unduloid.csv")).unwrap().lines().count(), 514);

    let out = amcf()
        .args(["equilibrium", "--family", "--n", "64"])
        .env("AMCF_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let fam = fs::read_to_string(dir.path().join("family_k1.csv")).unwrap();
    assert_eq!(fam.lines().count(), 2 + 9 * 64);
}

#[test]
fn branch_example_reports_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = amcf()
        .args(["branch", "--ell", "1", "--s-max", "0.2", "--steps", "40"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("pitchfork_ell1.json")).unwrap()).unwrap();
    let ddot = doc["report"]["lambda_ddot0"].as_f64().unwrap();
    assert!(ddot < 0.0);
    let csv = fs::read_to_string(dir.path().join("branch_ell1.csv")).unwrap();
    let cols = csv.lines().nth(1).unwrap();
    assert!(cols.starts_with("s,lambda,leading_eig_re,leading_eig_im,a_1,"));
    assert_eq!(csv.lines().count(), 2 + 81);
}

#[test]
fn spectrum_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = amcf().args(["spectrum", "--r-star", "0.5"]).arg("--output-dir").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let table = fs::read_to_string(dir.path().join("spectrum_table.csv")).unwrap();
    assert_eq!(table.lines().nth(1), Some("r_star,k,eigenvalue"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(doc["report"]["stability"], "unstable");
    assert_eq!(doc["report"]["closed_form"]["operator_tag"], "full-DG");
    assert_eq!(doc["report"]["closed_form"]["eigenvalues"][0][0], 3.0);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# spectrum run\nr_star = 0.5\nk-max = 3\n").unwrap();
    let out = amcf()
        .args(["spectrum", "--r-star", "2"])
        .arg("--config")
        .arg(&cfg)
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let table = fs::read_to_string(dir.path().join("spectrum_table.csv")).unwrap();
    assert!(table.lines().next().unwrap().contains("k_max=3 m=21 n=128 r_star=2"));

    fs::write(&cfg, "r_star = 0.5\nwobble = 1\n").unwrap();
    let out = amcf().arg("spectrum").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wobble"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["simulate", "--n", "7"],
        vec!["simulate", "--nonsense"],
        vec!["equilibrium", "--B", "2"],
        vec!["verify", "--mutate", "elsewhere"],
    ] {
        let out = amcf().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // RK4 above its stability bound is refused by the stepper.
    let out = amcf()
        .args(["simulate", "--scheme", "rk4", "--dt", "0.1", "--n", "64", "--t-end", "1"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn outputs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = amcf()
            .args(["branch", "--ell", "2", "--s-max", "0.05", "--steps", "5"])
            .arg("--output-dir")
            .arg(d.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["branch_ell2.csv", "pitchfork_ell2.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}
