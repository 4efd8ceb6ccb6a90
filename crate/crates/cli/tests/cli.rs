use std::fs;
use std::process::{Command, Output};

use minlen_cli::output::num;
use minlen_core::{Builtin, DeformationProfile, DimensionlessCouplings, SpectralProblem};

fn minlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minlen"))
        .args(args)
        .env_remove("MINLEN_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn threshold_cutoff_json() {
    let o = minlen(&["threshold", "--profile", "cutoff", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"gamma0\": 2.0, \"i2_zero\": 2.0}\n");
}

#[test]
fn no_bound_state_exits_two() {
    let o = minlen(&[
        "solve",
        "--profile",
        "cutoff",
        "--alpha",
        "0",
        "--gamma",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no bound state"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn verify_kempf_residuals() {
    let o = minlen(&["verify", "--profile", "kempf", "--eps", "0.5,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("eps,i1_closed,i1_quad,i1_diff,i2_closed,i2_quad,i2_diff\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r[3].parse::<f64>().unwrap() < 1e-8);
        assert!(r[6].parse::<f64>().unwrap() < 1e-8);
    }
}

#[test]
fn verify_rejects_custom() {
    let o = minlen(&["verify", "--profile", "custom:expr=y", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--profile"));
}

#[test]
fn solve_output_is_a_regression_fixture() {
    let o = minlen(&[
        "solve",
        "--profile",
        "kempf",
        "--alpha",
        "2",
        "--gamma",
        "-0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["bracket", "eps_star", "i1", "i2", "residual"]);
    assert!(text.find("eps_star").unwrap() < text.find("bracket").unwrap());

    let problem = SpectralProblem::new(
        DeformationProfile::builtin(Builtin::Kempf),
        DimensionlessCouplings::new(2.0, -0.5).unwrap(),
    );
    let state = problem.solve_bound_state().unwrap();
    let printed = text
        .split("\"eps_star\": ")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap();
    assert_eq!(printed, num(state.eps_star));
    assert_eq!(
        text,
        stdout(&minlen(&[
            "solve",
            "--profile",
            "kempf",
            "--alpha",
            "2",
            "--gamma",
            "-0.5"
        ]))
    );
}

#[test]
fn physical_solve_reports_energy() {
    let o = minlen(&[
        "solve",
        "--profile",
        "cutoff",
        "--physical",
        "1,1,1,0",
        "--bound",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eps = v["eps_star"].as_f64().unwrap();
    let energy = v["energy"].as_f64().unwrap();
    assert!((energy + eps * eps * 4.0 / 2.0).abs() < 1e-13);
}

#[test]
fn config_errors_exit_one() {
    for args in [
        vec![
            "solve",
            "--profile",
            "cutoff",
            "--alpha",
            "1",
            "--physical",
            "1,1,1,1",
        ],
        vec!["solve", "--profile", "cutoff"],
        vec!["solve", "--alpha", "1"],
        vec!["solve", "--profile", "cutoff", "--alpha", "-1"],
        vec![
            "sweep",
            "--profile",
            "cutoff",
            "--alpha-min",
            "1",
            "--alpha-max",
            "2",
            "--alpha-steps",
            "0",
        ],
        vec!["integrals", "--profile", "cutoff", "--eps", "1,x"],
        vec![
            "wavefunction",
            "--profile",
            "cutoff",
            "--alpha",
            "1",
            "--samples",
            "1",
        ],
        vec!["solve", "--profile", "custom:expr=y^2", "--alpha", "1"],
        vec!["figure", "fig1", "--out-dir", "/tmp", "--alpha-steps", "0"],
    ] {
        let o = minlen(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn tolerance_from_environment() {
    let bad = Command::new(env!("CARGO_BIN_EXE_minlen"))
        .args(["integrals", "--profile", "cutoff", "--eps", "1"])
        .env("MINLEN_TOL", "loose")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("MINLEN_TOL"));
    let overridden = Command::new(env!("CARGO_BIN_EXE_minlen"))
        .args([
            "integrals",
            "--profile",
            "cutoff",
            "--eps",
            "1",
            "--tol",
            "1e-6",
        ])
        .env("MINLEN_TOL", "loose")
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
}

#[test]
fn sweep_is_deterministic_and_leaves_gaps() {
    let args = [
        "sweep",
        "--profile",
        "cutoff",
        "--gamma",
        "-1.9",
        "--alpha-min",
        "0.5",
        "--alpha-max",
        "2",
        "--alpha-steps",
        "7",
    ];
    let a = minlen(&args);
    let b = minlen(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = rows(&stdout(&a));
    assert_eq!(rows[0], ["0.5", ""]);
    let filled: Vec<f64> = rows
        .iter()
        .filter(|r| !r[1].is_empty())
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert!(filled.len() >= 4);
    assert!(filled.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn wavefunction_three_samples() {
    let o = minlen(&[
        "wavefunction",
        "--profile",
        "cutoff",
        "--alpha",
        "0",
        "--gamma",
        "1",
        "--samples",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&stdout(&o));
    let ys: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ys, ["-1.0", "0.0", "1.0"]);
    assert!(rows.iter().all(|r| r[3] == "0.0"));
    assert_eq!(rows[0][1], rows[2][1]);
}

#[test]
fn limit_sweep_quadruples_energy() {
    let o = minlen(&[
        "limit-sweep",
        "--physical",
        "1,1,1,0",
        "--b-min",
        "1",
        "--b-max",
        "8",
        "--steps",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let energies: Vec<f64> = rows(&stdout(&o))
        .iter()
        .map(|r| r[3].parse().unwrap())
        .collect();
    for w in energies.windows(2) {
        assert!((w[1] / w[0] - 4.0).abs() < 1e-6);
    }
}

#[test]
fn custom_profiles_from_flag_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kempf_copy.txt");
    fs::write(
        &path,
        "name=kcopy\nkind=custom\nexpr=(2/pi)*tan(pi*y/2)\nb=1\n",
    )
    .unwrap();
    let spec = format!("file:{}", path.display());
    let from_file = minlen(&["threshold", "--profile", &spec, "--alpha", "1"]);
    let from_flag = minlen(&[
        "threshold",
        "--k-expr",
        "(2/pi)*tan(pi*y/2)",
        "--alpha",
        "1",
    ]);
    for o in [&from_file, &from_flag] {
        assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
        let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        let g0 = v["gamma0"].as_f64().unwrap();
        assert!(
            (g0 - (4.0 * std::f64::consts::LN_2 - std::f64::consts::PI.powi(2) / 6.0)).abs() < 1e-7
        );
    }
}

#[test]
fn output_flag_and_figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ints.csv");
    let o = minlen(&[
        "integrals",
        "--profile",
        "power32",
        "--eps",
        "0.5",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(fs::read_to_string(&out)
        .unwrap()
        .starts_with("eps,i1,i2,err1,err2\n"));

    let figs = dir.path().join("figs");
    let o = minlen(&[
        "figure",
        "fig2",
        "--out-dir",
        figs.to_str().unwrap(),
        "--alpha-steps",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest = fs::read_to_string(figs.join("manifest.csv")).unwrap();
    assert_eq!(manifest, stdout(&o));
    assert_eq!(manifest.lines().count(), 10);
    let curve = fs::read_to_string(figs.join("fig2_power32_0.csv")).unwrap();
    assert!(curve.starts_with("alpha,eps_star\n0.1,\n"));
}
