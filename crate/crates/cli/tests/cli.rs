//! End-to-end runs of the `hc-rankone` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hc-rankone"));
    c.env_remove("HC_RANKONE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Rows of a CSV after the header, parsed as floats.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn phi_at_lambda_zero_starts_at_one() {
    let o = run(&["phi", "--p", "1", "--q", "0", "--lambda", "0", "--t", "0:5:0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("t,re_phi,im_phi"));
    let r = rows(&text);
    assert_eq!(r.len(), 11);
    assert_eq!(r[0], vec![0.0, 1.0, 0.0]);
    // φ₀ is positive and decreasing
    assert!(r.windows(2).all(|w| w[1][1] < w[0][1] && w[1][1] > 0.0));
}

#[test]
fn phi_is_weyl_invariant() {
    let a = run(&["phi", "--lambda", "1.5", "--t", "0:3:0.25"]);
    let b = run(&["phi", "--lambda", "-1.5", "--t", "0:3:0.25"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    for (x, y) in rows(&stdout(&a)).iter().zip(rows(&stdout(&b))) {
        assert!((x[1] - y[1]).abs() < 1e-13 && (x[2] - y[2]).abs() < 1e-13, "{x:?} vs {y:?}");
    }
}

#[test]
fn reversed_grid_is_a_usage_error_naming_the_flag() {
    let o = run(&["phi", "--lambda", "0", "--t", "5:0:0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--t"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["phi", "--lambda", "abc", "--t", "0:1:0.1"][..],
        &["phi", "--t", "0:1:0.1"],
        &["nonsense"],
        &["transform", "--fn", "bump:c=1", "--lambda", "0:1:0.5"],
        &["transform", "--fn", "wave:k=2", "--lambda", "0:1:0.5"],
        &["seminorm", "--fn", "gauss:s=1", "--schwartz-p", "3"],
        &["phi", "--p", "3", "--q", "1", "--lambda", "1", "--t", "0:1:0.1", "--config", "/nonexistent/cfg"],
        &["verify", "--suite", "everything"],
        &["invert", "--input", "/nonexistent.csv", "--t", "0:1:0.5"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn matrix_only_routines_reject_abstract_groups_with_usage_code() {
    let o = run(&["probe", "--claim", "hxi1", "--p", "3", "--q", "1", "--umax", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["transform", "--fn", "bump:c=1,w=0.5", "--lambda", "0:4:0.5", "--im", "-0.2:0.2:0.2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let threaded = bin().args(args).env("HC_RANKONE_THREADS", "3").output().unwrap();
    assert_eq!(threaded.stdout, a.stdout);
}

#[test]
fn transform_writes_a_spectral_csv() {
    let o = run(&["transform", "--fn", "bump:c=1,w=0.5", "--lambda", "0:10:0.1", "--method", "polar"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("re_lambda,im_lambda,re_value,im_value"));
    let r = rows(&text);
    assert_eq!(r.len(), 101);
    assert!(r.iter().all(|row| row[1] == 0.0 && row[3].abs() < 1e-12));
    let h = run(&["transform", "--fn", "bump:c=1,w=0.5", "--lambda", "0:10:0.1", "--method", "horocycle"]);
    for (p, q) in r.iter().zip(rows(&stdout(&h))) {
        assert!((q[2] - 2.0 * std::f64::consts::PI * p[2]).abs() < 1e-3 * q[2].abs().max(1e-3));
    }
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    for v in ["0", "many"] {
        let o = bin()
            .args(["phi", "--lambda", "0", "--t", "0:1:0.5"])
            .env("HC_RANKONE_THREADS", v)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("HC_RANKONE_THREADS"));
    }
}

#[test]
fn out_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    let o = run(&["phi", "--lambda", "1", "--t", "0:1:0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&run(&["phi", "--lambda", "1", "--t", "0:1:0.5"])));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# batch defaults\nlambda = 2\nt = 0:1:0.5\n");
    let from_cfg = run(&["phi", "--config", &cfg]);
    assert_eq!(from_cfg.status.code(), Some(0), "{}", stderr(&from_cfg));
    assert_eq!(stdout(&from_cfg), stdout(&run(&["phi", "--lambda", "2", "--t", "0:1:0.5"])));
    let overridden = run(&["phi", "--config", &cfg, "--lambda", "0.5"]);
    assert_eq!(stdout(&overridden), stdout(&run(&["phi", "--lambda", "0.5", "--t", "0:1:0.5"])));
    let bad = write(dir.path(), "bad.cfg", "colour = red\n");
    assert_eq!(run(&["phi", "--config", &bad, "--lambda", "0", "--t", "0:1:0.5"]).status.code(), Some(2));
    let malformed = write(dir.path(), "malformed.cfg", "just words\n");
    assert_eq!(run(&["phi", "--config", &malformed]).status.code(), Some(2));
}

#[test]
fn sampled_function_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("t,value\n");
    for i in 0..=400 {
        let t = i as f64 * 0.02;
        csv.push_str(&format!("{t},{}\n", (-t * t).exp()));
    }
    let file = write(dir.path(), "gauss.csv", &csv);
    let sampled = run(&["transform", "--fn", &format!("file:{file}"), "--lambda", "0:2:1"]);
    let exact = run(&["transform", "--fn", "gauss:s=1", "--lambda", "0:2:1"]);
    assert_eq!(sampled.status.code(), Some(0), "{}", stderr(&sampled));
    for (a, b) in rows(&stdout(&sampled)).iter().zip(rows(&stdout(&exact))) {
        assert!((a[2] - b[2]).abs() < 1e-5 * b[2].abs(), "{a:?} vs {b:?}");
    }
}

#[test]
fn transform_then_invert_recovers_the_bump() {
    let dir = tempfile::tempdir().unwrap();
    let spectral = dir.path().join("hf.csv");
    let o = run(&[
        "transform", "--fn", "bump:c=1,w=0.5", "--lambda", "0:200:0.05", "--out", spectral.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let inv = run(&[
        "invert", "--input", spectral.to_str().unwrap(), "--t", "0:3:0.25", "--c-pl", &(1.0 / std::f64::consts::PI).to_string(),
    ]);
    assert_eq!(inv.status.code(), Some(0), "{}", stderr(&inv));
    for row in rows(&stdout(&inv)) {
        let x = (row[0] - 1.0) / 0.5;
        let exact = if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
        assert!((row[1] - exact).abs() < 1e-3, "{row:?} vs {exact}");
    }
}

#[test]
fn cfun_methods_agree() {
    let a = run(&["cfun", "--lambda", "1+0.2i"]);
    let b = run(&["cfun", "--lambda", "1+0.2i", "--method", "two-point"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let (x, y) = (&rows(&stdout(&a))[0], &rows(&stdout(&b))[0]);
    assert_eq!((x[0], x[1]), (1.0, 0.2));
    assert!((x[2] - y[2]).hypot(x[3] - y[3]) < 1e-5 * x[2].hypot(x[3]));
}

#[test]
fn oracle_and_spectral_convolution_agree() {
    let base = ["convolve", "--f", "bump:c=1,w=0.5", "--g", "bump:c=0.5,w=0.3", "--t", "1.0"];
    let oracle = run(&[&base[..], &["--method", "oracle"]].concat());
    let spectral = run(&[&base[..], &["--method", "spectral"]].concat());
    assert_eq!(oracle.status.code(), Some(0), "{}", stderr(&oracle));
    assert_eq!(spectral.status.code(), Some(0), "{}", stderr(&spectral));
    let (a, b) = (rows(&stdout(&oracle))[0][1], rows(&stdout(&spectral))[0][1]);
    assert!((a - b).abs() < 1e-3 * a.abs(), "{a} vs {b}");
}

#[test]
fn seminorm_reports_json() {
    let o = run(&["seminorm", "--fn", "gauss:s=1", "--m", "2", "--order", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["m"], 2);
    assert_eq!(v["order"], 1);
    assert_eq!(v["bounded"], true);
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn hxi1_probe_emits_the_truncation_sweep() {
    let o = run(&["probe", "--claim", "hxi1", "--umax", "5,10,20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
    assert!(v["divergent"].is_boolean());
}

#[test]
fn decomposition_probe_reports_each_lambda() {
    let o = run(&["probe", "--claim", "thm38", "--lambdas", "0.5:1.5:0.5", "--offset", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!((r["ratio_re"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn verify_special_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["verify", "--suite", "special", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let printed: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(printed["suite"], "special");
    assert_eq!(printed["pass"], true);
    assert_eq!(printed["checks"], written["checks"]);
}

#[test]
fn tolerance_override_changes_exactly_one_check() {
    let tols = |extra: &[&str]| -> Vec<f64> {
        let o = run(&[&["verify", "--suite", "spherical"][..], extra].concat());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["checks"].as_array().unwrap().iter().map(|c| c["tolerance"].as_f64().unwrap()).collect()
    };
    let base = tols(&[]);
    let loose = tols(&["--tol", "casimir=1e-4"]);
    assert_eq!(base.len(), loose.len());
    let changed: Vec<usize> = (0..base.len()).filter(|&i| base[i] != loose[i]).collect();
    assert_eq!(changed.len(), 1);
    assert_eq!(loose[changed[0]], 1e-4);
    assert_eq!(run(&["verify", "--suite", "special", "--tol", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "special", "--tol", "casimir"]).status.code(), Some(2));
}

#[test]
fn a_failing_suite_exits_three() {
    let o = run(&["verify", "--suite", "special", "--tol", "hyp_ln2=1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}
