//! Acceptance run: one line per criterion with its checks, measured values,
//! tolerances and wall time against the runtime limit. Exits non-zero if
//! any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hc_rankone::verify::{
    eigen_equation_checks, functional_equation_checks, hypergeometric_checks, multiplicativity_checks,
    projection_checks, round_trip_checks, series_checks, spherical_convolution_checks, tube_checks, Check,
    Tolerances,
};
use serde_json::Value;

type Criterion = fn(&Tolerances) -> Vec<Check>;

fn probe_artifacts(_: &Tolerances) -> Vec<Check> {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut checks = Vec::new();
    for (claim, extra, schema) in [
        ("hxi1", &["--umax", "5,10,20"][..], hxi1_schema as fn(&Value) -> bool),
        ("k-independence", &[][..], k_schema),
    ] {
        let path = dir.path().join(format!("{claim}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_hc-rankone"))
            .args(["probe", "--claim", claim, "--out"])
            .arg(&path)
            .args(extra)
            .status();
        let valid = status.map(|s| s.success()).unwrap_or(false)
            && std::fs::read_to_string(&path)
                .ok()
                .and_then(|t| serde_json::from_str::<Value>(&t).ok())
                .is_some_and(|v| schema(&v));
        checks.push(Check::at_most(&format!("{claim}_report"), if valid { 0.0 } else { 1.0 }, 0.0));
    }
    checks
}

fn hxi1_schema(v: &Value) -> bool {
    let values = v["values"].as_array();
    values.is_some_and(|a| {
        a.len() == 3 && a.iter().all(|x| ["u_max", "re", "im", "abs"].iter().all(|k| x[k].is_number()))
    }) && ["monotone_growth", "stabilized", "divergent"].iter().all(|k| v[k].is_boolean())
        && v["lambda_re"].is_number()
}

fn k_schema(v: &Value) -> bool {
    v["sweeps"].as_array().is_some_and(|s| {
        s.len() == 3
            && s.iter().all(|w| {
                w["witness"].is_string()
                    && w["variation"].is_number()
                    && w["k_angles"].as_array().map(Vec::len) == w["values_re"].as_array().map(Vec::len)
            })
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, u64); 10] = [
        ("hypergeometric correctness", hypergeometric_checks, 1),
        ("spherical eigen-equation", eigen_equation_checks, 10),
        ("functional equation", functional_equation_checks, 10),
        ("series and c-function", series_checks, 5),
        ("transform multiplicativity", multiplicativity_checks, 60),
        ("round-trip inversion", round_trip_checks, 60),
        ("tube audit", tube_checks, 120),
        ("projection algebra", projection_checks, 10),
        ("spherical convolution", spherical_convolution_checks, 30),
        ("probe artifacts", probe_artifacts, 60),
    ];
    let tol = Tolerances::default();
    let mut all = true;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run(&tol);
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = in_time && !checks.is_empty() && checks.iter().all(|c| c.pass);
        all &= pass;
        let detail: Vec<String> = checks
            .iter()
            .map(|c| {
                if c.tolerance.is_finite() {
                    format!("{}={:.3e}<={:.0e}{}", c.id, c.measured, c.tolerance, if c.pass { "" } else { "!" })
                } else {
                    format!("{}={:.3e}", c.id, c.measured)
                }
            })
            .collect();
        println!(
            "criterion {:>2} {:<5} {:<28} {:>7.2}s/{}s  {}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            name,
            elapsed.as_secs_f64(),
            limit,
            detail.join(" "),
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
