//! Command-line driver for the `hc-rankone` engine.
//!
//! Exit codes: 0 on success, 2 for usage errors (bad flags, unreadable
//! inputs, parameters outside a routine's domain), 3 for numerical failures
//! and for verification suites that do not pass.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hc_rankone::verify::Suite;
use num_complex::Complex64 as C64;

use args::{parse_complex, parse_positive, FunctionSpec, Grid, LambdaSet, Radii};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "HC_RANKONE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hc-rankone", version, about = "Spherical harmonic analysis on real-rank-one groups")]
pub struct Cli {
    /// Multiplicity p of the simple root; (1, 0) selects SL(2,R).
    #[arg(long, global = true, default_value_t = 1)]
    pub p: u32,
    /// Multiplicity q of the doubled root.
    #[arg(long, global = true, default_value_t = 0)]
    pub q: u32,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file supplying defaults for absent flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformMethod {
    Polar,
    Horocycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CfunMethod {
    /// Wronskian matching of the Harish-Chandra expansion.
    Matching,
    /// Linear fit of φ_λ at two radii.
    TwoPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvolveMethod {
    Oracle,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Hxi1,
    KIndependence,
    /// K × K decomposition of a modulated witness.
    #[value(name = "thm38")]
    Decomposition,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spherical function φ_λ on a grid of radii: CSV `t,re_phi,im_phi`.
    Phi {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: C64,
        #[arg(long, value_name = "START:END:STEP")]
        t: Grid,
    },
    /// Spherical transform on a spectral grid: spectral CSV.
    Transform {
        #[arg(long = "fn")]
        function: FunctionSpec,
        /// Real parts of λ.
        #[arg(long, value_name = "START:END:STEP", allow_hyphen_values = true)]
        lambda: Grid,
        /// Imaginary parts of λ; defaults to the real axis only.
        #[arg(long, value_name = "START:END:STEP", allow_hyphen_values = true)]
        im: Option<Grid>,
        #[arg(long, value_enum, default_value_t = TransformMethod::Polar)]
        method: TransformMethod,
    },
    /// Wave-packet inversion of a spectral CSV: CSV `t,re_value,im_value`.
    Invert {
        /// Spectral CSV sampled on [0, Λ] of the real axis.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_name = "START:END:STEP")]
        t: Grid,
        /// Plancherel constant; calibrated on gauss(1) when absent.
        #[arg(long)]
        c_pl: Option<f64>,
    },
    /// Harish-Chandra c-function: CSV `re_lambda,im_lambda,re_c,im_c`.
    Cfun {
        /// A single (complex) value or a real grid START:END:STEP.
        #[arg(long, allow_hyphen_values = true)]
        lambda: LambdaSet,
        #[arg(long, value_enum, default_value_t = CfunMethod::Matching)]
        method: CfunMethod,
        #[arg(long, default_value_t = 4.0)]
        t1: f64,
        #[arg(long, default_value_t = 4.5)]
        t2: f64,
    },
    /// Convolution of two radial functions: CSV `t,re_value,im_value`.
    Convolve {
        #[arg(long)]
        f: FunctionSpec,
        #[arg(long)]
        g: FunctionSpec,
        #[arg(long, value_enum, default_value_t = ConvolveMethod::Oracle)]
        method: ConvolveMethod,
        /// A single radius or a grid START:END:STEP.
        #[arg(long)]
        t: Radii,
        /// Plancherel constant for the spectral method; calibrated when absent.
        #[arg(long)]
        c_pl: Option<f64>,
        #[arg(long, default_value_t = 200.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 0.05)]
        lambda_step: f64,
    },
    /// Schwartz seminorm μ: JSON.
    Seminorm {
        #[arg(long = "fn")]
        function: FunctionSpec,
        /// Schwartz exponent in (0, 2].
        #[arg(long, default_value_t = 1.0)]
        schwartz_p: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        order: u8,
    },
    /// Measurement reports on integrals whose behavior is in question: JSON.
    Probe {
        #[arg(long, value_enum)]
        claim: Claim,
        /// Spectral parameter of the hxi1 and k-independence probes.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
        lambda: C64,
        /// Truncations of the hxi1 sweep.
        #[arg(long, value_parser = parse_positive, value_delimiter = ',', default_value = "5,10,20")]
        umax: Vec<f64>,
        /// Rotation angles of the k-independence sweep.
        #[arg(long, default_value_t = 16)]
        k_nodes: usize,
        /// Radial profile of the modulated witness.
        #[arg(long = "fn", default_value = "bump:c=1,w=0.5")]
        function: FunctionSpec,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        offset: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        amplitude: f64,
        /// Real spectral grid of the decomposition probe.
        #[arg(long, value_name = "START:END:STEP", default_value = "0.5:3:0.5")]
        lambdas: Grid,
        /// Truncation of the AN-integral reported next to each decomposition row.
        #[arg(long, default_value_t = 5.0)]
        hxi1_umax: f64,
    },
    /// Runs an acceptance suite and prints its JSON report.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Tolerance override `id=value`; repeatable.
        #[arg(long)]
        tol: Vec<String>,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: hc_rankone::Error| e.to_string())
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Output goes to stdout or `--out`;
/// diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let raw: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let merged = match with_config(&raw) {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&merged) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match commands::execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.out.as_deref(), &outcome.text) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

/// Locates `--config` in the raw arguments and merges its entries.
fn with_config(raw: &[String]) -> Result<Vec<String>, String> {
    let path = raw.iter().enumerate().find_map(|(k, a)| {
        if a == "--config" {
            raw.get(k + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    match path {
        None => Ok(raw.to_vec()),
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| format!("--config {p}: {e}"))?;
            args::merge_config(raw, &text).map_err(|e| format!("--config {p}: {e}"))
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV}={value} is not a positive integer"))?;
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(out: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    use std::io::Write;
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
