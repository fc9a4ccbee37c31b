use std::fmt::Write as _;

use hc_rankone::convolution::{convolve_oracle, convolve_spectral};
use hc_rankone::spherical::{c_function, c_function_two_point, phi_many};
use hc_rankone::transforms::probes::{
    decomposition_probe, default_k_grid, hxi1_sweep, k_independence_witnesses, ModulatedRadial,
};
use hc_rankone::transforms::{
    calibrate_plancherel, inverse_transform_many, spherical_transform_horocycle, spherical_transform_polar,
    SpectralFunction,
};
use hc_rankone::verify::{run_suite, Tolerances, CALIBRATION_LAMBDA_MAX, ROUNDTRIP_LAMBDA_STEP};
use hc_rankone::{Error, RankOneGroup, SpectralParameter, TubeDomain};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::{CfunMethod, Claim, Cli, Command, ConvolveMethod, TransformMethod, EXIT_NUMERICAL, EXIT_USAGE};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_) | Error::RequiresSl2r | Error::Parse(_) | Error::Io(_) => {
                Self::Usage(e.to_string())
            }
            other => Self::Numerical(other),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid value for '--{flag}': {msg}"))
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn complex_rows(header: &str, rows: impl IntoIterator<Item = (f64, C64)>) -> String {
    let mut s = format!("{header}\n");
    for (x, v) in rows {
        let _ = writeln!(s, "{x},{},{}", v.re, v.im);
    }
    s
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let group = RankOneGroup::new(cli.p, cli.q)?;
    match &cli.command {
        Command::Phi { lambda, t } => {
            let ts = t.points();
            let values = phi_many(&group, SpectralParameter(*lambda), &ts)?;
            Ok(Outcome::ok(complex_rows(
                "t,re_phi,im_phi",
                ts.iter().copied().zip(values.into_iter().map(|(v, _)| v)),
            )))
        }
        Command::Transform {
            function,
            lambda,
            im,
            method,
        } => {
            let f = function.load().map_err(|e| usage("fn", e))?;
            let ims = im.map_or_else(|| vec![0.0], |g| g.points());
            let reach = ims.iter().fold(0.0f64, |m, y| m.max(y.abs()));
            let tube = TubeDomain::new(&group, reach / group.rho())?;
            let method = *method;
            let sf = SpectralFunction::sample(tube, lambda.points(), ims, |l| match method {
                TransformMethod::Polar => spherical_transform_polar(&group, &f, l),
                TransformMethod::Horocycle => spherical_transform_horocycle(&group, &f, l),
            })?;
            let mut buf = Vec::new();
            sf.write_csv(&mut buf)?;
            Ok(Outcome::ok(String::from_utf8(buf).expect("CSV is UTF-8")))
        }
        Command::Invert { input, t, c_pl } => {
            let file = std::fs::File::open(input).map_err(|e| usage("input", format!("{}: {e}", input.display())))?;
            // any imaginary rows are ignored by the inversion
            let tube = TubeDomain::new(&group, f64::MAX / 4.0)?;
            let sf = SpectralFunction::read_csv(tube, std::io::BufReader::new(file))
                .map_err(|e| usage("input", e))?;
            let c_pl = plancherel_constant(&group, *c_pl)?;
            let ts = t.points();
            let values = inverse_transform_many(&group, &sf, &ts, c_pl)?;
            Ok(Outcome::ok(complex_rows("t,re_value,im_value", ts.into_iter().zip(values))))
        }
        Command::Cfun { lambda, method, t1, t2 } => {
            let method = *method;
            let values = lambda
                .0
                .par_iter()
                .map(|&l| {
                    let l = SpectralParameter(l);
                    match method {
                        CfunMethod::Matching => c_function(&group, l),
                        CfunMethod::TwoPoint => Ok(c_function_two_point(&group, l, *t1, *t2)?.0),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut s = String::from("re_lambda,im_lambda,re_c,im_c\n");
            for (l, c) in lambda.0.iter().zip(values) {
                let _ = writeln!(s, "{},{},{},{}", l.re, l.im, c.re, c.im);
            }
            Ok(Outcome::ok(s))
        }
        Command::Convolve {
            f,
            g,
            method,
            t,
            c_pl,
            lambda_max,
            lambda_step,
        } => {
            let fr = f.load().map_err(|e| usage("f", e))?;
            let gr = g.load().map_err(|e| usage("g", e))?;
            let values: Vec<C64> = match method {
                ConvolveMethod::Oracle => t
                    .0
                    .par_iter()
                    .map(|&t| convolve_oracle(&group, &fr, &gr, t).map(|v| C64::new(v, 0.0)))
                    .collect::<Result<_, _>>()?,
                ConvolveMethod::Spectral => {
                    if !(*lambda_step > 0.0 && lambda_max > lambda_step) {
                        return Err(usage("lambda-step", "need 0 < lambda-step < lambda-max"));
                    }
                    let n = (lambda_max / lambda_step).round() as usize;
                    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * lambda_step).collect();
                    let sf = convolve_spectral(&group, &fr, &gr, &grid)?;
                    let c_pl = plancherel_constant(&group, *c_pl)?;
                    inverse_transform_many(&group, &sf, &t.0, c_pl)?
                }
            };
            Ok(Outcome::ok(complex_rows(
                "t,re_value,im_value",
                t.0.iter().copied().zip(values),
            )))
        }
        Command::Seminorm {
            function,
            schwartz_p,
            m,
            order,
        } => {
            let f = function.load().map_err(|e| usage("fn", e))?;
            let value = hc_rankone::transforms::seminorm_mu_p(&group, &f, *schwartz_p, *m, *order)?;
            #[derive(Serialize)]
            struct SeminormReport {
                function: String,
                schwartz_p: f64,
                m: u32,
                order: u8,
                bounded: bool,
                value: Option<f64>,
            }
            json(&SeminormReport {
                function: function.to_string(),
                schwartz_p: *schwartz_p,
                m: *m,
                order: *order,
                bounded: value.is_finite(),
                value: value.is_finite().then_some(value),
            })
            .map(Outcome::ok)
        }
        Command::Probe {
            claim,
            lambda,
            umax,
            k_nodes,
            function,
            offset,
            amplitude,
            lambdas,
            hxi1_umax,
        } => {
            let lambda = SpectralParameter(*lambda);
            match claim {
                Claim::Hxi1 => json(&hxi1_sweep(&group, lambda, umax)?),
                Claim::KIndependence => {
                    if *k_nodes == 0 {
                        return Err(usage("k-nodes", "must be positive"));
                    }
                    json(&k_independence_witnesses(&group, lambda, &default_k_grid(*k_nodes))?)
                }
                Claim::Decomposition => {
                    let profile = function.load().map_err(|e| usage("fn", e))?;
                    let witness = ModulatedRadial {
                        profile,
                        offset: *offset,
                        amplitude: *amplitude,
                    };
                    json(&decomposition_probe(&group, &witness, &lambdas.points(), *hxi1_umax)?)
                }
            }
            .map(Outcome::ok)
        }
        Command::Verify { suite, tol, json: path } => {
            let mut tolerances = Tolerances::default();
            for spec in tol {
                tolerances
                    .apply_override(spec)
                    .map_err(|e| usage("tol", e))?;
            }
            let report = run_suite(*suite, &tolerances);
            let text = format!("{}\n", report.to_json()?);
            if let Some(p) = path {
                std::fs::write(p, &text).map_err(|e| usage("json", format!("{}: {e}", p.display())))?;
            }
            Ok(Outcome {
                text,
                code: if report.pass { 0 } else { EXIT_NUMERICAL },
            })
        }
    }
}

fn plancherel_constant(group: &RankOneGroup, given: Option<f64>) -> CliResult<f64> {
    match given {
        Some(c) if c.is_finite() && c > 0.0 => Ok(c),
        Some(c) => Err(usage("c-pl", format!("{c} is not a positive number"))),
        None => Ok(calibrate_plancherel(group, CALIBRATION_LAMBDA_MAX, ROUNDTRIP_LAMBDA_STEP)?),
    }
}
