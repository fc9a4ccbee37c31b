//! Property suites with pinned tolerances, shared by the `verify` command
//! and the acceptance tests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::{
    convolve_oracle, convolve_oracle_sampled, convolve_spectral, ktype_project, sphericalize_samples, KTypeIndex,
    PolarSamples, Side, SphericalConvolution,
};
use crate::error::{Error, Result};
use crate::group_model::{RankOneGroup, SpectralParameter, TubeDomain};
use crate::radial::RadialFunction;
use crate::special_functions::{gauss_2f1, gauss_2f1_dz, gauss_2f1_pfaff, gauss_2f1_series, HypergeomParams};
use crate::spherical::{
    c_function, casimir_residual, functional_equation_defect, harish_chandra_expansion, phi, phi_many,
    SphericalEvaluator,
};
use crate::transforms::probes::{decomposition_probe, ModulatedRadial};
use crate::transforms::{
    calibrate_plancherel, inverse_transform_many, spherical_transform_horocycle, spherical_transform_polar,
    spherical_transform_polar_many, tube_grid, tube_holomorphy_defect_with, SpectralFunction, Stencil,
};

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured` is finite and at most `tolerance`.
    pub fn at_most(id: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            id: id.to_string(),
            measured,
            tolerance,
            pass: measured.is_finite() && measured <= tolerance,
        }
    }

    /// A measured number with nothing to compare against; passes when finite.
    pub fn report(id: &str, measured: f64) -> Self {
        Self {
            id: id.to_string(),
            measured,
            tolerance: f64::INFINITY,
            pass: measured.is_finite(),
        }
    }

    /// A check whose computation itself failed.
    fn failed(id: &str, tolerance: f64) -> Self {
        Self {
            id: id.to_string(),
            measured: f64::NAN,
            tolerance,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub runtime_seconds: f64,
}

impl VerifyReport {
    pub fn new(suite: &str, checks: Vec<Check>, runtime_seconds: f64) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            suite: suite.to_string(),
            checks,
            pass,
            runtime_seconds,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Special,
    Spherical,
    Transforms,
    Convolution,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Self::Special => "special",
            Self::Spherical => "spherical",
            Self::Transforms => "transforms",
            Self::Convolution => "convolution",
            Self::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "special" => Ok(Self::Special),
            "spherical" => Ok(Self::Spherical),
            "transforms" => Ok(Self::Transforms),
            "convolution" => Ok(Self::Convolution),
            "all" => Ok(Self::All),
            other => Err(Error::InvalidParameters(format!(
                "unknown suite `{other}` (expected special, spherical, transforms, convolution or all)"
            ))),
        }
    }
}

/// Default tolerance of every check, keyed by check id.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("hyp_ln2", 1e-10),
    ("hyp_derivative", 1e-6),
    ("hyp_paths", 1e-10),
    ("casimir", 1e-6),
    ("functional_equation", 1e-6),
    ("hc_series", 1e-8),
    ("c_limit", 1e-5),
    ("multiplicativity", 1e-3),
    ("roundtrip", 1e-3),
    ("plancherel_transfer", 1e-3),
    ("horocycle_kappa", 1e-3),
    ("tube_cr", 1e-4),
    ("tube_weyl", 1e-8),
    ("tube_decay", 1.0),
    ("sphericalize_idempotency", 1e-10),
    ("ktype_idempotency", 1e-10),
    ("ktype_orthogonality", 1e-10),
    ("biinvariant_ratio", 1e-6),
    ("g_proportionality", 1e-5),
    ("g_casimir", 1e-4),
];

/// Per-check tolerances: the defaults, with validated overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }
}

impl Tolerances {
    /// Replaces one tolerance; unknown ids and non-positive values are errors.
    pub fn set(&mut self, id: &str, value: f64) -> Result<()> {
        if !(value > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "tolerance for `{id}` must be positive, got {value}"
            )));
        }
        match self.0.get_mut(id) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(Error::InvalidParameters(format!("unknown check id `{id}`"))),
        }
    }

    /// Parses `id=value`.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("tolerance override `{spec}` is not of the form id=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("tolerance override `{spec}` has a non-numeric value")))?;
        self.set(k.trim(), v)
    }

    pub fn get(&self, id: &str) -> f64 {
        self.0[id]
    }
}

/// Runs every criterion belonging to `suite`.
pub fn run_suite(suite: Suite, tol: &Tolerances) -> VerifyReport {
    let start = Instant::now();
    let criteria: &[fn(&Tolerances) -> Vec<Check>] = match suite {
        Suite::Special => &[hypergeometric_checks],
        Suite::Spherical => &[eigen_equation_checks, functional_equation_checks, series_checks],
        Suite::Transforms => &[round_trip_checks, tube_checks, horocycle_checks],
        Suite::Convolution => &[multiplicativity_checks, projection_checks, spherical_convolution_checks],
        Suite::All => &[
            hypergeometric_checks,
            eigen_equation_checks,
            functional_equation_checks,
            series_checks,
            multiplicativity_checks,
            round_trip_checks,
            tube_checks,
            horocycle_checks,
            projection_checks,
            spherical_convolution_checks,
        ],
    };
    let checks = criteria.iter().flat_map(|c| c(tol)).collect();
    VerifyReport::new(suite.name(), checks, start.elapsed().as_secs_f64())
}

fn checked(id: &str, tol: f64, measured: Result<f64>) -> Check {
    match measured {
        Ok(m) => Check::at_most(id, m, tol),
        Err(_) => Check::failed(id, tol),
    }
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

/// 2F1 at a known value, its z-derivative against central differences, and
/// agreement of the direct series with the Pfaff-transformed evaluation.
pub fn hypergeometric_checks(tol: &Tolerances) -> Vec<Check> {
    let one = C64::new(1.0, 0.0);
    let ln2 = HypergeomParams::new(one, one, 2.0, -1.0)
        .and_then(|p| gauss_2f1(&p))
        .map(|v| (v - 2f64.ln()).norm());

    let derivative = max_of(
        [(0.3, 0.2, 1.5, -0.3), (1.2, -0.4, 2.5, 0.4), (0.75, 0.5, 1.0, -4.0)]
            .into_iter()
            .map(|(a, b, c, z): (f64, f64, f64, f64)| {
                let (a, b) = (C64::new(a, 0.1), C64::new(b, -0.2));
                let h = 1e-5;
                let at = |z| HypergeomParams::new(a, b, c, z).and_then(|p| gauss_2f1(&p));
                let fd = (at(z + h)? - at(z - h)?) / (2.0 * h);
                let exact = gauss_2f1_dz(&HypergeomParams::new(a, b, c, z)?)?;
                Ok((exact - fd).norm() / exact.norm().max(1.0))
            }),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x2f1);
    let samples: Vec<(C64, C64, f64, f64)> = (0..100)
        .map(|_| {
            let a = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let b = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let c = rng.gen_range(0.5..4.0);
            let z = rng.gen_range(-0.5..0.5);
            (a, b, c, z)
        })
        .collect();
    let paths = max_of(samples.into_iter().map(|(a, b, c, z)| {
        let s = gauss_2f1_series(a, b, c, z)?;
        let p = gauss_2f1_pfaff(a, b, c, z)?;
        Ok((s - p).norm() / s.norm().max(1.0))
    }));

    vec![
        checked("hyp_ln2", tol.get("hyp_ln2"), ln2),
        checked("hyp_derivative", tol.get("hyp_derivative"), derivative),
        checked("hyp_paths", tol.get("hyp_paths"), paths),
    ]
}

fn groups() -> Vec<RankOneGroup> {
    [(1, 0), (2, 0), (3, 1)]
        .iter()
        .map(|&(p, q)| RankOneGroup::new(p, q).expect("valid multiplicities"))
        .collect()
}

/// sup |casimir_residual(φ_λ)| over t ∈ [0.1, 5] (step 0.01).
pub fn eigen_equation_checks(tol: &Tolerances) -> Vec<Check> {
    let lambdas = [
        SpectralParameter::real(0.5),
        SpectralParameter::real(1.0),
        SpectralParameter::real(2.0),
        SpectralParameter::new(1.0, 0.3),
    ];
    let ts: Vec<f64> = (10..=500).map(|i| i as f64 * 0.01).collect();
    let jobs: Vec<(RankOneGroup, SpectralParameter)> = groups()
        .into_iter()
        .flat_map(|g| lambdas.iter().map(move |&l| (g, l)))
        .collect();
    let worst = max_of(jobs.par_iter().map(|&(g, l)| {
        let ev = SphericalEvaluator::new(g, l);
        max_of(ts.iter().map(|&t| Ok(casimir_residual(&g, l, &ev, t)?.norm())))
    }).collect::<Vec<_>>());
    vec![checked("casimir", tol.get("casimir"), worst)]
}

/// K-average product formula on SL(2,R).
pub fn functional_equation_checks(tol: &Tolerances) -> Vec<Check> {
    let g = RankOneGroup::sl2r();
    let lambdas = [
        SpectralParameter::real(0.0),
        SpectralParameter::real(0.7),
        SpectralParameter::real(2.0),
        SpectralParameter::new(0.0, 0.3),
    ];
    let pts = [0.5, 1.0, 1.5];
    let mut jobs = Vec::new();
    for &l in &lambdas {
        for &s in &pts {
            for &t in &pts {
                jobs.push((l, s, t));
            }
        }
    }
    let worst = max_of(
        jobs.par_iter()
            .map(|&(l, s, t)| functional_equation_defect(&g, l, s, t))
            .collect::<Vec<_>>(),
    );
    vec![checked("functional_equation", tol.get("functional_equation"), worst)]
}

/// Harish-Chandra series against direct evaluation for t ≥ 4, and the
/// matched c-function against φ_λ(t) e^{(ρ−s)t} at t = 25 where s = iλ is
/// real with ρ − s small enough for the limit to have settled.
pub fn series_checks(tol: &Tolerances) -> Vec<Check> {
    let series = max_of(groups().into_iter().flat_map(|g| {
        [0.5, 1.0, 2.0, 5.0].into_iter().map(move |l| {
            let exp = harish_chandra_expansion(&g, l.into())?;
            max_of([4.0, 5.0, 6.0, 8.0, 10.0, 15.0].into_iter().map(|t| {
                let direct = phi(&g, l.into(), t)?;
                Ok((exp.eval(t) - direct).norm() / direct.norm())
            }))
        })
    }));
    let limit = max_of(
        [((1, 0), 0.4), ((1, 0), 0.45), ((3, 1), 1.5), ((3, 1), 2.2)]
            .into_iter()
            .map(|((p, q), s)| {
                let g = RankOneGroup::new(p, q)?;
                let lam = SpectralParameter::from_ode_variable(C64::new(s, 0.0));
                let t = 25.0;
                let lim = phi(&g, lam, t)? * ((g.rho() - s) * t).exp();
                let c = c_function(&g, lam)?;
                Ok((c - lim).norm() / c.norm())
            }),
    );
    vec![
        checked("hc_series", tol.get("hc_series"), series),
        checked("c_limit", tol.get("c_limit"), limit),
    ]
}

/// The two bump pairs of the multiplicativity check.
pub fn multiplicativity_pairs() -> Vec<(RadialFunction, RadialFunction)> {
    let b = |c, w| RadialFunction::bump(c, w).expect("valid bump");
    vec![(b(1.0, 0.5), b(0.5, 0.3)), (b(0.8, 0.4), b(0.3, 0.25))]
}

/// Radial step of the sampled oracle convolution.
pub const CONVOLUTION_GRID_STEP: f64 = 0.02;

/// max relative |H(f*g) − Hf·Hg| at λ ∈ {0.5, 1, 2, 3, 5}, with f*g from
/// the direct quadrature oracle.
pub fn multiplicativity_error(group: &RankOneGroup, f: &RadialFunction, g: &RadialFunction) -> Result<f64> {
    let lambdas = [0.5, 1.0, 2.0, 3.0, 5.0];
    let reach = f.support(group.rho(), 1e-18).1 + g.support(group.rho(), 1e-18).1;
    let n = (reach / CONVOLUTION_GRID_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * CONVOLUTION_GRID_STEP).collect();
    let fg = convolve_oracle_sampled(group, f, g, &grid)?;
    let product = convolve_spectral(group, f, g, &lambdas)?;
    max_of(lambdas.iter().zip(product.values()).map(|(&l, p)| {
        let direct = spherical_transform_polar(group, &fg, l.into())?;
        Ok((direct - p).norm() / p.norm())
    }))
}

pub fn multiplicativity_checks(tol: &Tolerances) -> Vec<Check> {
    let g = RankOneGroup::sl2r();
    let worst = max_of(
        multiplicativity_pairs()
            .iter()
            .map(|(a, b)| multiplicativity_error(&g, a, b)),
    );
    vec![checked("multiplicativity", tol.get("multiplicativity"), worst)]
}

/// Spectral cutoff and spacing of the inversion round trip.
pub const ROUNDTRIP_LAMBDA_MAX: f64 = 200.0;
pub const ROUNDTRIP_LAMBDA_STEP: f64 = 0.05;
/// Spectral cutoff of the gauss(1) calibration.
pub const CALIBRATION_LAMBDA_MAX: f64 = 30.0;

/// sup over t ∈ [0, 3] (step 0.05) of |inverse(H f)(t) − f(t)|.
pub fn round_trip_error(group: &RankOneGroup, f: &RadialFunction, c_pl: f64) -> Result<f64> {
    let n = (ROUNDTRIP_LAMBDA_MAX / ROUNDTRIP_LAMBDA_STEP).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * ROUNDTRIP_LAMBDA_STEP).collect();
    let spectral = SpectralFunction::real_axis(TubeDomain::new(group, 0.0)?, grid, |l| {
        spherical_transform_polar(group, f, l)
    })?;
    let ts: Vec<f64> = (0..=60).map(|i| i as f64 * 0.05).collect();
    let back = inverse_transform_many(group, &spectral, &ts, c_pl)?;
    Ok(ts
        .iter()
        .zip(&back)
        .map(|(&t, v)| (v - f.value(t)).norm())
        .fold(0.0, f64::max))
}

/// Round trip of bump(1, 0.5) after calibrating C_pl on gauss(1), and the
/// transfer of the same constant to bump(0.5, 0.3) and gauss(0.8).
pub fn round_trip_checks(tol: &Tolerances) -> Vec<Check> {
    let g = RankOneGroup::sl2r();
    let c_pl = match calibrate_plancherel(&g, CALIBRATION_LAMBDA_MAX, ROUNDTRIP_LAMBDA_STEP) {
        Ok(c) => c,
        Err(_) => {
            return vec![
                Check::failed("roundtrip", tol.get("roundtrip")),
                Check::failed("plancherel_transfer", tol.get("plancherel_transfer")),
            ]
        }
    };
    let bump = RadialFunction::bump(1.0, 0.5).expect("valid bump");
    let primary = round_trip_error(&g, &bump, c_pl);
    let others = [
        RadialFunction::bump(0.5, 0.3).expect("valid bump"),
        RadialFunction::gauss(0.8).expect("valid gauss"),
    ];
    // relative to the sup of each function on [0, 3]
    let transfer = max_of(others.iter().map(|f| {
        let peak = (0..=60).map(|i| f.value(i as f64 * 0.05).abs()).fold(0.0, f64::max);
        Ok(round_trip_error(&g, f, c_pl)? / peak)
    }));
    vec![
        Check::report("plancherel_constant", c_pl),
        checked("roundtrip", tol.get("roundtrip"), primary),
        checked("plancherel_transfer", tol.get("plancherel_transfer"), transfer),
    ]
}

/// Holomorphy, Weyl symmetry and decay of H(bump(1, 0.5)) on the ε = 1 tube.
pub fn tube_checks(tol: &Tolerances) -> Vec<Check> {
    let g = RankOneGroup::sl2r();
    let f = RadialFunction::bump(1.0, 0.5).expect("valid bump");
    let audit = || -> Result<(f64, f64, f64)> {
        let tube = TubeDomain::for_schwartz_exponent(&g, 1.0)?;
        let (re, im) = tube_grid(&tube, -10.0, 10.0)?;
        let sf = SpectralFunction::sample(tube, re, im, |l| spherical_transform_polar(&g, &f, l))?;
        let (nx, ny) = (sf.re_axis().len(), sf.im_axis().len());
        let mut cr = 0.0f64;
        for i in 2..nx - 2 {
            for j in 2..ny - 2 {
                cr = cr.max(tube_holomorphy_defect_with(&sf, i, j, Stencil::Fourth)?);
            }
        }
        // the grid is symmetric, so −λ sits at the mirrored index
        let mut weyl = 0.0f64;
        for i in 0..nx {
            for j in 0..ny {
                weyl = weyl.max((sf.value(i, j) - sf.value(nx - 1 - i, ny - 1 - j)).norm());
            }
        }
        let ls: Vec<SpectralParameter> = (0..=800).map(|i| (i as f64 * 0.05).into()).collect();
        let hv = spherical_transform_polar_many(&g, &f, &ls)?;
        let weighted: Vec<f64> = ls
            .iter()
            .zip(&hv)
            .map(|(l, v)| v.norm() * (1.0 + l.value().re).powi(2))
            .collect();
        let head = weighted[..600].iter().copied().fold(0.0, f64::max);
        let tail = weighted[600..].iter().copied().fold(0.0, f64::max);
        Ok((cr, weyl, tail / head))
    };
    match audit() {
        Ok((cr, weyl, decay)) => vec![
            Check::at_most("tube_cr", cr, tol.get("tube_cr")),
            Check::at_most("tube_weyl", weyl, tol.get("tube_weyl")),
            Check::at_most("tube_decay", decay, tol.get("tube_decay")),
        ],
        Err(_) => ["tube_cr", "tube_weyl", "tube_decay"]
            .iter()
            .map(|id| Check::failed(id, tol.get(id)))
            .collect(),
    }
}

/// Spread of horocycle/polar ratios over three functions and five λ.
pub fn horocycle_checks(tol: &Tolerances) -> Vec<Check> {
    let g = RankOneGroup::sl2r();
    let fs = [
        RadialFunction::bump(1.0, 0.5).expect("valid bump"),
        RadialFunction::bump(0.5, 0.3).expect("valid bump"),
        RadialFunction::gauss(0.7).expect("valid gauss"),
    ];
    let ratios: Result<Vec<f64>> = fs
        .iter()
        .flat_map(|f| {
            [0.0, 0.5, 1.0, 2.0, 3.5].into_iter().map(move |l| {
                let h = spherical_transform_horocycle(&g, f, l.into())?;
                let p = spherical_transform_polar(&g, f, l.into())?;
                Ok((h / p).re)
            })
        })
        .collect();
    match ratios {
        Ok(r) => {
            let mean = r.iter().sum::<f64>() / r.len() as f64;
            let spread = r.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max) / mean.abs();
            vec![
                Check::report("horocycle_kappa_value", mean),
                Check::at_most("horocycle_kappa", spread, tol.get("horocycle_kappa")),
            ]
        }
        Err(_) => vec![Check::failed("horocycle_kappa", tol.get("horocycle_kappa"))],
    }
}

/// Idempotency and orthogonality of K-type projections for n ∈ {−2..2},
/// idempotency of sphericalization, H(f^#) = H(f) for a biinvariant f, and
/// the largest |H(f)| of the cos 2θ₁-modulated witness.
pub fn projection_checks(tol: &Tolerances) -> Vec<Check> {
    let bump = RadialFunction::bump(1.0, 0.5).expect("valid bump");
    let samples = PolarSamples::standard(|a, t, b| {
        C64::new(bump.value(t) * (1.0 + a.cos() + 0.5 * (2.0 * b).sin() + 0.25 * (a - b).cos()), 0.0)
    });
    let Ok(f) = samples else {
        return vec![Check::failed("ktype_idempotency", tol.get("ktype_idempotency"))];
    };
    let sharp = sphericalize_samples(&f);
    let idem_sharp = sharp.max_difference(&sphericalize_samples(&sharp));
    let mut idem = 0.0f64;
    let mut orth = 0.0f64;
    for side in [Side::Left, Side::Right] {
        for n in -2..=2 {
            let Ok(once) = ktype_project(&f, KTypeIndex(n), side) else {
                return vec![Check::failed("ktype_idempotency", tol.get("ktype_idempotency"))];
            };
            if let Ok(twice) = ktype_project(&once, KTypeIndex(n), side) {
                idem = idem.max(twice.max_difference(&once).unwrap_or(f64::NAN));
            }
            for m in (-2..=2).filter(|&m| m != n) {
                if let Ok(cross) = ktype_project(&once, KTypeIndex(m), side) {
                    orth = orth.max(cross.max_abs());
                }
            }
        }
    }
    let g = RankOneGroup::sl2r();
    let lambdas = [0.5, 1.0, 2.0, 3.0];
    let invariant = ModulatedRadial {
        profile: bump.clone(),
        offset: 1.0,
        amplitude: 0.0,
    };
    let ratio = decomposition_probe(&g, &invariant, &lambdas, 1.0).and_then(|r| {
        max_of(r.rows.iter().map(|row| match (row.ratio_re, row.ratio_im) {
            (Some(re), Some(im)) => Ok(C64::new(re - 1.0, im).norm()),
            _ => Err(Error::IllConditioned(0.0)),
        }))
    });
    let witness = ModulatedRadial {
        profile: bump,
        offset: 0.0,
        amplitude: 1.0,
    };
    let witness_max = decomposition_probe(&g, &witness, &lambdas, 1.0).map(|r| r.max_abs_hf);
    vec![
        checked("sphericalize_idempotency", tol.get("sphericalize_idempotency"), idem_sharp),
        Check::at_most("ktype_idempotency", idem, tol.get("ktype_idempotency")),
        Check::at_most("ktype_orthogonality", orth, tol.get("ktype_orthogonality")),
        checked("biinvariant_ratio", tol.get("biinvariant_ratio"), ratio),
        match witness_max {
            Ok(m) => Check::report("witness_max_abs_hf", m),
            Err(_) => Check::failed("witness_max_abs_hf", f64::INFINITY),
        },
    ]
}

/// f * φ_λ = Hf(λ) φ_λ and its Casimir eigen-residual, f = bump(1, 0.5),
/// λ = 0.8.
pub fn spherical_convolution_checks(tol: &Tolerances) -> Vec<Check> {
    let g = RankOneGroup::sl2r();
    let f = RadialFunction::bump(1.0, 0.5).expect("valid bump");
    let lam = SpectralParameter::real(0.8);
    let sc = match SphericalConvolution::new(&g, &f, lam) {
        Ok(sc) => sc,
        Err(_) => {
            return vec![
                Check::failed("g_proportionality", tol.get("g_proportionality")),
                Check::failed("g_casimir", tol.get("g_casimir")),
            ]
        }
    };
    let proportional = spherical_transform_polar(&g, &f, lam).and_then(|hf| {
        let ts = [0.5, 1.0, 2.0];
        let phis = phi_many(&g, lam, &ts)?;
        max_of(ts.iter().zip(&phis).map(|(&t, (p, _))| {
            let want = hf * p;
            Ok((sc.value(t)? - want).norm() / want.norm())
        }))
    });
    let ts: Vec<f64> = (0..=25).map(|i| 0.5 + 0.1 * i as f64).collect();
    let casimir = max_of(
        ts.par_iter()
            .map(|&t| Ok(casimir_residual(&g, lam, &sc, t)?.norm() / sc.value(t)?.norm()))
            .collect::<Vec<_>>(),
    );
    vec![
        checked("g_proportionality", tol.get("g_proportionality"), proportional),
        checked("g_casimir", tol.get("g_casimir"), casimir),
    ]
}

/// (f * g)(t) − (g * f)(t) for a bump pair; used by the convolution tests.
pub fn commutativity_defect(group: &RankOneGroup, f: &RadialFunction, g: &RadialFunction, t: f64) -> Result<f64> {
    Ok((convolve_oracle(group, f, g, t)? - convolve_oracle(group, g, f, t)?).abs())
}
