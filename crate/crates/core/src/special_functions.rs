//! Gauss hypergeometric function on the negative real axis, Pochhammer
//! symbols and the complex log-gamma function.
//!
//! `gauss_2f1` picks one of three evaluation paths:
//!
//! * the defining power series for |z| <= 0.5;
//! * the Pfaff transformation `F(a,b;c;z) = (1-z)^{-a} F(a,c-b;c;z/(z-1))`,
//!   which maps z <= 0 into [0, 1), when the transformed argument is <= 0.75;
//! * analytic continuation of the hypergeometric ODE by Taylor stepping along
//!   the negative axis, for everything else.
//!
//! A series path is only accepted when its largest term is within a factor
//! 1e3 of the final sum. With |a|, |b| large (spherical functions far out on
//! the tempered axis) the alternating terms cancel catastrophically and the
//! continuation path takes over.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative size of the last retained series term.
pub const SERIES_REL_TOL: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 10_000;
/// Largest acceptable ratio between the biggest term and the series sum.
const MAX_CANCELLATION: f64 = 1e3;
/// Argument bound for the direct series path.
const DIRECT_RADIUS: f64 = 0.5;
/// Bound on the transformed argument for the Pfaff path.
const PFAFF_RADIUS: f64 = 0.75;

/// Rising factorial a(a+1)...(a+k-1); the empty product is 1.
pub fn pochhammer(a: C64, k: usize) -> C64 {
    (0..k).fold(C64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

/// Parameters of a Gauss hypergeometric evaluation. `c` is real and not a
/// nonpositive integer; `z` lies on the real axis at or below 0.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomParams {
    pub a: C64,
    pub b: C64,
    pub c: f64,
    pub z: f64,
}

impl HypergeomParams {
    pub fn new(a: C64, b: C64, c: f64, z: f64) -> Result<Self> {
        validate_c(c)?;
        if !z.is_finite() || z > DIRECT_RADIUS {
            return Err(Error::InvalidParameters(format!(
                "z = {z} outside the supported range (-inf, {DIRECT_RADIUS}]"
            )));
        }
        Ok(Self { a, b, c, z })
    }
}

fn validate_c(c: f64) -> Result<()> {
    if !c.is_finite() || (c <= 0.0 && c.fract() == 0.0) {
        return Err(Error::InvalidParameters(format!(
            "c = {c} must not be zero or a negative integer"
        )));
    }
    Ok(())
}

/// Which route `gauss_2f1_traced` used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Trivial,
    DirectSeries,
    Pfaff,
    Continuation,
}

/// Analytic continuation of the Gauss series to the parameters' `z`.
pub fn gauss_2f1(params: &HypergeomParams) -> Result<C64> {
    gauss_2f1_traced(params).map(|(v, _)| v)
}

/// Same as [`gauss_2f1`], also reporting the evaluation path taken.
pub fn gauss_2f1_traced(params: &HypergeomParams) -> Result<(C64, EvalPath)> {
    let HypergeomParams { a, b, c, z } = *params;
    validate_c(c)?;
    if z == 0.0 {
        return Ok((C64::new(1.0, 0.0), EvalPath::Trivial));
    }
    if z.abs() <= DIRECT_RADIUS {
        if let Ok(s) = series_sum(a, b, c, z) {
            if s.well_conditioned() {
                return Ok((s.value, EvalPath::DirectSeries));
            }
        }
    } else if z < 0.0 && z / (z - 1.0) <= PFAFF_RADIUS {
        let w = z / (z - 1.0);
        let prefactor = (-a * (1.0 - z).ln()).exp();
        if let Ok(s) = series_sum(a, c - b, c, w) {
            if s.well_conditioned() {
                return Ok((prefactor * s.value, EvalPath::Pfaff));
            }
        }
    }
    if z > 0.0 {
        return Err(Error::InvalidParameters(format!(
            "positive z = {z} with ill-conditioned series"
        )));
    }
    let v = Continuation::new(a, b, c)?.evaluate(z)?.0;
    Ok((v, EvalPath::Continuation))
}

/// Direct summation of the defining series, regardless of conditioning.
pub fn gauss_2f1_series(a: C64, b: C64, c: f64, z: f64) -> Result<C64> {
    validate_c(c)?;
    if z.abs() >= 1.0 {
        return Err(Error::InvalidParameters(format!(
            "series diverges at |z| = {}",
            z.abs()
        )));
    }
    series_sum(a, b, c, z).map(|s| s.value)
}

/// Pfaff-transformed evaluation, valid for z < 1/2 (transformed argument
/// below 1/3 when |z| <= 0.5).
pub fn gauss_2f1_pfaff(a: C64, b: C64, c: f64, z: f64) -> Result<C64> {
    validate_c(c)?;
    if z >= 0.5 {
        return Err(Error::InvalidParameters(format!(
            "Pfaff path needs z < 1/2, got {z}"
        )));
    }
    let w = z / (z - 1.0);
    let prefactor = (-a * (1.0 - z).ln()).exp();
    series_sum(a, c - b, c, w).map(|s| prefactor * s.value)
}

/// d/dz F(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z).
pub fn gauss_2f1_dz(params: &HypergeomParams) -> Result<C64> {
    let HypergeomParams { a, b, c, z } = *params;
    let shifted = HypergeomParams::new(a + 1.0, b + 1.0, c + 1.0, z)?;
    Ok(a * b / c * gauss_2f1(&shifted)?)
}

/// d²/dz² F(a,b;c;z) = (a(a+1)b(b+1)/(c(c+1))) F(a+2,b+2;c+2;z).
pub fn gauss_2f1_dz2(params: &HypergeomParams) -> Result<C64> {
    let HypergeomParams { a, b, c, z } = *params;
    let shifted = HypergeomParams::new(a + 2.0, b + 2.0, c + 2.0, z)?;
    Ok(a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) * gauss_2f1(&shifted)?)
}

struct SeriesSum {
    value: C64,
    /// Σ k t_k, i.e. z F'(z).
    z_derivative: C64,
    max_term: f64,
}

impl SeriesSum {
    fn well_conditioned(&self) -> bool {
        self.max_term <= MAX_CANCELLATION * self.value.norm().max(f64::MIN_POSITIVE)
    }
}

fn series_sum(a: C64, b: C64, c: f64, z: f64) -> Result<SeriesSum> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut zsum = C64::new(0.0, 0.0);
    let mut max_term = 1.0f64;
    let mut small_run = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        zsum += term * (kf + 1.0);
        let mag = term.norm();
        max_term = max_term.max(mag);
        if mag == 0.0 {
            // terminating (polynomial) series
            return Ok(SeriesSum {
                value: sum,
                z_derivative: zsum,
                max_term,
            });
        }
        if mag <= SERIES_REL_TOL * sum.norm() && mag * (kf + 1.0) <= SERIES_REL_TOL * zsum.norm() {
            small_run += 1;
            if small_run >= 2 {
                return Ok(SeriesSum {
                    value: sum,
                    z_derivative: zsum,
                    max_term,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// Phase advance allowed per Taylor step, in radians of the local
/// oscillation.
const PHASE_PER_STEP: f64 = 0.6;
/// Step size as a fraction of the distance to the singular point z = 0.
const RADIUS_FRACTION: f64 = 0.35;
const TAYLOR_MAX_TERMS: usize = 400;

/// Taylor-stepping solver for
/// `z(1-z) y'' + (c - (a+b+1) z) y' - ab y = 0`
/// started from the power series near the origin.
#[derive(Debug, Clone, Copy)]
pub struct Continuation {
    a: C64,
    b: C64,
    c: f64,
    ab: C64,
    wave: f64,
}

impl Continuation {
    pub fn new(a: C64, b: C64, c: f64) -> Result<Self> {
        validate_c(c)?;
        let ab = a * b;
        Ok(Self {
            a,
            b,
            c,
            ab,
            wave: ab.norm().sqrt(),
        })
    }

    /// Value and dF/dz at a single nonpositive `z`.
    pub fn evaluate(&self, z: f64) -> Result<(C64, C64)> {
        Ok(self.evaluate_many(&[z])?[0])
    }

    /// Values and dF/dz at every requested point (all ≤ 0, any order),
    /// computed in a single outward sweep.
    pub fn evaluate_many(&self, zs: &[f64]) -> Result<Vec<(C64, C64)>> {
        let mut order: Vec<usize> = (0..zs.len()).collect();
        for &z in zs {
            if !(z <= 0.0) || !z.is_finite() {
                return Err(Error::InvalidParameters(format!(
                    "continuation needs finite z <= 0, got {z}"
                )));
            }
        }
        order.sort_by(|&i, &j| zs[j].total_cmp(&zs[i]));
        let mut out = vec![(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); zs.len()];

        let z_start = -(0.25f64).min(0.5 / (1.0 + self.ab.norm()));
        let mut state: Option<(f64, C64, C64)> = None;
        for idx in order {
            let z = zs[idx];
            if z >= z_start {
                out[idx] = self.near_origin(z)?;
                continue;
            }
            let (mut z0, mut y, mut dy) = match state {
                Some(s) => s,
                None => {
                    let (y, dy) = self.near_origin(z_start)?;
                    (z_start, y, dy)
                }
            };
            while z0 > z {
                let step = self.max_step(z0).min(z0 - z);
                let z1 = if z0 - step <= z { z } else { z0 - step };
                let (y1, dy1) = self.taylor_step(z0, z1 - z0, y, dy)?;
                z0 = z1;
                y = y1;
                dy = dy1;
            }
            state = Some((z0, y, dy));
            out[idx] = (y, dy);
        }
        Ok(out)
    }

    fn near_origin(&self, z: f64) -> Result<(C64, C64)> {
        if z == 0.0 {
            return Ok((C64::new(1.0, 0.0), self.ab / self.c));
        }
        let s = series_sum(self.a, self.b, self.c, z)?;
        Ok((s.value, s.z_derivative / z))
    }

    fn max_step(&self, z0: f64) -> f64 {
        let r = z0.abs();
        let kappa = self.wave / (r * (1.0 + r)).sqrt();
        (RADIUS_FRACTION * r).min(PHASE_PER_STEP / kappa.max(1e-300))
    }

    /// Advances (y, y') from `z0` to `z0 + h` with the local Taylor series.
    fn taylor_step(&self, z0: f64, h: f64, y: C64, dy: C64) -> Result<(C64, C64)> {
        let p0 = z0 * (1.0 - z0);
        let p1 = 1.0 - 2.0 * z0;
        let q0 = self.c - (self.a + self.b + 1.0) * z0;
        let q1 = -(self.a + self.b + 1.0);

        // Scaled coefficients Y_n = y_n h^n.
        let mut prev = y;
        let mut cur = dy * h;
        let mut sum = prev + cur;
        let mut dsum = cur;
        let scale = prev.norm().max(cur.norm());
        let mut small_run = 0;
        for n in 0..TAYLOR_MAX_TERMS {
            let nf = n as f64;
            let next = -((p1 * nf * (nf + 1.0) + q0 * (nf + 1.0)) * cur * h
                + (q1 * nf - nf * (nf - 1.0) - self.ab) * prev * (h * h))
                / (p0 * (nf + 1.0) * (nf + 2.0));
            sum += next;
            dsum += next * (nf + 2.0);
            let mag = next.norm();
            let threshold = 1e-17 * sum.norm().max(scale).max(dsum.norm());
            if mag * (nf + 2.0) <= threshold {
                small_run += 1;
                if small_run >= 2 {
                    return Ok((sum, dsum / h));
                }
            } else {
                small_run = 0;
            }
            prev = cur;
            cur = next;
        }
        Err(Error::NonConvergence {
            terms: TAYLOR_MAX_TERMS,
        })
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch-free log Γ(z) (Lanczos, g = 7) with reflection for
/// Re z < 1/2. Only `exp(ln_gamma(z))` is meaningful near branch cuts.
pub fn ln_gamma(z: C64) -> C64 {
    use std::f64::consts::PI;
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    C64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

/// Γ(z) for complex z away from the poles.
pub fn gamma(z: C64) -> C64 {
    ln_gamma(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(c(3.7), 0), c(1.0));
        assert_eq!(pochhammer(c(1.0), 4), c(24.0));
        assert!((pochhammer(c(2.5), 3) - c(39.375)).norm() < 1e-12);
    }

    #[test]
    fn trivial_argument() {
        let p = HypergeomParams::new(C64::new(0.3, 2.0), c(-1.2), 1.5, 0.0).unwrap();
        assert_eq!(gauss_2f1_traced(&p).unwrap(), (c(1.0), EvalPath::Trivial));
    }

    #[test]
    fn rejects_nonpositive_integer_c() {
        assert!(HypergeomParams::new(c(1.0), c(1.0), 0.0, -0.2).is_err());
        assert!(HypergeomParams::new(c(1.0), c(1.0), -3.0, -0.2).is_err());
        assert!(HypergeomParams::new(c(1.0), c(1.0), -2.5, -0.2).is_ok());
        assert!(gauss_2f1_series(c(1.0), c(1.0), -1.0, -0.2).is_err());
    }

    #[test]
    fn log_closed_form_on_every_path() {
        // F(1,1;2;z) = -ln(1-z)/z
        for z in [-0.3, -1.0, -2.0, -10.0, -1e4, -1e12] {
            let p = HypergeomParams::new(c(1.0), c(1.0), 2.0, z).unwrap();
            let v = gauss_2f1(&p).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!((v.re - exact).abs() <= 1e-12 * exact.abs(), "z={z} {v} {exact}");
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn path_selection() {
        let path = |z: f64| {
            gauss_2f1_traced(&HypergeomParams::new(c(0.5), c(0.5), 1.0, z).unwrap())
                .unwrap()
                .1
        };
        assert_eq!(path(-0.4), EvalPath::DirectSeries);
        assert_eq!(path(-2.0), EvalPath::Pfaff);
        assert_eq!(path(-50.0), EvalPath::Continuation);
    }

    #[test]
    fn large_parameters_fall_back_to_continuation() {
        // a, b = 1/4 ± 20i: the direct series at z = -0.4 cancels badly.
        let a = C64::new(0.25, 20.0);
        let b = C64::new(0.25, -20.0);
        let p = HypergeomParams::new(a, b, 1.0, -0.4).unwrap();
        let (v, path) = gauss_2f1_traced(&p).unwrap();
        assert_eq!(path, EvalPath::Continuation);
        // symmetric parameters give a real value
        assert!(v.im.abs() < 1e-12 * v.norm().max(1.0));
    }

    #[test]
    fn continuation_matches_pfaff_at_moderate_argument() {
        let a = C64::new(0.7, 0.4);
        let b = C64::new(-0.3, 1.1);
        for z in [-0.6, -1.2, -2.5] {
            let cont = Continuation::new(a, b, 1.3).unwrap().evaluate(z).unwrap().0;
            let pf = gauss_2f1_pfaff(a, b, 1.3, z).unwrap();
            assert!((cont - pf).norm() < 1e-12 * pf.norm(), "z={z}");
        }
    }

    #[test]
    fn continuation_many_matches_single() {
        let cont = Continuation::new(C64::new(0.25, 3.0), C64::new(0.25, -3.0), 1.0).unwrap();
        let zs = [-5.0, -0.01, -100.0, -0.7];
        let many = cont.evaluate_many(&zs).unwrap();
        for (z, (v, d)) in zs.iter().zip(many) {
            let (v1, d1) = cont.evaluate(*z).unwrap();
            assert!((v - v1).norm() < 1e-13 * v1.norm().max(1e-3));
            assert!((d - d1).norm() < 1e-12 * d1.norm().max(1e-3));
        }
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(c(5.0)) - c(24.0)).norm() < 1e-12);
        let half = gamma(c(0.5));
        assert!((half.re - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.3;
        let g = gamma(C64::new(0.0, y));
        let exact = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
        assert!((g.norm_sqr() - exact).abs() < 1e-13 * exact);
        // reflection branch
        assert!((gamma(c(-0.5)).re + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
