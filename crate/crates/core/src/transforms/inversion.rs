use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{spherical_transform_polar_many, SpectralFunction};
use crate::error::{Error, Result};
use crate::group_model::{RankOneGroup, SpectralParameter, TubeDomain};
use crate::radial::RadialFunction;
use crate::spherical::{c_pair, phi_many};

/// Spectral nodes below this are replaced by a quadratic extrapolation of
/// the integrand from the next three nodes.
pub const PLANCHEREL_EXCISION: f64 = 1e-3;

/// The last sample must be this small relative to the largest one.
const DECAY_TOL: f64 = 1e-4;

/// ∫₀^Λ F(λ) φ_λ(t) |c(λ)|⁻² dλ for each t, without the Plancherel constant.
///
/// F must be sampled on a uniform grid of the tempered axis starting at
/// λ = 0. Simpson's rule is used, closing with a 3/8 panel when the number
/// of intervals is odd.
pub fn wave_packet_integrals(group: &RankOneGroup, f: &SpectralFunction, ts: &[f64]) -> Result<Vec<C64>> {
    let samples: Vec<(f64, C64)> = f
        .tempered_samples()?
        .into_iter()
        .filter(|(l, _)| *l >= 0.0)
        .collect();
    if samples.len() < 5 || samples[0].0 != 0.0 {
        return Err(Error::InvalidParameters(
            "inversion needs at least 5 tempered samples starting at λ = 0".into(),
        ));
    }
    let h = samples[1].0 - samples[0].0;
    if samples
        .windows(2)
        .any(|w| ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.max(1.0))
    {
        return Err(Error::InvalidParameters(
            "inversion needs a uniform λ grid".into(),
        ));
    }
    let peak = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let last = samples.last().expect("non-empty").1.norm();
    if last > DECAY_TOL * peak {
        return Err(Error::NoDecay(last / peak));
    }
    let first_kept = samples
        .iter()
        .position(|(l, _)| *l >= PLANCHEREL_EXCISION)
        .expect("grid extends past the excision");
    if first_kept + 3 > samples.len() {
        return Err(Error::InvalidParameters(
            "too few samples beyond the excised neighbourhood of λ = 0".into(),
        ));
    }
    let mut rows = samples[first_kept..]
        .par_iter()
        .map(|&(l, v)| {
            let lambda = SpectralParameter::real(l);
            let (cp, cm) = c_pair(group, lambda)?;
            let density = 1.0 / (cp * cm).re;
            let phis = phi_many(group, lambda, ts)?;
            Ok(phis.into_iter().map(|(p, _)| v * p * density).collect::<Vec<C64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    // quadratic through the first three retained nodes
    let xs = [0, 1, 2].map(|k| samples[first_kept + k].0);
    let excised: Vec<Vec<C64>> = samples[..first_kept]
        .iter()
        .map(|&(l, _)| {
            let w = lagrange3(xs, l);
            (0..ts.len())
                .map(|j| rows[0][j] * w[0] + rows[1][j] * w[1] + rows[2][j] * w[2])
                .collect()
        })
        .collect();
    let mut all = excised;
    all.append(&mut rows);
    let weights = simpson_weights(all.len(), h);
    Ok((0..ts.len())
        .map(|j| all.iter().zip(&weights).map(|(r, &w)| r[j] * w).sum())
        .collect())
}

fn lagrange3(xs: [f64; 3], x: f64) -> [f64; 3] {
    let [a, b, c] = xs;
    [
        (x - b) * (x - c) / ((a - b) * (a - c)),
        (x - a) * (x - c) / ((b - a) * (b - c)),
        (x - a) * (x - b) / ((c - a) * (c - b)),
    ]
}

/// Composite Simpson weights for `n` equally spaced nodes.
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let intervals = n - 1;
    let mut w = vec![0.0; n];
    let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    for k in (0..simpson_end).step_by(2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if simpson_end < intervals {
        let k = simpson_end;
        for (i, c) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
            w[k + i] += 3.0 * h / 8.0 * c;
        }
    }
    w
}

/// C_pl · ∫₀^Λ F(λ) φ_λ(t) |c(λ)|⁻² dλ.
pub fn inverse_transform(group: &RankOneGroup, f: &SpectralFunction, t: f64, c_pl: f64) -> Result<C64> {
    Ok(inverse_transform_many(group, f, &[t], c_pl)?[0])
}

pub fn inverse_transform_many(
    group: &RankOneGroup,
    f: &SpectralFunction,
    ts: &[f64],
    c_pl: f64,
) -> Result<Vec<C64>> {
    Ok(wave_packet_integrals(group, f, ts)?
        .into_iter()
        .map(|v| v * c_pl)
        .collect())
}

/// Fits C_pl by least squares so that the wave packet of H(gauss(1))
/// reproduces gauss(1) on t ∈ [0, 3] (step 0.05). The spectral grid is
/// [0, `lambda_max`] with spacing `step`.
pub fn calibrate_plancherel(group: &RankOneGroup, lambda_max: f64, step: f64) -> Result<f64> {
    let reference = RadialFunction::gauss(1.0)?;
    let n = (lambda_max / step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let lambdas: Vec<SpectralParameter> = grid.iter().map(|&l| l.into()).collect();
    let values = spherical_transform_polar_many(group, &reference, &lambdas)?;
    let spectral = SpectralFunction::from_values(TubeDomain::new(group, 0.0)?, grid, vec![0.0], values)?;
    let ts: Vec<f64> = (0..=60).map(|i| i as f64 * 0.05).collect();
    let packets = wave_packet_integrals(group, &spectral, &ts)?;
    let (num, den) = ts.iter().zip(&packets).fold((0.0, 0.0), |(n, d), (&t, p)| {
        (n + reference.value(t) * p.re, d + p.re * p.re)
    });
    if !(den > 0.0) {
        return Err(Error::IllConditioned(den));
    }
    Ok(num / den)
}
