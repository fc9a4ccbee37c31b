//! Numerical records of integrals whose convergence or k-independence is in
//! question. Nothing here asserts an outcome; every function returns the
//! measured numbers.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::horocycle::{symmetric_transform, HyperbolicFunction, RadialAbout};
use crate::error::Result;
use crate::group_model::{hyperbolic_distance, jacobian, GroupElement, RankOneGroup, SpectralParameter, PANEL_WIDTH};
use crate::quadrature::{circle_nodes, gl32, CompositeRule};
use crate::radial::{CubicSpline, RadialFunction};
use crate::spherical::phi_many;

/// Tabulation step for φ_λ inside the truncated AN-integral.
const PHI_TABLE_STEP: f64 = 0.01;
/// Relative change between the two largest truncations counted as a limit.
pub const STABILITY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedValue {
    pub u_max: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

/// ∬_{|u|,|x| ≤ u_max} e^{(iλ+ρ)u} φ_λ(radial_part(a_u n_x)) du dx, the
/// AN-integral of φ_λ against the trivial K-type, truncated to a box.
pub fn hxi1_regularized(group: &RankOneGroup, lambda: SpectralParameter, u_max: f64) -> Result<TruncatedValue> {
    group.require_sl2r()?;
    // largest radius reached in the box: cosh t = cosh u + e^u x²/2
    let t_top = (u_max.cosh() + 0.5 * u_max.exp() * u_max * u_max).acosh() + 0.1;
    let n = (t_top / PHI_TABLE_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * PHI_TABLE_STEP).collect();
    let phis = phi_many(group, lambda, &grid)?;
    let re = CubicSpline::new(grid.clone(), phis.iter().map(|(p, _)| p.re).collect())?;
    let im = CubicSpline::new(grid, phis.iter().map(|(p, _)| p.im).collect())?;
    let il = C64::i() * lambda.value();
    let rho = group.rho();
    let rule = CompositeRule::new(-u_max, u_max, PANEL_WIDTH, gl32());
    let rows: Vec<C64> = rule
        .nodes
        .par_iter()
        .map(|&u| {
            let e = u.exp();
            let inner: C64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| {
                    let t = (u.cosh() + 0.5 * e * x * x).acosh();
                    C64::new(re.eval(t, 0), im.eval(t, 0)) * w
                })
                .sum();
            ((il + rho) * u).exp() * inner
        })
        .collect();
    let value: C64 = rows.iter().zip(&rule.weights).map(|(v, &w)| v * w).sum();
    Ok(TruncatedValue {
        u_max,
        re: value.re,
        im: value.im,
        abs: value.norm(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSweep {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub values: Vec<TruncatedValue>,
    /// |value| strictly increases along the sweep.
    pub monotone_growth: bool,
    /// The last two truncations agree to [`STABILITY_TOL`] relative.
    pub stabilized: bool,
    /// Neither stabilized nor bounded: the sweep gives no limit.
    pub divergent: bool,
}

/// [`hxi1_regularized`] over increasing truncations.
pub fn hxi1_sweep(group: &RankOneGroup, lambda: SpectralParameter, u_maxes: &[f64]) -> Result<TruncationSweep> {
    let values = u_maxes
        .iter()
        .map(|&u| hxi1_regularized(group, lambda, u))
        .collect::<Result<Vec<_>>>()?;
    let monotone_growth = values.len() > 1 && values.windows(2).all(|w| w[1].abs > w[0].abs);
    let stabilized = match values.as_slice() {
        [.., a, b] => {
            let d = C64::new(b.re - a.re, b.im - a.im).norm();
            d <= STABILITY_TOL * b.abs.max(f64::MIN_POSITIVE)
        }
        _ => false,
    };
    Ok(TruncationSweep {
        lambda_re: lambda.value().re,
        lambda_im: lambda.value().im,
        values,
        monotone_growth,
        stabilized,
        divergent: !stabilized,
    })
}

/// f(k_{θ₁} a_t k_{θ₂}) = profile(t) · (offset + amplitude · cos 2θ₁).
///
/// On SL(2,R) the Cartan angle θ₁ is only defined modulo π (k_π = −1 is
/// central), so the modulation uses the lowest frequency that is.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulatedRadial {
    pub profile: RadialFunction,
    pub offset: f64,
    pub amplitude: f64,
}

impl ModulatedRadial {
    pub fn value(&self, theta1: f64, t: f64, _theta2: f64) -> f64 {
        self.profile.value(t) * (self.offset + self.amplitude * (2.0 * theta1).cos())
    }

    pub fn at(&self, g: &GroupElement) -> f64 {
        let (t1, t, t2) = g.polar();
        self.value(t1, t, t2)
    }
}

/// Angular nodes of the K × K quadrature in the decomposition probe.
pub const PROBE_ANGLE_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionRow {
    pub lambda: f64,
    pub hf_re: f64,
    pub hf_im: f64,
    pub hf_sharp_re: f64,
    pub hf_sharp_im: f64,
    /// H(f)/H(f^#), absent when |H(f^#)| is below 1e-14.
    pub ratio_re: Option<f64>,
    pub ratio_im: Option<f64>,
    pub hxi1: TruncatedValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub function: String,
    pub offset: f64,
    pub amplitude: f64,
    pub angle_nodes: usize,
    pub hxi1_u_max: f64,
    pub rows: Vec<DecompositionRow>,
    pub max_abs_hf: f64,
}

/// Scalar H(f)(λ) = ∫_G f φ_{−λ} dx by quadrature over K × A⁺ × K, next to
/// H(f^#)(λ) with f^# formed by averaging the same angular grid, and the
/// truncated AN-integral of φ_λ at `hxi1_u_max`.
pub fn decomposition_probe(
    group: &RankOneGroup,
    f: &ModulatedRadial,
    lambdas: &[f64],
    hxi1_u_max: f64,
) -> Result<DecompositionReport> {
    group.require_sl2r()?;
    let (lo, hi) = f.profile.support(group.rho(), 1e-18);
    let rule = CompositeRule::new(lo, hi.max(lo + PANEL_WIDTH), PANEL_WIDTH, gl32());
    let angles = circle_nodes(PROBE_ANGLE_NODES);
    let k_weight = 1.0 / (angles.len() * angles.len()) as f64;
    let rows = lambdas
        .par_iter()
        .map(|&l| {
            let lambda = SpectralParameter::real(l);
            let phis = phi_many(group, lambda.weyl(), &rule.nodes)?;
            let mut hf = C64::new(0.0, 0.0);
            let mut hs = C64::new(0.0, 0.0);
            for ((&t, &w), (ph, _)) in rule.nodes.iter().zip(&rule.weights).zip(&phis) {
                let radial = ph * (jacobian(group, t) * w);
                let mut full = 0.0;
                for &a in &angles {
                    for &b in &angles {
                        full += f.value(a, t, b);
                    }
                }
                let average = full * k_weight;
                hf += radial * average;
                hs += radial * sharp_value(f, &angles, t);
            }
            let ratio = (hs.norm() > 1e-14).then(|| hf / hs);
            Ok(DecompositionRow {
                lambda: l,
                hf_re: hf.re,
                hf_im: hf.im,
                hf_sharp_re: hs.re,
                hf_sharp_im: hs.im,
                ratio_re: ratio.map(|r| r.re),
                ratio_im: ratio.map(|r| r.im),
                hxi1: hxi1_regularized(group, lambda, hxi1_u_max)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_abs_hf = rows
        .iter()
        .map(|r| r.hf_re.hypot(r.hf_im))
        .fold(0.0, f64::max);
    Ok(DecompositionReport {
        function: f.profile.to_string(),
        offset: f.offset,
        amplitude: f.amplitude,
        angle_nodes: angles.len(),
        hxi1_u_max,
        rows,
        max_abs_hf,
    })
}

/// f^#(a_t) = ∫_{K×K} f(k₁ a_t k₂), evaluated through group multiplication
/// so that the polar decomposition is exercised rather than assumed.
fn sharp_value(f: &ModulatedRadial, angles: &[f64], t: f64) -> f64 {
    let at = GroupElement::a(t);
    let mut s = 0.0;
    for &a in angles {
        for &b in angles {
            s += f.at(&(GroupElement::rotation(a) * at * GroupElement::rotation(b)));
        }
    }
    s / (angles.len() * angles.len()) as f64
}

/// The left K-average z ↦ ∫_K f(k·z) dk, tabulated as a profile about i.
pub fn sphericalize_hyperbolic<H: HyperbolicFunction + ?Sized>(
    f: &H,
    angle_nodes: usize,
    step: f64,
) -> Result<RadialAbout> {
    let (center, radius) = f.disc();
    let reach = hyperbolic_distance(center, C64::i()) + radius;
    let n = (reach / step).ceil() as usize + 1;
    let angles = circle_nodes(angle_nodes);
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&d| {
            let z = C64::new(0.0, d.exp());
            angles
                .iter()
                .map(|&a| f.value(GroupElement::rotation(a).act(z)))
                .sum::<f64>()
                / angles.len() as f64
        })
        .collect();
    RadialAbout::new(C64::i(), RadialFunction::Sampled(CubicSpline::new(grid, values)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSweep {
    pub witness: String,
    pub k_angles: Vec<f64>,
    pub values_re: Vec<f64>,
    pub values_im: Vec<f64>,
    pub mean_re: f64,
    pub mean_im: f64,
    /// max over the k-grid of |value − mean|.
    pub variation: f64,
}

/// Symmetric transform of `f` across rotations by each angle in `k_grid`.
pub fn k_independence_probe<H: HyperbolicFunction + ?Sized>(
    group: &RankOneGroup,
    witness: &str,
    f: &H,
    k_grid: &[f64],
    lambda: SpectralParameter,
) -> Result<KSweep> {
    let values = k_grid
        .iter()
        .map(|&k| symmetric_transform(group, f, k, lambda))
        .collect::<Result<Vec<_>>>()?;
    let mean = values.iter().sum::<C64>() / values.len().max(1) as f64;
    let variation = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    Ok(KSweep {
        witness: witness.to_string(),
        k_angles: k_grid.to_vec(),
        values_re: values.iter().map(|v| v.re).collect(),
        values_im: values.iter().map(|v| v.im).collect(),
        mean_re: mean.re,
        mean_im: mean.im,
        variation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KIndependenceReport {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub sweeps: Vec<KSweep>,
}

/// Evenly spaced rotation angles in [0, π); rotation by π acts trivially
/// on the upper half-plane.
pub fn default_k_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| PI * j as f64 / n as f64).collect()
}

/// The three standard witnesses: bump(1, 0.5) about i, bump(0, 0.6) about
/// 0.5 + 1.2i, and the K-average of the latter.
pub fn k_independence_witnesses(group: &RankOneGroup, lambda: SpectralParameter, k_grid: &[f64]) -> Result<KIndependenceReport> {
    let invariant = RadialAbout::new(C64::i(), RadialFunction::bump(1.0, 0.5)?)?;
    let displaced = RadialAbout::new(C64::new(0.5, 1.2), RadialFunction::bump(0.0, 0.6)?)?;
    let averaged = sphericalize_hyperbolic(&displaced, 512, 0.01)?;
    let sweeps = vec![
        k_independence_probe(group, "bump(1,0.5) about i", &invariant, k_grid, lambda)?,
        k_independence_probe(group, "bump(0,0.6) about 0.5+1.2i", &displaced, k_grid, lambda)?,
        k_independence_probe(group, "K-average of the displaced bump", &averaged, k_grid, lambda)?,
    ];
    Ok(KIndependenceReport {
        lambda_re: lambda.value().re,
        lambda_im: lambda.value().im,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulated_function_reads_polar_angle() {
        let f = ModulatedRadial {
            profile: RadialFunction::bump(1.0, 0.5).unwrap(),
            offset: 0.0,
            amplitude: 1.0,
        };
        let g = GroupElement::from_polar(0.4, 1.1, -0.3);
        assert!((f.at(&g) - f.value(0.4, 1.1, -0.3)).abs() < 1e-10);
    }

    #[test]
    fn truncated_integral_at_small_box_is_finite() {
        let g = RankOneGroup::sl2r();
        let v = hxi1_regularized(&g, 1.0.into(), 1.0).unwrap();
        assert!(v.abs.is_finite() && v.abs > 0.0);
    }

    #[test]
    fn biinvariant_input_gives_unit_ratio() {
        let g = RankOneGroup::sl2r();
        let f = ModulatedRadial {
            profile: RadialFunction::bump(1.0, 0.5).unwrap(),
            offset: 1.0,
            amplitude: 0.0,
        };
        let r = decomposition_probe(&g, &f, &[0.5, 2.0], 1.0).unwrap();
        for row in &r.rows {
            assert!((row.ratio_re.unwrap() - 1.0).abs() < 1e-6);
        }
    }
}
