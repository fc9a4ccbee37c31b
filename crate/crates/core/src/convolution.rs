//! Convolution on SL(2,R), K-type projections and convolution against
//! spherical functions.
//!
//! For K-biinvariant f and g,
//!
//! ```text
//! (f * g)(a_t) = ∫₀^∞ f(s) J(s) (1/2π) ∫₀^{2π} g(radial_part(a_s k_θ a_t)) dθ ds,
//! ```
//!
//! and the inner integrand depends on θ only through cos 2θ, so it is folded
//! onto [0, π].

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_model::{jacobian, radial_part, GroupElement, RankOneGroup, SpectralParameter, TubeDomain, PANEL_WIDTH};
use crate::quadrature::{circle_nodes, gl32, CompositeRule};
use crate::radial::RadialFunction;
use crate::special_functions::Continuation;
use crate::spherical::{hypergeom_args, RadialJet};
use crate::transforms::{spherical_transform_polar_many, SpectralFunction};

/// Gauss–Legendre panels covering θ ∈ [0, π].
pub const THETA_PANELS: usize = 8;

/// Panels on θ ∈ [0, π/2] for the oracle, whose integrand g(d) can be a
/// narrow bump in θ.
const ORACLE_THETA_PANELS: usize = 16;

/// A character k_θ ↦ e^{−inθ} of SO(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KTypeIndex(pub i32);

impl KTypeIndex {
    pub const TRIVIAL: Self = Self(0);

    /// ξ_n(k_θ) = e^{−inθ}.
    pub fn xi(self, theta: f64) -> C64 {
        C64::from_polar(1.0, -(self.0 as f64) * theta)
    }

    /// (ξ_n * ξ_m)(k_θ) = (1/2π) ∫ ξ_n(k_φ) ξ_m(k_{θ−φ}) dφ on an `nodes`-point
    /// periodic trapezoid rule.
    pub fn convolve_characters(self, other: Self, theta: f64, nodes: usize) -> C64 {
        let phis = circle_nodes(nodes);
        phis.iter().map(|&p| self.xi(p) * other.xi(theta - p)).sum::<C64>() / nodes as f64
    }
}

/// Which Euler angle a K-type projection acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// θ₁ in k_{θ₁} a_t k_{θ₂}, i.e. ξ_n * f.
    Left,
    /// θ₂, i.e. f * ξ_n.
    Right,
}

fn theta_rule() -> CompositeRule {
    CompositeRule::new(0.0, PI, PI / THETA_PANELS as f64, gl32())
}

fn oracle_theta_rule() -> CompositeRule {
    let half = 0.5 * PI;
    CompositeRule::new(0.0, half, half / ORACLE_THETA_PANELS as f64, gl32())
}

fn s_rule(f: &RadialFunction, growth: f64) -> Option<CompositeRule> {
    let (lo, hi) = f.support(growth, 1e-18);
    (hi > lo).then(|| CompositeRule::new(lo, hi, PANEL_WIDTH, gl32()))
}

/// (f * g)(a_t) by direct quadrature over (s, θ), with radial parts taken
/// from the matrix product a_s k_θ a_t.
pub fn convolve_oracle(group: &RankOneGroup, f: &RadialFunction, g: &RadialFunction, t: f64) -> Result<f64> {
    group.require_sl2r()?;
    let Some(rule) = s_rule(f, group.rho()) else {
        return Ok(0.0);
    };
    // cos 2θ is symmetric about π/2
    let theta = oracle_theta_rule();
    let at = GroupElement::a(t);
    let mut total = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fs = f.value(s);
        if fs == 0.0 {
            continue;
        }
        let left = GroupElement::a(s);
        let mut inner = 0.0;
        for (&th, &wt) in theta.nodes.iter().zip(&theta.weights) {
            let d = radial_part(&(left * GroupElement::rotation(th) * at))?;
            inner += wt * g.value(d);
        }
        total += 2.0 * w * fs * jacobian(group, s) * inner / PI;
    }
    Ok(total)
}

/// [`convolve_oracle`] on a grid of radii, as a sampled radial function.
pub fn convolve_oracle_sampled(
    group: &RankOneGroup,
    f: &RadialFunction,
    g: &RadialFunction,
    grid: &[f64],
) -> Result<RadialFunction> {
    let values = grid
        .par_iter()
        .map(|&t| convolve_oracle(group, f, g, t))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = grid.iter().copied().zip(values).collect();
    RadialFunction::sampled(&pts)
}

/// Hf · Hg on the given tempered grid.
pub fn convolve_spectral(
    group: &RankOneGroup,
    f: &RadialFunction,
    g: &RadialFunction,
    lambdas: &[f64],
) -> Result<SpectralFunction> {
    let ls: Vec<SpectralParameter> = lambdas.iter().map(|&l| l.into()).collect();
    let hf = spherical_transform_polar_many(group, f, &ls)?;
    let hg = spherical_transform_polar_many(group, g, &ls)?;
    let values = hf.iter().zip(&hg).map(|(a, b)| a * b).collect();
    SpectralFunction::from_values(TubeDomain::new(group, 0.0)?, lambdas.to_vec(), vec![0.0], values)
}

/// f * φ_λ for a compactly supported radial f, with t-derivatives.
///
/// φ_λ is written as F(a, b; c; z) with z = 1 − C², C = cosh(radial part)
/// = ‖a_s k_θ a_t‖²/2. Differentiating C in t uses
/// C = cosh s cosh t + sinh s sinh t cos 2θ, and F_z, F_zz come from the
/// shifted function F(a+1, b+1; c+1; z).
#[derive(Debug, Clone)]
pub struct SphericalConvolution {
    pub group: RankOneGroup,
    pub lambda: SpectralParameter,
    f: RadialFunction,
    base: Continuation,
    shifted: Continuation,
    shift_factor: C64,
}

impl SphericalConvolution {
    pub fn new(group: &RankOneGroup, f: &RadialFunction, lambda: SpectralParameter) -> Result<Self> {
        group.require_sl2r()?;
        if !f.is_compactly_supported() {
            return Err(Error::InvalidParameters(
                "convolution against φ_λ needs a compactly supported function".into(),
            ));
        }
        let (a, b, c) = hypergeom_args(group, lambda);
        Ok(Self {
            group: *group,
            lambda,
            f: f.clone(),
            base: Continuation::new(a, b, c)?,
            shifted: Continuation::new(a + 1.0, b + 1.0, c + 1.0)?,
            shift_factor: a * b / c,
        })
    }

    pub fn value(&self, t: f64) -> Result<C64> {
        Ok(self.jet(t)?[0])
    }
}

impl RadialJet for SphericalConvolution {
    fn jet(&self, t: f64) -> Result<[C64; 3]> {
        let Some(rule) = s_rule(&self.f, self.group.rho()) else {
            return Ok([C64::new(0.0, 0.0); 3]);
        };
        let theta = theta_rule();
        let at = GroupElement::a(t);
        let (ch_t, sh_t) = (t.cosh(), t.sinh());
        let mut zs = Vec::with_capacity(rule.len() * theta.len());
        let mut parts = Vec::with_capacity(zs.capacity());
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            let weight = w * self.f.value(s) * jacobian(&self.group, s) / PI;
            let left = GroupElement::a(s);
            for (&th, &wt) in theta.nodes.iter().zip(&theta.weights) {
                let m = (left * GroupElement::rotation(th) * at).matrix();
                let c = 0.5 * m.iter().flatten().map(|x| x * x).sum::<f64>();
                let c_t = s.cosh() * sh_t + s.sinh() * ch_t * (2.0 * th).cos();
                zs.push((1.0 - c * c).min(0.0));
                parts.push((weight * wt, c, c_t));
            }
        }
        let base = self.base.evaluate_many(&zs)?;
        let shifted = self.shifted.evaluate_many(&zs)?;
        let mut out = [C64::new(0.0, 0.0); 3];
        for (((wt, c, c_t), (f0, _)), (g, g_z)) in parts.into_iter().zip(base).zip(shifted) {
            let fz = g * self.shift_factor;
            let fzz = g_z * self.shift_factor;
            let z_t = -2.0 * c * c_t;
            let z_tt = -2.0 * (c_t * c_t + c * c);
            out[0] += f0 * wt;
            out[1] += fz * (z_t * wt);
            out[2] += (fzz * (z_t * z_t) + fz * z_tt) * wt;
        }
        Ok(out)
    }
}

/// g_{λ}(t) = (f * φ_λ)(a_t).
pub fn spherical_convolution_g(
    group: &RankOneGroup,
    f: &RadialFunction,
    lambda: SpectralParameter,
    t: f64,
) -> Result<C64> {
    SphericalConvolution::new(group, f, lambda)?.value(t)
}

/// Samples of a function on SL(2,R) in polar coordinates k_{θ₁} a_t k_{θ₂},
/// on uniform angle grids in [0, 2π). A left-only sampling has a single
/// θ₂ = 0 column.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSamples {
    theta1: Vec<f64>,
    ts: Vec<f64>,
    theta2: Vec<f64>,
    /// Indexed [i1][it][i2], flattened.
    values: Vec<C64>,
}

/// Default angular resolution of polar samples.
pub const POLAR_ANGLES: usize = 64;
/// Default radial step of polar samples.
pub const POLAR_T_STEP: f64 = 0.05;
/// Default radial extent of polar samples.
pub const POLAR_T_MAX: f64 = 8.0;

pub const POLAR_CSV_HEADER: &str = "theta1,t,theta2,value";
pub const POLAR_CSV_HEADER_COMPLEX: &str = "theta1,t,theta2,value,im_value";
pub const POLAR_CSV_HEADER_LEFT: &str = "theta1,t,value";

impl PolarSamples {
    pub fn from_fn<F>(angles: usize, ts: Vec<f64>, left_only: bool, f: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> C64 + Sync,
    {
        if angles == 0 || ts.is_empty() {
            return Err(Error::InvalidParameters("polar grid is empty".into()));
        }
        let theta1 = circle_nodes(angles);
        let theta2 = if left_only { vec![0.0] } else { circle_nodes(angles) };
        let values = theta1
            .par_iter()
            .flat_map_iter(|&a| {
                let (ts, theta2, f) = (&ts, &theta2, &f);
                ts.iter()
                    .flat_map(move |&t| theta2.iter().map(move |&b| f(a, t, b)))
            })
            .collect();
        Ok(Self {
            theta1,
            ts,
            theta2,
            values,
        })
    }

    /// The default layout: 64 angles, t ∈ [0, 8] in steps of 0.05.
    pub fn standard<F>(f: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> C64 + Sync,
    {
        let n = (POLAR_T_MAX / POLAR_T_STEP).round() as usize;
        let ts = (0..=n).map(|i| i as f64 * POLAR_T_STEP).collect();
        Self::from_fn(POLAR_ANGLES, ts, false, f)
    }

    pub fn theta1(&self) -> &[f64] {
        &self.theta1
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn theta2(&self) -> &[f64] {
        &self.theta2
    }

    pub fn is_left_only(&self) -> bool {
        self.theta2.len() == 1
    }

    fn index(&self, i1: usize, it: usize, i2: usize) -> usize {
        (i1 * self.ts.len() + it) * self.theta2.len() + i2
    }

    pub fn get(&self, i1: usize, it: usize, i2: usize) -> C64 {
        self.values[self.index(i1, it, i2)]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Largest pointwise |self − other| on a common grid.
    pub fn max_difference(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.theta1 != other.theta1 || self.ts != other.ts || self.theta2 != other.theta2 {
            return Err(Error::InvalidParameters("polar samples live on different grids".into()));
        }
        Ok(())
    }

    fn with_values(&self, values: Vec<C64>) -> Self {
        Self {
            theta1: self.theta1.clone(),
            ts: self.ts.clone(),
            theta2: self.theta2.clone(),
            values,
        }
    }

    /// Writes `theta1,t,theta2,value`, adding `im_value` when any sample is
    /// complex; left-only samples drop the `theta2` column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let complex = self.values.iter().any(|v| v.im != 0.0);
        let left = self.is_left_only();
        let header = match (left, complex) {
            (true, false) => POLAR_CSV_HEADER_LEFT.to_string(),
            (true, true) => format!("{POLAR_CSV_HEADER_LEFT},im_value"),
            (false, false) => POLAR_CSV_HEADER.to_string(),
            (false, true) => POLAR_CSV_HEADER_COMPLEX.to_string(),
        };
        writeln!(out, "{header}")?;
        for (i1, &a) in self.theta1.iter().enumerate() {
            for (it, &t) in self.ts.iter().enumerate() {
                for (i2, &b) in self.theta2.iter().enumerate() {
                    let v = self.get(i1, it, i2);
                    if left {
                        write!(out, "{a},{t},{}", v.re)?;
                    } else {
                        write!(out, "{a},{t},{b},{}", v.re)?;
                    }
                    if complex {
                        write!(out, ",{}", v.im)?;
                    }
                    writeln!(out)?;
                }
            }
        }
        Ok(())
    }

    /// Reads any of the layouts produced by [`Self::write_csv`]. Rows must
    /// be ordered θ₁-major, then t, then θ₂, on a full rectangular grid.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty polar-sample CSV".into()))??;
        let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
        let (left, complex) = match cols.as_slice() {
            ["theta1", "t", "theta2", "value"] => (false, false),
            ["theta1", "t", "theta2", "value", "im_value"] => (false, true),
            ["theta1", "t", "value"] => (true, false),
            ["theta1", "t", "value", "im_value"] => (true, true),
            _ => {
                return Err(Error::Parse(format!(
                    "unrecognised polar-sample header `{}`",
                    header.trim()
                )))
            }
        };
        let width = cols.len();
        let mut rows: Vec<(f64, f64, f64, C64)> = Vec::new();
        for (n, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))?;
            if v.len() != width {
                return Err(Error::Parse(format!(
                    "line {}: expected {width} columns, found {}",
                    n + 2,
                    v.len()
                )));
            }
            let (b, rest) = if left { (0.0, &v[2..]) } else { (v[2], &v[3..]) };
            let im = if complex { rest[1] } else { 0.0 };
            rows.push((v[0], v[1], b, C64::new(rest[0], im)));
        }
        let mut theta1: Vec<f64> = Vec::new();
        let mut ts: Vec<f64> = Vec::new();
        let mut theta2: Vec<f64> = Vec::new();
        for r in &rows {
            if theta1.last() != Some(&r.0) {
                theta1.push(r.0);
            }
            if theta1.len() == 1 && ts.last() != Some(&r.1) {
                ts.push(r.1);
            }
            if theta1.len() == 1 && ts.len() == 1 {
                theta2.push(r.2);
            }
        }
        if rows.len() != theta1.len() * ts.len() * theta2.len() || rows.is_empty() {
            return Err(Error::Parse("polar samples do not form a rectangular grid".into()));
        }
        let out = Self {
            theta1,
            ts,
            theta2,
            values: rows.iter().map(|r| r.3).collect(),
        };
        for (k, r) in rows.iter().enumerate() {
            let i2 = k % out.theta2.len();
            let it = (k / out.theta2.len()) % out.ts.len();
            let i1 = k / (out.theta2.len() * out.ts.len());
            if r.0 != out.theta1[i1] || r.1 != out.ts[it] || r.2 != out.theta2[i2] {
                return Err(Error::Parse(format!("row {} breaks the grid order", k + 2)));
            }
        }
        Ok(out)
    }
}

/// f^#(t) = (1/4π²) ∬ f(θ₁, t, θ₂) dθ₁ dθ₂ on the sample grid, as a spline.
pub fn sphericalize(f: &PolarSamples) -> Result<RadialFunction> {
    let s = sphericalize_samples(f);
    let pts: Vec<(f64, f64)> = f
        .ts
        .iter()
        .enumerate()
        .map(|(it, &t)| (t, s.get(0, it, 0).re))
        .collect();
    RadialFunction::sampled(&pts)
}

/// f^# on the same polar grid as f.
pub fn sphericalize_samples(f: &PolarSamples) -> PolarSamples {
    let n = (f.theta1.len() * f.theta2.len()) as f64;
    let means: Vec<C64> = (0..f.ts.len())
        .map(|it| {
            let mut s = C64::new(0.0, 0.0);
            for i1 in 0..f.theta1.len() {
                for i2 in 0..f.theta2.len() {
                    s += f.get(i1, it, i2);
                }
            }
            s / n
        })
        .collect();
    let mut values = Vec::with_capacity(f.values.len());
    for _ in 0..f.theta1.len() {
        for m in &means {
            values.extend(std::iter::repeat_n(*m, f.theta2.len()));
        }
    }
    f.with_values(values)
}

/// Circle convolution against ξ_n in one Euler angle: ξ_n * f on the left,
/// f * ξ_n on the right. On a uniform grid this keeps exactly the Fourier
/// mode e^{−inθ} of that angle.
pub fn ktype_project(f: &PolarSamples, n: KTypeIndex, side: Side) -> Result<PolarSamples> {
    let angles = match side {
        Side::Left => &f.theta1,
        Side::Right => &f.theta2,
    };
    let m = angles.len();
    if m < 2 {
        return Err(Error::InvalidParameters(
            "projection needs more than one sample in the chosen angle".into(),
        ));
    }
    let step = 2.0 * PI / m as f64;
    if angles
        .iter()
        .enumerate()
        .any(|(j, &a)| (a - j as f64 * step).abs() > 1e-12)
    {
        return Err(Error::InvalidParameters(
            "projection needs a uniform angle grid starting at 0".into(),
        ));
    }
    // Σ_j ξ_n(φ_j) f(θ − φ_j)/m = ξ_n(θ) · (1/m) Σ_k conj(ξ_n(θ_k)) f(θ_k)
    let chars: Vec<C64> = angles.iter().map(|&a| n.xi(a)).collect();
    let mut values = vec![C64::new(0.0, 0.0); f.values.len()];
    let (n1, n2) = (f.theta1.len(), f.theta2.len());
    for it in 0..f.ts.len() {
        let outer = match side {
            Side::Left => n2,
            Side::Right => n1,
        };
        for o in 0..outer {
            let at = |k: usize| match side {
                Side::Left => f.index(k, it, o),
                Side::Right => f.index(o, it, k),
            };
            let coeff = (0..m).map(|k| chars[k].conj() * f.values[at(k)]).sum::<C64>() / m as f64;
            for (k, ch) in chars.iter().enumerate() {
                values[at(k)] = coeff * ch;
            }
        }
    }
    Ok(f.with_values(values))
}
