//! AN-coordinate forms of the spherical transform on SL(2,R).
//!
//! With a_u n_x = [[e^{u/2}, e^{u/2}x], [0, e^{−u/2}]] the radial part obeys
//! cosh t = cosh u + e^u x²/2, and a_u n_x · i = e^u (x + i).

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_model::{hyperbolic_distance, GroupElement, RankOneGroup, SpectralParameter, PANEL_WIDTH};
use crate::quadrature::{gl32, CompositeRule};
use crate::radial::RadialFunction;

/// Truncation of the A-variable u.
pub const HOROCYCLE_U_MAX: f64 = 30.0;
/// Truncation of the N-variable x.
pub const HOROCYCLE_X_MAX: f64 = 50.0;
/// Relative size of an accepted truncation tail in u or x.
pub const HOROCYCLE_TAIL_TOL: f64 = 1e-9;

/// Radial part of a_u n_x.
fn horocycle_radius(u: f64, x: f64) -> f64 {
    // 2 asinh of half the distance from the identity, as in radial_part
    let s = (0.5 * u).sinh();
    let r = (s * s + 0.25 * u.exp() * x * x).sqrt();
    2.0 * r.asinh()
}

/// |x| at which the horocycle through a_u reaches radius `d`; zero when it
/// already starts beyond d.
fn horocycle_x(u: f64, d: f64) -> f64 {
    let v = 2.0 * (-u).exp() * (d.cosh() - u.cosh());
    if v > 0.0 {
        v.sqrt()
    } else {
        0.0
    }
}

fn panels(lo: f64, hi: f64) -> CompositeRule {
    let width = PANEL_WIDTH.min((hi - lo) / 8.0);
    CompositeRule::new(lo, hi, width, gl32())
}

/// 𝒜f(u) = e^{ρu} ∫ f(radial_part(a_u n_x)) dx.
pub fn abel_transform(group: &RankOneGroup, f: &RadialFunction, u: f64) -> Result<f64> {
    group.require_sl2r()?;
    let (lo, hi) = f.support(group.rho(), 1e-18);
    abel_inner(group, f, u, lo, hi)
}

fn abel_inner(group: &RankOneGroup, f: &RadialFunction, u: f64, lo: f64, hi: f64) -> Result<f64> {
    if u.abs() >= hi {
        return Ok(0.0);
    }
    let x_lo = horocycle_x(u, lo);
    let x_full = horocycle_x(u, hi);
    let x_hi = x_full.min(HOROCYCLE_X_MAX);
    if !(x_hi > x_lo) {
        return Ok(0.0);
    }
    let rule = panels(x_lo, x_hi);
    let inner = rule.integrate(|x| f.value(horocycle_radius(u, x)));
    let scale = (group.rho() * u).exp();
    let value = 2.0 * scale * inner;
    if x_full > x_hi {
        let edge = 2.0 * scale * f.value(horocycle_radius(u, x_hi)).abs() * PANEL_WIDTH;
        let tol = HOROCYCLE_TAIL_TOL * value.abs().max(1.0);
        if edge > tol {
            return Err(Error::TailTooLarge { estimate: edge, tol });
        }
    }
    Ok(value)
}

/// 𝒜f tabulated on Gauss–Legendre nodes in u, ready for Fourier sums.
#[derive(Debug, Clone)]
pub struct AbelProfile {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

impl AbelProfile {
    /// Tabulates 𝒜f over the u-range where f (weighted by e^{growth·t})
    /// is non-negligible.
    pub fn new(group: &RankOneGroup, f: &RadialFunction, growth: f64) -> Result<Self> {
        group.require_sl2r()?;
        let (lo, hi) = f.support(growth.max(group.rho()), 1e-18);
        if !(hi > 0.0) {
            return Ok(Self {
                nodes: Vec::new(),
                weights: Vec::new(),
                values: Vec::new(),
            });
        }
        let u_max = hi.min(HOROCYCLE_U_MAX);
        if hi > u_max {
            let edge = abel_inner(group, f, u_max, lo, hi)?.abs() * PANEL_WIDTH;
            if edge > HOROCYCLE_TAIL_TOL {
                return Err(Error::TailTooLarge {
                    estimate: edge,
                    tol: HOROCYCLE_TAIL_TOL,
                });
            }
        }
        let rule = panels(-u_max, u_max);
        let values = rule
            .nodes
            .par_iter()
            .map(|&u| abel_inner(group, f, u, lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nodes: rule.nodes,
            weights: rule.weights,
            values,
        })
    }

    /// ∫ 𝒜f(u) e^{iλu} du.
    pub fn fourier(&self, lambda: SpectralParameter) -> C64 {
        let il = C64::i() * lambda.value();
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&u, &w), &v)| (il * u).exp() * (v * w))
            .sum()
    }
}

/// ∬ f(radial_part(a_u n_x)) e^{(iλ+ρ)u} du dx.
pub fn spherical_transform_horocycle(
    group: &RankOneGroup,
    f: &RadialFunction,
    lambda: SpectralParameter,
) -> Result<C64> {
    let growth = group.rho() + lambda.value().im.abs();
    Ok(AbelProfile::new(group, f, growth)?.fourier(lambda))
}

/// A function on the upper half-plane with compact support in a
/// hyperbolic disc.
pub trait HyperbolicFunction: Sync {
    fn value(&self, z: C64) -> f64;
    /// (center, hyperbolic radius) of a disc containing the support.
    fn disc(&self) -> (C64, f64);
}

/// z ↦ profile(d(z, center)).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialAbout {
    pub center: C64,
    pub profile: RadialFunction,
}

impl RadialAbout {
    pub fn new(center: C64, profile: RadialFunction) -> Result<Self> {
        if !(center.im > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "center {center} is not in the upper half-plane"
            )));
        }
        if !profile.is_compactly_supported() {
            return Err(Error::InvalidParameters(
                "hyperbolic test functions must be compactly supported".into(),
            ));
        }
        Ok(Self { center, profile })
    }
}

impl HyperbolicFunction for RadialAbout {
    fn value(&self, z: C64) -> f64 {
        self.profile.value(hyperbolic_distance(z, self.center))
    }

    fn disc(&self) -> (C64, f64) {
        (self.center, self.profile.support(0.0, 1e-18).1)
    }
}

/// ∬ f(k a_u n_x · i) e^{(iλ+ρ)u} du dx with k the rotation by `k_angle`.
pub fn symmetric_transform<H: HyperbolicFunction + ?Sized>(
    group: &RankOneGroup,
    f: &H,
    k_angle: f64,
    lambda: SpectralParameter,
) -> Result<C64> {
    group.require_sl2r()?;
    let k = GroupElement::rotation(k_angle);
    let k_inv = k.inverse();
    let (center, radius) = f.disc();
    // the disc pulled back by k, in Euclidean terms
    let c = k_inv.act(center);
    let (u_lo, u_hi) = (c.im.ln() - radius, c.im.ln() + radius);
    if u_lo < -HOROCYCLE_U_MAX || u_hi > HOROCYCLE_U_MAX {
        return Err(Error::TailTooLarge {
            estimate: u_lo.abs().max(u_hi.abs()),
            tol: HOROCYCLE_U_MAX,
        });
    }
    let (re_lo, re_hi) = (c.re - c.im * radius.sinh(), c.re + c.im * radius.sinh());
    let il = C64::i() * lambda.value();
    let rho = group.rho();
    let outer = panels(u_lo, u_hi);
    let rows = outer
        .nodes
        .par_iter()
        .map(|&u| {
            let e = u.exp();
            let inner = panels(re_lo / e, re_hi / e);
            let s: f64 = inner.integrate(|x| f.value(k.act(C64::new(e * x, e))));
            ((il + rho) * u).exp() * s
        })
        .collect::<Vec<_>>();
    Ok(rows.iter().zip(&outer.weights).map(|(v, &w)| v * w).sum())
}
