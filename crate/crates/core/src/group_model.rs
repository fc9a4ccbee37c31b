//! Rank-one group data, the SL(2,R) matrix realization, invariant measures
//! and the gauge functions Ξ and σ.
//!
//! Coordinates: α(H₀) = 1, so `a_t = exp(t H₀)` and in SL(2,R)
//! `a_t = diag(e^{t/2}, e^{-t/2})`. Haar measure on G is normalized so that
//! `∫_G F dx = ∫₀^∞ F(a_t) J(t) dt` for K-biinvariant F, with ∫_K dk = 1.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gl32, CompositeRule};
use crate::spherical;

/// Which concrete model backs the abstract root data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    Abstract,
    Sl2r,
}

/// Root multiplicities of a real-rank-one group: `p` for α, `q` for 2α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneGroup {
    p: u32,
    q: u32,
    realization: Realization,
}

impl RankOneGroup {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::InvalidParameters(
                "root multiplicities must satisfy p + q >= 1".into(),
            ));
        }
        let realization = if (p, q) == (1, 0) {
            Realization::Sl2r
        } else {
            Realization::Abstract
        };
        Ok(Self { p, q, realization })
    }

    /// SL(2,R), i.e. (p, q) = (1, 0) with matrix-level oracles enabled.
    pub fn sl2r() -> Self {
        Self {
            p: 1,
            q: 0,
            realization: Realization::Sl2r,
        }
    }

    /// The same root data without the matrix model.
    pub fn abstract_group(p: u32, q: u32) -> Result<Self> {
        let mut g = Self::new(p, q)?;
        g.realization = Realization::Abstract;
        Ok(g)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// ρ(H₀) = (p + 2q) / 2.
    pub fn rho(&self) -> f64 {
        (self.p as f64 + 2.0 * self.q as f64) / 2.0
    }

    /// Hypergeometric `c` parameter of the spherical functions.
    pub fn hypergeometric_c(&self) -> f64 {
        (self.p as f64 + self.q as f64 + 1.0) / 2.0
    }

    pub fn require_sl2r(&self) -> Result<()> {
        match self.realization {
            Realization::Sl2r => Ok(()),
            Realization::Abstract => Err(Error::RequiresSl2r),
        }
    }
}

impl fmt::Display for RankOneGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

/// λ ∈ 𝔞*_ℂ in the unitary convention: the tempered spectrum is the real
/// axis and Ω acts on φ_λ by −(λ² + ρ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParameter(pub C64);

impl SpectralParameter {
    pub fn new(re: f64, im: f64) -> Self {
        Self(C64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Self(C64::new(re, 0.0))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    /// Exponent variable of the radial ODE and its Frobenius series, s = iλ.
    pub fn ode_variable(&self) -> C64 {
        C64::i() * self.0
    }

    /// Inverse of [`Self::ode_variable`].
    pub fn from_ode_variable(s: C64) -> Self {
        Self(-C64::i() * s)
    }

    /// Nontrivial Weyl group element: λ ↦ −λ.
    pub fn weyl(&self) -> Self {
        Self(-self.0)
    }

    pub fn is_tempered(&self) -> bool {
        self.0.im == 0.0
    }
}

impl From<f64> for SpectralParameter {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl From<C64> for SpectralParameter {
    fn from(z: C64) -> Self {
        Self(z)
    }
}

/// Strip 𝔞* + iεC_ρ; in rank one C_ρ = [−ρ, ρ].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeDomain {
    pub epsilon: f64,
    pub half_width: f64,
}

impl TubeDomain {
    pub fn new(group: &RankOneGroup, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "tube parameter epsilon = {epsilon} must be a nonnegative real"
            )));
        }
        Ok(Self {
            epsilon,
            half_width: epsilon * group.rho(),
        })
    }

    /// Tube attached to the Schwartz space 𝒞ᵖ: ε = 2/p − 1.
    pub fn for_schwartz_exponent(group: &RankOneGroup, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 2.0) {
            return Err(Error::InvalidParameters(format!(
                "Schwartz exponent p = {p} must lie in (0, 2]"
            )));
        }
        Self::new(group, 2.0 / p - 1.0)
    }

    pub fn contains(&self, lambda: SpectralParameter) -> bool {
        lambda.0.im.abs() <= self.half_width
    }
}

/// A 2×2 real matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    m: [[f64; 2]; 2],
}

impl GroupElement {
    pub const IDENTITY: Self = Self {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Accepts any matrix with positive determinant and rescales it onto
    /// SL(2,R).
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "matrix determinant {det} is not positive"
            )));
        }
        Ok(Self { m }.renormalized())
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Rotation k_θ ∈ SO(2).
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            m: [[c, -s], [s, c]],
        }
    }

    /// a_t = diag(e^{t/2}, e^{-t/2}).
    pub fn a(t: f64) -> Self {
        let e = (0.5 * t).exp();
        Self {
            m: [[e, 0.0], [0.0, 1.0 / e]],
        }
    }

    /// Unipotent n_x = [[1, x], [0, 1]].
    pub fn n(x: f64) -> Self {
        Self {
            m: [[1.0, x], [0.0, 1.0]],
        }
    }

    /// k_{θ₁} a_t k_{θ₂}.
    pub fn from_polar(theta1: f64, t: f64, theta2: f64) -> Self {
        Self::rotation(theta1) * Self::a(t) * Self::rotation(theta2)
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self {
            m: [[d, -b], [-c, a]],
        }
    }

    fn renormalized(self) -> Self {
        let det = self.det();
        if (det - 1.0).abs() <= 1e-15 {
            return self;
        }
        let s = 1.0 / det.sqrt();
        let [[a, b], [c, d]] = self.m;
        Self {
            m: [[a * s, b * s], [c * s, d * s]],
        }
    }

    /// Cartan decomposition g = k_{θ₁} a_t k_{θ₂} with t ≥ 0.
    pub fn polar(&self) -> (f64, f64, f64) {
        let [[a, b], [c, d]] = self.m;
        let psi = (0.5 * (c - b)).atan2(0.5 * (a + d));
        let mu = (0.5 * (a - d)).hypot(0.5 * (b + c));
        let phi = if mu == 0.0 {
            0.0
        } else {
            (0.5 * (b + c)).atan2(0.5 * (a - d))
        };
        let t = 2.0 * mu.asinh();
        (0.5 * (psi + phi), t, 0.5 * (psi - phi))
    }

    /// Möbius action on the upper half-plane.
    pub fn act(&self, z: C64) -> C64 {
        let [[a, b], [c, d]] = self.m;
        (z * a + b) / (z * c + d)
    }

    /// Iwasawa A-coordinate: g = k a_u n with u returned.
    pub fn iwasawa_a(&self) -> f64 {
        let [[a, _], [c, _]] = self.m;
        (a * a + c * c).ln()
    }
}

impl Mul for GroupElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let a = self.m;
        let b = rhs.m;
        Self {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
        .renormalized()
    }
}

/// Jacobian of the polar decomposition, (sinh t)^p (sinh 2t)^q.
pub fn jacobian(group: &RankOneGroup, t: f64) -> f64 {
    let t = t.abs();
    t.sinh().powi(group.p() as i32) * (2.0 * t).sinh().powi(group.q() as i32)
}

/// The t ≥ 0 with g ∈ K a_t K, i.e. arccosh(‖g‖²_F / 2).
///
/// Evaluated as 2 asinh(√((a−d)² + (b+c)²) / 2), which equals the
/// arccosh form on SL(2,R) and keeps full precision near the identity.
pub fn radial_part(g: &GroupElement) -> Result<f64> {
    let [[a, b], [c, d]] = g.matrix();
    let frob = a * a + b * b + c * c + d * d;
    let det = g.det();
    if frob < 2.0 - 1e-12 || (det - 1.0).abs() > 1e-9 * frob.max(1.0) {
        return Err(Error::NotUnimodular { frobenius_sq: frob });
    }
    Ok(2.0 * (0.5 * (a - d).hypot(b + c)).asinh())
}

/// σ(a_t) = |t|.
pub fn sigma(_group: &RankOneGroup, t: f64) -> f64 {
    t.abs()
}

/// Ξ(a_t) = φ₀(a_t).
pub fn xi(group: &RankOneGroup, t: f64) -> Result<f64> {
    Ok(spherical::phi(group, SpectralParameter::real(0.0), t.abs())?.re)
}

/// Hyperbolic distance on the upper half-plane.
pub fn hyperbolic_distance(z: C64, w: C64) -> f64 {
    2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// Panel width of the radial quadrature.
pub const PANEL_WIDTH: f64 = 0.25;
/// Default truncation of radial integrals for Schwartz-class integrands.
pub const DEFAULT_T_MAX: f64 = 40.0;

/// ∫₀^{t_max} f(t) J(t) dt on 32-point Gauss–Legendre panels of width 0.25,
/// checked against one refinement (width 0.125) and a one-panel tail
/// estimate beyond `t_max`. Returns the refined value.
pub fn integrate_radial<F>(group: &RankOneGroup, f: F, t_max: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let v = integrate_radial_complex(group, |t| C64::new(f(t), 0.0), 0.0, t_max, tol)?;
    Ok(v.re)
}

/// Complex-valued variant over [lo, hi] with the same checks.
pub fn integrate_radial_complex<F>(
    group: &RankOneGroup,
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    if !(hi > lo) || lo < 0.0 {
        return Err(Error::InvalidParameters(format!(
            "radial integration range [{lo}, {hi}] must satisfy 0 <= lo < hi"
        )));
    }
    let integrand = |t: f64| f(t) * jacobian(group, t);
    let coarse = composite(lo, hi, PANEL_WIDTH, &integrand);
    let fine = composite(lo, hi, 0.5 * PANEL_WIDTH, &integrand);
    let tail = composite(hi, hi + PANEL_WIDTH, PANEL_WIDTH, &integrand).norm();
    if tail > tol {
        return Err(Error::TailTooLarge {
            estimate: tail,
            tol,
        });
    }
    let change = (fine - coarse).norm();
    if change > tol {
        return Err(Error::QuadratureTolerance { change, tol });
    }
    Ok(fine)
}

fn composite<F: Fn(f64) -> C64>(lo: f64, hi: f64, width: f64, f: &F) -> C64 {
    let rule = CompositeRule::new(lo, hi, width, gl32());
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| f(t) * w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn group_validation() {
        assert!(RankOneGroup::new(0, 0).is_err());
        let g = RankOneGroup::new(3, 1).unwrap();
        assert_eq!(g.rho(), 2.5);
        assert_eq!(g.realization(), Realization::Abstract);
        assert_eq!(RankOneGroup::new(1, 0).unwrap(), RankOneGroup::sl2r());
        assert!(RankOneGroup::abstract_group(1, 0)
            .unwrap()
            .require_sl2r()
            .is_err());
    }

    #[test]
    fn jacobian_examples() {
        let sl2 = RankOneGroup::sl2r();
        assert_eq!(jacobian(&sl2, 0.0), 0.0);
        assert!((jacobian(&sl2, 1.0) - 1.175_201_193_643_801_4).abs() < 1e-15);
        let g31 = RankOneGroup::new(3, 1).unwrap();
        let expected = 0.5f64.sinh().powi(3) * 1f64.sinh();
        assert!((jacobian(&g31, 0.5) - expected).abs() < 1e-15);
        assert!((expected - 0.1663).abs() < 1e-4);
    }

    #[test]
    fn radial_part_examples() {
        assert_eq!(radial_part(&GroupElement::IDENTITY).unwrap(), 0.0);
        assert!((radial_part(&GroupElement::a(1.0)).unwrap() - 1.0).abs() < 1e-15);
        let g = GroupElement::new([[1.0, 3.0], [0.0, 1.0]]).unwrap();
        assert!((radial_part(&g).unwrap() - 5.5f64.acosh()).abs() < 1e-14);
    }

    #[test]
    fn radial_part_rejects_non_unimodular() {
        let g = GroupElement {
            m: [[0.5, 0.0], [0.0, 0.5]],
        };
        assert!(matches!(
            radial_part(&g),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn polar_round_trip() {
        let g = GroupElement::from_polar(0.4, 1.3, -2.1);
        let (t1, t, t2) = g.polar();
        assert!((t - 1.3).abs() < 1e-13);
        let h = GroupElement::from_polar(t1, t, t2);
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.matrix()[i][j] - h.matrix()[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let g = RankOneGroup::sl2r();
        assert_eq!(sigma(&g, 0.0), 0.0);
        assert_eq!(sigma(&g, 3.0), 3.0);
        assert_eq!(sigma(&g, -3.0), 3.0);
    }

    #[test]
    fn tube_from_schwartz_exponent() {
        let g = RankOneGroup::sl2r();
        let tube = TubeDomain::for_schwartz_exponent(&g, 1.0).unwrap();
        assert_eq!(tube.epsilon, 1.0);
        assert_eq!(tube.half_width, 0.5);
        assert!(tube.contains(SpectralParameter::new(3.0, -0.5)));
        assert!(!tube.contains(SpectralParameter::new(0.0, 0.6)));
        assert_eq!(TubeDomain::for_schwartz_exponent(&g, 2.0).unwrap().half_width, 0.0);
        assert!(TubeDomain::for_schwartz_exponent(&g, 0.0).is_err());
    }

    #[test]
    fn integrate_radial_examples() {
        let g = RankOneGroup::sl2r();
        assert_eq!(integrate_radial(&g, |_| 0.0, 5.0, 1e-12).unwrap(), 0.0);
        let v = integrate_radial(&g, |_| 1.0, 1.0, 1e-12);
        // the constant integrand has a large tail beyond t = 1
        assert!(matches!(v, Err(Error::TailTooLarge { .. })));
        let v = integrate_radial_complex(&g, |_| C64::new(1.0, 0.0), 0.0, 1.0, 10.0).unwrap();
        assert!((v.re - (1f64.cosh() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_distance_matches_radial_part() {
        let g = GroupElement::from_polar(0.3, 2.2, 1.1);
        let d = hyperbolic_distance(g.act(C64::i()), C64::i());
        assert!((d - 2.2).abs() < 1e-13);
        let z = GroupElement::rotation(PI / 3.0).act(C64::i());
        assert!((z - C64::i()).norm() < 1e-15);
    }
}
