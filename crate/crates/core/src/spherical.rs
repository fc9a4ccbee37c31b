//! Elementary spherical functions φ_λ, the radial Casimir operator, the
//! Harish-Chandra expansion at infinity and the c-function.
//!
//! Spectral parameters are in the unitary convention (see
//! [`SpectralParameter`]). The radial ODE and its Frobenius series are
//! written in the exponent variable s = iλ:
//!
//! ```text
//! f'' + ((p+q) coth t + q tanh t) f' = (s² − ρ²) f
//! φ_λ(t) = F((ρ+iλ)/2, (ρ−iλ)/2; (p+q+1)/2; −sinh² t)
//! ```

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::group_model::{radial_part, GroupElement, RankOneGroup, SpectralParameter};
use crate::quadrature::circle_nodes;
use crate::special_functions::{
    gauss_2f1, gauss_2f1_dz, gauss_2f1_dz2, Continuation, HypergeomParams,
};

/// Matching point of the c-function extraction.
pub const C_MATCH_T: f64 = 4.0;
/// Frobenius terms kept for c-function work.
pub const C_SERIES_TERMS: usize = 24;
/// Condition number above which the c-function system is rejected.
pub const C_MAX_CONDITION: f64 = 1e8;

pub(crate) fn hypergeom_args(group: &RankOneGroup, lambda: SpectralParameter) -> (C64, C64, f64) {
    let rho = group.rho();
    let il = C64::i() * lambda.value();
    ((il + rho) * 0.5, (-il + rho) * 0.5, group.hypergeometric_c())
}

/// φ_λ(a_t).
pub fn phi(group: &RankOneGroup, lambda: SpectralParameter, t: f64) -> Result<C64> {
    if t == 0.0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let (a, b, c) = hypergeom_args(group, lambda);
    let z = -t.sinh().powi(2);
    gauss_2f1(&HypergeomParams::new(a, b, c, z)?)
}

/// φ_λ together with its first two t-derivatives, each taken from its own
/// hypergeometric evaluation (no use of the radial ODE).
pub fn phi_jet(group: &RankOneGroup, lambda: SpectralParameter, t: f64) -> Result<[C64; 3]> {
    let (a, b, c) = hypergeom_args(group, lambda);
    let z = -t.sinh().powi(2);
    let params = HypergeomParams::new(a, b, c, z)?;
    let f = if t == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        gauss_2f1(&params)?
    };
    let fz = gauss_2f1_dz(&params)?;
    let fzz = gauss_2f1_dz2(&params)?;
    let dz = -(2.0 * t).sinh();
    let d2z = -2.0 * (2.0 * t).cosh();
    Ok([f, fz * dz, fzz * dz * dz + fz * d2z])
}

/// φ_λ at many radii with a single continuation sweep. Returns (φ, φ').
pub fn phi_many(
    group: &RankOneGroup,
    lambda: SpectralParameter,
    ts: &[f64],
) -> Result<Vec<(C64, C64)>> {
    let (a, b, c) = hypergeom_args(group, lambda);
    let zs: Vec<f64> = ts.iter().map(|t| -t.sinh().powi(2)).collect();
    let vals = Continuation::new(a, b, c)?.evaluate_many(&zs)?;
    Ok(ts
        .iter()
        .zip(vals)
        .map(|(&t, (f, fz))| (f, fz * (-(2.0 * t).sinh())))
        .collect())
}

/// Anything that can report (f, f', f'') at a radius.
pub trait RadialJet {
    fn jet(&self, t: f64) -> Result<[C64; 3]>;
}

/// φ_λ for a fixed group and spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalEvaluator {
    pub group: RankOneGroup,
    pub lambda: SpectralParameter,
}

impl SphericalEvaluator {
    pub fn new(group: RankOneGroup, lambda: SpectralParameter) -> Self {
        Self { group, lambda }
    }

    pub fn eval(&self, t: f64) -> Result<C64> {
        phi(&self.group, self.lambda, t.abs())
    }
}

impl RadialJet for SphericalEvaluator {
    fn jet(&self, t: f64) -> Result<[C64; 3]> {
        phi_jet(&self.group, self.lambda, t)
    }
}

/// Wraps a plain function; derivatives by central differences with step `h`.
pub struct FiniteDifference<F> {
    pub f: F,
    pub h: f64,
}

impl<F: Fn(f64) -> Result<C64>> RadialJet for FiniteDifference<F> {
    fn jet(&self, t: f64) -> Result<[C64; 3]> {
        let h = self.h;
        let fm = (self.f)(t - h)?;
        let f0 = (self.f)(t)?;
        let fp = (self.f)(t + h)?;
        Ok([f0, (fp - fm) / (2.0 * h), (fp - f0 * 2.0 + fm) / (h * h)])
    }
}

/// f'' + ((p+q) coth t + q tanh t) f' + (λ² + ρ²) f at `t > 0`.
pub fn casimir_residual<J: RadialJet + ?Sized>(
    group: &RankOneGroup,
    lambda: SpectralParameter,
    f: &J,
    t: f64,
) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "Casimir residual needs t > 0, got {t}"
        )));
    }
    let [v, d1, d2] = f.jet(t)?;
    let p = group.p() as f64;
    let q = group.q() as f64;
    let drift = (p + q) / t.tanh() + q * t.tanh();
    let lam = lambda.value();
    let eigen = -(lam * lam + group.rho() * group.rho());
    Ok(d2 + d1 * drift - v * eigen)
}

/// Frobenius solution e^{(s−ρ)t} (1 + Σ_{k≥1} a_k e^{−kt}) of the radial
/// ODE, optionally carrying the c-function amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct HCSeries {
    pub s_variable: C64,
    rho: f64,
    /// a_0 = 1, a_1, …, a_{k_max}.
    pub coeffs: Vec<C64>,
    pub c_plus: Option<C64>,
    pub c_minus: Option<C64>,
}

impl HCSeries {
    pub fn eval(&self, t: f64) -> C64 {
        self.derivative(t, 0)
    }

    /// `order`-th t-derivative of the truncated series.
    pub fn derivative(&self, t: f64, order: u32) -> C64 {
        let lead = self.s_variable - self.rho;
        let decay = (-t).exp();
        let mut w = C64::new(1.0, 0.0);
        let mut sum = C64::new(0.0, 0.0);
        for (k, a) in self.coeffs.iter().enumerate() {
            let m = lead - k as f64;
            sum += a * w * m.powu(order);
            w *= decay;
        }
        sum * (lead * t).exp()
    }
}

/// Coefficients of the Frobenius solution at exponent `s`.
///
/// Substituting Σ a_k e^{(s−ρ−k)t} into the ODE with
/// coth t = 1 + 2Σ e^{−2jt} and tanh t = 1 + 2Σ (−1)^j e^{−2jt} gives
///
/// ```text
/// k (k − 2s) a_k = − Σ_{j≥1, 2j≤k} 2(p + q + (−1)^j q) (s − ρ − k + 2j) a_{k−2j}
/// ```
///
/// so odd coefficients vanish and even k with 2s = k are resonant.
pub fn hc_series_coeffs(group: &RankOneGroup, s: C64, k_max: usize) -> Result<HCSeries> {
    let rho = group.rho();
    let p = group.p() as f64;
    let q = group.q() as f64;
    let mut coeffs = vec![C64::new(0.0, 0.0); k_max + 1];
    coeffs[0] = C64::new(1.0, 0.0);
    for k in 1..=k_max {
        if k % 2 == 1 {
            continue;
        }
        let mut numer = C64::new(0.0, 0.0);
        for j in 1..=k / 2 {
            let cj = 2.0 * (p + q + if j % 2 == 0 { q } else { -q });
            let m = s - rho - (k - 2 * j) as f64;
            numer += coeffs[k - 2 * j] * m * cj;
        }
        let denom = (C64::new(k as f64, 0.0) - s * 2.0) * k as f64;
        if denom.norm() <= 1e-12 * k as f64 * k as f64 {
            return Err(Error::Resonance(format!("s = {s} (k = {k})")));
        }
        coeffs[k] = -numer / denom;
    }
    Ok(HCSeries {
        s_variable: s,
        rho,
        coeffs,
        c_plus: None,
        c_minus: None,
    })
}

/// Both Frobenius solutions at ±iλ with their c-function amplitudes, so that
/// φ_λ = c(λ) Φ(iλ, ·) + c(−λ) Φ(−iλ, ·).
#[derive(Debug, Clone, PartialEq)]
pub struct HarishChandraExpansion {
    pub plus: HCSeries,
    pub minus: HCSeries,
    pub condition: f64,
}

impl HarishChandraExpansion {
    pub fn c_plus(&self) -> C64 {
        self.plus.c_plus.expect("amplitudes set at construction")
    }

    pub fn c_minus(&self) -> C64 {
        self.plus.c_minus.expect("amplitudes set at construction")
    }

    /// Reconstruction c(λ)Φ(iλ, t) + c(−λ)Φ(−iλ, t).
    pub fn eval(&self, t: f64) -> C64 {
        self.c_plus() * self.plus.eval(t) + self.c_minus() * self.minus.eval(t)
    }
}

fn frobenius_pair(group: &RankOneGroup, lambda: SpectralParameter) -> Result<(HCSeries, HCSeries)> {
    if lambda.value().norm() < 1e-12 {
        return Err(Error::Resonance("lambda = 0".into()));
    }
    let s = lambda.ode_variable();
    Ok((
        hc_series_coeffs(group, s, C_SERIES_TERMS)?,
        hc_series_coeffs(group, -s, C_SERIES_TERMS)?,
    ))
}

fn solve_2x2(m: [[C64; 2]; 2], rhs: [C64; 2]) -> Result<([C64; 2], f64)> {
    // equilibrate columns before judging the conditioning
    let col = [
        m[0][0].norm().max(m[1][0].norm()),
        m[0][1].norm().max(m[1][1].norm()),
    ];
    if col[0] == 0.0 || col[1] == 0.0 {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    let s = [
        [m[0][0] / col[0], m[0][1] / col[1]],
        [m[1][0] / col[0], m[1][1] / col[1]],
    ];
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let frob_sq: f64 = s.iter().flatten().map(|x| x.norm_sqr()).sum();
    let condition = frob_sq / det.norm();
    if !(condition <= C_MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }
    let x0 = (rhs[0] * s[1][1] - rhs[1] * s[0][1]) / det / col[0];
    let x1 = (s[0][0] * rhs[1] - s[1][0] * rhs[0]) / det / col[1];
    Ok(([x0, x1], condition))
}

/// Matches φ_λ and φ'_λ at `C_MATCH_T` against the two Frobenius solutions.
pub fn harish_chandra_expansion(
    group: &RankOneGroup,
    lambda: SpectralParameter,
) -> Result<HarishChandraExpansion> {
    let (mut plus, mut minus) = frobenius_pair(group, lambda)?;
    let t = C_MATCH_T;
    let (f, df) = phi_many(group, lambda, &[t])?[0];
    let scale = 1.0 + plus.s_variable.norm() + group.rho();
    let m = [
        [plus.eval(t), minus.eval(t)],
        [plus.derivative(t, 1) / scale, minus.derivative(t, 1) / scale],
    ];
    let ([cp, cm], condition) = solve_2x2(m, [f, df / scale])?;
    for series in [&mut plus, &mut minus] {
        series.c_plus = Some(cp);
        series.c_minus = Some(cm);
    }
    Ok(HarishChandraExpansion {
        plus,
        minus,
        condition,
    })
}

/// c(λ): the amplitude of e^{(iλ−ρ)t} in φ_λ.
pub fn c_function(group: &RankOneGroup, lambda: SpectralParameter) -> Result<C64> {
    Ok(harish_chandra_expansion(group, lambda)?.c_plus())
}

/// (c(λ), c(−λ)) from one matching solve.
pub fn c_pair(group: &RankOneGroup, lambda: SpectralParameter) -> Result<(C64, C64)> {
    let e = harish_chandra_expansion(group, lambda)?;
    Ok((e.c_plus(), e.c_minus()))
}

/// Plancherel density |c(λ)|⁻² = 1/(c(λ)c(−λ)) for real λ ≠ 0.
pub fn plancherel_density(group: &RankOneGroup, lambda: f64) -> Result<f64> {
    let (cp, cm) = c_pair(group, SpectralParameter::real(lambda))?;
    Ok(1.0 / (cp * cm).re)
}

/// Two-point variant: fits φ_λ(t₁), φ_λ(t₂) to the Frobenius pair. Singular
/// whenever the two oscillations line up (e.g. sin(λ(t₂−t₁)) = 0 on the
/// tempered axis), which the condition check reports.
pub fn c_function_two_point(
    group: &RankOneGroup,
    lambda: SpectralParameter,
    t1: f64,
    t2: f64,
) -> Result<(C64, C64)> {
    let (plus, minus) = frobenius_pair(group, lambda)?;
    let vals = phi_many(group, lambda, &[t1, t2])?;
    let m = [
        [plus.eval(t1), minus.eval(t1)],
        [plus.eval(t2), minus.eval(t2)],
    ];
    // rows live on very different scales; normalize each by its size
    let r0 = m[0][0].norm().max(m[0][1].norm());
    let r1 = m[1][0].norm().max(m[1][1].norm());
    let scaled = [
        [m[0][0] / r0, m[0][1] / r0],
        [m[1][0] / r1, m[1][1] / r1],
    ];
    let ([cp, cm], _) = solve_2x2(scaled, [vals[0].0 / r0, vals[1].0 / r1])?;
    Ok((cp, cm))
}

/// Number of K-quadrature nodes of the functional-equation check.
pub const K_QUADRATURE_NODES: usize = 256;

/// |∫_K φ_λ(a_s k a_t) dk − φ_λ(a_s) φ_λ(a_t)|.
pub fn functional_equation_defect(
    group: &RankOneGroup,
    lambda: SpectralParameter,
    s: f64,
    t: f64,
) -> Result<f64> {
    group.require_sl2r()?;
    let a_s = GroupElement::a(s);
    let a_t = GroupElement::a(t);
    let mut avg = C64::new(0.0, 0.0);
    for theta in circle_nodes(K_QUADRATURE_NODES) {
        let g = a_s * GroupElement::rotation(theta) * a_t;
        avg += phi(group, lambda, radial_part(&g)?)?;
    }
    avg /= K_QUADRATURE_NODES as f64;
    Ok((avg - phi(group, lambda, s)? * phi(group, lambda, t)?).norm())
}
