//! Spherical (Harish-Chandra) transform and everything built on it.
//!
//! Exponent convention for the AN-integrals: `e^{(ρ + iλ)u}` with
//! `a = a_u`. For K-biinvariant input the Weyl symmetry λ ↦ −λ makes the
//! sign immaterial.

mod horocycle;
mod inversion;
pub mod probes;
mod seminorm;
mod spectral;
mod tube;

pub use horocycle::{
    abel_transform, spherical_transform_horocycle, symmetric_transform, AbelProfile,
    HyperbolicFunction, RadialAbout, HOROCYCLE_TAIL_TOL, HOROCYCLE_U_MAX, HOROCYCLE_X_MAX,
};
pub use inversion::{
    calibrate_plancherel, inverse_transform, inverse_transform_many, wave_packet_integrals,
    PLANCHEREL_EXCISION,
};
pub use seminorm::{seminorm_mu_p, SEMINORM_STEP, SEMINORM_T_MAX};
pub use spectral::SpectralFunction;
pub use tube::{tube_grid, tube_holomorphy_defect, tube_holomorphy_defect_with, Stencil};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_model::{jacobian, RankOneGroup, SpectralParameter, PANEL_WIDTH};
use crate::quadrature::{gl32, CompositeRule};
use crate::radial::RadialFunction;
use crate::spherical::phi_many;

/// Relative size below which a truncated tail is accepted.
pub const TAIL_TOL: f64 = 1e-12;

/// Hf(λ) = ∫₀^∞ f(t) φ_{−λ}(t) J(t) dt.
pub fn spherical_transform_polar(
    group: &RankOneGroup,
    f: &RadialFunction,
    lambda: SpectralParameter,
) -> Result<C64> {
    let growth = group.rho() + lambda.value().im.abs();
    let (lo, hi) = f.support(growth, 1e-18);
    if !(hi > lo) {
        return Ok(C64::new(0.0, 0.0));
    }
    let rule = CompositeRule::new(lo, hi, PANEL_WIDTH, gl32());
    let mut ts = rule.nodes.clone();
    ts.push(hi);
    let phis = phi_many(group, lambda.weyl(), &ts)?;
    let value: C64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(&phis)
        .map(|((&t, &w), (ph, _))| ph * (f.value(t) * jacobian(group, t) * w))
        .sum();
    // boundary magnitude stands in for the one-panel tail
    let edge = f.value(hi).abs() * jacobian(group, hi) * phis[ts.len() - 1].0.norm() * PANEL_WIDTH;
    if edge > TAIL_TOL * value.norm().max(1.0) {
        return Err(Error::TailTooLarge {
            estimate: edge,
            tol: TAIL_TOL * value.norm().max(1.0),
        });
    }
    Ok(value)
}

/// [`spherical_transform_polar`] over a list of spectral parameters,
/// evaluated in parallel with results in input order.
pub fn spherical_transform_polar_many(
    group: &RankOneGroup,
    f: &RadialFunction,
    lambdas: &[SpectralParameter],
) -> Result<Vec<C64>> {
    lambdas
        .par_iter()
        .map(|&l| spherical_transform_polar(group, f, l))
        .collect()
}
