use crate::error::{Error, Result};
use crate::group_model::{RankOneGroup, SpectralParameter};
use crate::radial::RadialFunction;
use crate::spherical::phi_many;

/// Grid spacing of the seminorm supremum.
pub const SEMINORM_STEP: f64 = 0.05;
/// Right end of the seminorm grid.
pub const SEMINORM_T_MAX: f64 = 40.0;

/// Number of trailing grid values inspected for unbounded growth.
const GROWTH_WINDOW: usize = 20;

/// sup over t ∈ [0, 40] (step 0.05) of |f^{(order)}(t)| Ξ(t)^{−2/p} (1+t)^m.
///
/// Returns `f64::INFINITY` when the weighted values increase strictly over
/// the last 20 grid points, i.e. the supremum is not attained on the grid.
pub fn seminorm_mu_p(group: &RankOneGroup, f: &RadialFunction, p: f64, m: u32, order: u8) -> Result<f64> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::InvalidParameters(format!(
            "Schwartz exponent p = {p} must lie in (0, 2]"
        )));
    }
    if order > 2 {
        return Err(Error::InvalidParameters(format!(
            "derivative order {order} is not supported (0, 1 or 2)"
        )));
    }
    let n = (SEMINORM_T_MAX / SEMINORM_STEP).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * SEMINORM_STEP).collect();
    let xi = phi_many(group, SpectralParameter::real(0.0), &grid)?;
    let weighted: Vec<f64> = grid
        .iter()
        .zip(&xi)
        .map(|(&t, (x, _))| {
            f.derivative(t, order).abs() * x.re.powf(-2.0 / p) * (1.0 + t).powi(m as i32)
        })
        .collect();
    let tail = &weighted[weighted.len() - GROWTH_WINDOW..];
    if tail.windows(2).all(|w| w[1] > w[0]) {
        return Ok(f64::INFINITY);
    }
    Ok(weighted.iter().copied().fold(0.0, f64::max))
}
