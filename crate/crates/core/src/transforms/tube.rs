use num_complex::Complex64 as C64;

use super::SpectralFunction;
use crate::error::{Error, Result};
use crate::group_model::TubeDomain;

/// Real-direction grid spacing.
pub const TUBE_DX: f64 = 0.1;
/// Rows are kept inside this fraction of the tube half-width.
pub const TUBE_CLIP: f64 = 0.95;

/// Difference stencil for the Cauchy–Riemann check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Three-point central differences, O(h²).
    Second,
    /// Five-point central differences, O(h⁴).
    Fourth,
}

impl Stencil {
    fn reach(self) -> usize {
        match self {
            Self::Second => 1,
            Self::Fourth => 2,
        }
    }
}

/// Axes of the tube sampling grid: real parts from `re_lo` to `re_hi` in
/// steps of 0.1, imaginary parts in steps of ε ρ/10 clipped to 0.95 ε ρ.
pub fn tube_grid(tube: &TubeDomain, re_lo: f64, re_hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(re_hi > re_lo) {
        return Err(Error::InvalidParameters(format!(
            "empty real range [{re_lo}, {re_hi}]"
        )));
    }
    let n = ((re_hi - re_lo) / TUBE_DX).round() as usize;
    let re = (0..=n).map(|i| re_lo + i as f64 * TUBE_DX).collect();
    let dy = tube.half_width / 10.0;
    let im = if dy > 0.0 {
        let k = (TUBE_CLIP * tube.half_width / dy + 1e-9).floor() as i64;
        (-k..=k).map(|j| j as f64 * dy).collect()
    } else {
        vec![0.0]
    };
    Ok((re, im))
}

/// |∂F/∂x + i ∂F/∂y| at grid node (i_re, i_im) by central differences.
pub fn tube_holomorphy_defect(f: &SpectralFunction, i_re: usize, i_im: usize) -> Result<f64> {
    tube_holomorphy_defect_with(f, i_re, i_im, Stencil::Second)
}

pub fn tube_holomorphy_defect_with(
    f: &SpectralFunction,
    i_re: usize,
    i_im: usize,
    stencil: Stencil,
) -> Result<f64> {
    let (re, im) = (f.re_axis(), f.im_axis());
    let r = stencil.reach();
    if i_re < r || i_im < r || i_re + r >= re.len() || i_im + r >= im.len() {
        return Err(Error::InvalidParameters(format!(
            "node ({i_re}, {i_im}) lacks the neighbours the stencil needs"
        )));
    }
    let hx = re[i_re + 1] - re[i_re];
    let hy = im[i_im + 1] - im[i_im];
    let at = |di: isize, dj: isize| f.value((i_re as isize + di) as usize, (i_im as isize + dj) as usize);
    let (dx, dy): (C64, C64) = match stencil {
        Stencil::Second => (
            (at(1, 0) - at(-1, 0)) / (2.0 * hx),
            (at(0, 1) - at(0, -1)) / (2.0 * hy),
        ),
        Stencil::Fourth => (
            (at(-2, 0) - 8.0 * at(-1, 0) + 8.0 * at(1, 0) - at(2, 0)) / (12.0 * hx),
            (at(0, -2) - 8.0 * at(0, -1) + 8.0 * at(0, 1) - at(0, 2)) / (12.0 * hy),
        ),
    };
    Ok((dx + C64::i() * dy).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::RankOneGroup;

    fn sampled(g: impl Fn(C64) -> C64 + Sync) -> SpectralFunction {
        let tube = TubeDomain::new(&RankOneGroup::sl2r(), 1.0).unwrap();
        let (re, im) = tube_grid(&tube, -1.0, 1.0).unwrap();
        SpectralFunction::sample(tube, re, im, |l| Ok(g(l.value()))).unwrap()
    }

    #[test]
    fn grid_shape() {
        let tube = TubeDomain::new(&RankOneGroup::sl2r(), 1.0).unwrap();
        let (re, im) = tube_grid(&tube, 0.0, 2.0).unwrap();
        assert_eq!(re.len(), 21);
        assert_eq!(im.len(), 19);
        assert!(im.iter().all(|y| y.abs() <= 0.95 * 0.5));
    }

    #[test]
    fn polynomial_is_holomorphic() {
        let f = sampled(|z| z * z);
        for s in [Stencil::Second, Stencil::Fourth] {
            let d = tube_holomorphy_defect_with(&f, 10, 9, s).unwrap();
            assert!(d < 1e-12, "{s:?}: {d}");
        }
    }

    #[test]
    fn conjugation_has_defect_two() {
        let f = sampled(|z| z.conj());
        assert!((tube_holomorphy_defect(&f, 5, 5).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_nodes_rejected() {
        let f = sampled(|z| z);
        assert!(tube_holomorphy_defect(&f, 0, 5).is_err());
        assert!(tube_holomorphy_defect_with(&f, 1, 5, Stencil::Fourth).is_err());
    }
}
