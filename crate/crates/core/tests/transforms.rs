//! Spherical transform, its horocycle form, inversion, tube evaluation and
//! seminorms, checked against quadrature oracles written out here.

use std::f64::consts::PI;

use hc_rankone::radial::RadialFunction;
use hc_rankone::transforms::{
    abel_transform, calibrate_plancherel, inverse_transform_many, seminorm_mu_p, spherical_transform_horocycle,
    spherical_transform_polar, symmetric_transform, tube_grid, tube_holomorphy_defect,
    tube_holomorphy_defect_with, AbelProfile, RadialAbout, SpectralFunction, Stencil,
};
use hc_rankone::{Error, RankOneGroup, SpectralParameter, TubeDomain};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

/// φ_λ(t) on SL(2,R) from the Laplace integral
/// (1/π) ∫₀^π (cosh t + sinh t cos θ)^{iλ−1/2} dθ; the trapezoid rule is
/// spectrally accurate for this even periodic integrand.
fn laplace_phi(lambda: C64, t: f64) -> C64 {
    let n = 512;
    let h = PI / n as f64;
    let nu = C64::i() * lambda - 0.5;
    let s: C64 = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            (nu * (t.cosh() + t.sinh() * (k as f64 * h).cos()).ln()).exp() * w
        })
        .sum();
    s * h / PI
}

/// ∫ f(t) φ_λ(t) sinh t dt by composite Simpson on [lo, hi].
fn transform_oracle(f: &RadialFunction, lambda: C64, lo: f64, hi: f64) -> C64 {
    let n = 1200;
    let h = (hi - lo) / n as f64;
    (0..=n)
        .map(|k| {
            let t = lo + k as f64 * h;
            let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            laplace_phi(lambda, t) * (f.value(t) * t.sinh() * w)
        })
        .sum::<C64>()
        * (h / 3.0)
}

fn sl2() -> RankOneGroup {
    RankOneGroup::sl2r()
}

#[test]
fn polar_transform_matches_laplace_oracle() {
    let g = sl2();
    let bump = RadialFunction::bump(1.0, 0.5).unwrap();
    let gauss = RadialFunction::gauss(0.7).unwrap();
    for l in [C64::new(0.0, 0.0), C64::new(1.3, 0.0), C64::new(4.0, 0.0), C64::new(0.8, 0.3)] {
        let v = spherical_transform_polar(&g, &bump, l.into()).unwrap();
        let o = transform_oracle(&bump, l, 0.5, 1.5);
        assert!((v - o).norm() < 1e-9 * o.norm().max(1e-3), "bump at {l}: {v} vs {o}");
        let v = spherical_transform_polar(&g, &gauss, l.into()).unwrap();
        let o = transform_oracle(&gauss, l, 0.0, 6.0);
        assert!((v - o).norm() < 1e-8 * o.norm().max(1e-3), "gauss at {l}: {v} vs {o}");
    }
}

#[test]
fn horocycle_form_is_two_pi_times_polar_form() {
    let g = sl2();
    for f in [RadialFunction::bump(1.0, 0.5).unwrap(), RadialFunction::gauss(1.0).unwrap()] {
        for l in [C64::new(0.0, 0.0), C64::new(2.0, 0.0), C64::new(0.6, -0.25)] {
            let h = spherical_transform_horocycle(&g, &f, l.into()).unwrap();
            let p = spherical_transform_polar(&g, &f, l.into()).unwrap();
            assert!((h - 2.0 * PI * p).norm() < 1e-8 * h.norm(), "{f} at {l}");
        }
    }
}

#[test]
fn abel_transform_is_even_and_positive_for_positive_input() {
    let g = sl2();
    let f = RadialFunction::gauss(0.9).unwrap();
    let peak = abel_transform(&g, &f, 0.0).unwrap();
    for u in [0.5, 1.7, 3.0] {
        let a = abel_transform(&g, &f, u).unwrap();
        assert!(a > 0.0 && a < peak);
        let b = abel_transform(&g, &f, -u).unwrap();
        assert!((a - b).abs() < 1e-10 * peak, "u = {u}: {a} vs {b}");
    }
    // ∫ 𝒜f(u) du is the horocycle transform at λ = 0
    let profile = AbelProfile::new(&g, &f, g.rho()).unwrap();
    let h0 = spherical_transform_horocycle(&g, &f, 0.0.into()).unwrap();
    assert!((profile.fourier(0.0.into()) - h0).norm() < 1e-14 * h0.norm());
}

#[test]
fn symmetric_transform_of_a_radial_function_ignores_the_rotation() {
    let g = sl2();
    let profile = RadialFunction::bump(1.0, 0.5).unwrap();
    let f = RadialAbout::new(C64::i(), profile.clone()).unwrap();
    let l = SpectralParameter::real(1.1);
    let reference = spherical_transform_horocycle(&g, &profile, l).unwrap();
    for k in [0.0, 0.7, 2.0, 3.0] {
        let v = symmetric_transform(&g, &f, k, l).unwrap();
        assert!((v - reference).norm() < 1e-6 * reference.norm(), "k = {k}");
    }
}

#[test]
fn symmetric_transform_of_a_displaced_bump_depends_on_the_rotation() {
    let g = sl2();
    let f = RadialAbout::new(C64::new(0.5, 1.2), RadialFunction::bump(0.0, 0.6).unwrap()).unwrap();
    let l = SpectralParameter::real(1.0);
    let vals: Vec<C64> = [0.0, 0.8, 1.6, 2.4]
        .iter()
        .map(|&k| symmetric_transform(&g, &f, k, l).unwrap())
        .collect();
    let mean = vals.iter().sum::<C64>() / vals.len() as f64;
    let spread = vals.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    assert!(spread > 1e-3, "spread {spread}");
}

#[test]
fn radial_about_rejects_bad_input() {
    assert!(RadialAbout::new(C64::new(0.0, -1.0), RadialFunction::bump(0.0, 1.0).unwrap()).is_err());
    assert!(RadialAbout::new(C64::i(), RadialFunction::gauss(1.0).unwrap()).is_err());
}

#[test]
fn calibrated_plancherel_constant_is_one_over_pi() {
    // hyperbolic plane: f(t) = (1/π) ∫₀^∞ Hf(λ) φ_λ(t) |c(λ)|⁻² dλ for dk of mass 1
    let c = calibrate_plancherel(&sl2(), 30.0, 0.05).unwrap();
    assert!((c * PI - 1.0).abs() < 1e-4, "C_pl = {c}");
}

#[test]
fn gaussian_round_trip_with_the_exact_constant() {
    let g = sl2();
    let f = RadialFunction::gauss(1.0).unwrap();
    let grid: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
    let tube = TubeDomain::new(&g, 0.0).unwrap();
    let sf = SpectralFunction::real_axis(tube, grid, |l| spherical_transform_polar(&g, &f, l)).unwrap();
    let ts = [0.0, 0.4, 1.0, 2.0, 3.0];
    let back = inverse_transform_many(&g, &sf, &ts, 1.0 / PI).unwrap();
    for (&t, v) in ts.iter().zip(&back) {
        assert!((v - f.value(t)).norm() < 2e-4, "t = {t}: {v}");
    }
}

#[test]
fn inversion_rejects_irregular_or_short_grids() {
    let g = sl2();
    let tube = TubeDomain::new(&g, 0.0).unwrap();
    let uneven = SpectralFunction::real_axis(tube, vec![0.0, 0.1, 0.3, 0.4, 0.5, 0.6], |_| Ok(C64::new(0.0, 0.0)))
        .unwrap();
    assert!(matches!(inverse_transform_many(&g, &uneven, &[0.0], 1.0), Err(Error::InvalidParameters(_))));
    let short = SpectralFunction::real_axis(tube, vec![0.0, 0.1], |_| Ok(C64::new(0.0, 0.0))).unwrap();
    assert!(inverse_transform_many(&g, &short, &[0.0], 1.0).is_err());
}

#[test]
fn tube_grid_layout() {
    let g = sl2();
    let tube = TubeDomain::for_schwartz_exponent(&g, 1.0).unwrap();
    let (re, im) = tube_grid(&tube, -1.0, 1.0).unwrap();
    assert_eq!(re.len(), 21);
    assert_eq!(im.len(), 19);
    assert!(im.iter().all(|y| y.abs() <= 0.95 * 0.5 + 1e-12));
    assert!(tube_grid(&tube, 1.0, 1.0).is_err());
    let (_, im0) = tube_grid(&TubeDomain::new(&g, 0.0).unwrap(), 0.0, 1.0).unwrap();
    assert_eq!(im0, vec![0.0]);
}

#[test]
fn holomorphy_defect_separates_holomorphic_from_antiholomorphic() {
    let g = sl2();
    let tube = TubeDomain::for_schwartz_exponent(&g, 1.0).unwrap();
    let (re, im) = tube_grid(&tube, -1.0, 1.0).unwrap();
    let hol = SpectralFunction::sample(tube, re.clone(), im.clone(), |l| Ok((l.value() * 0.7).exp())).unwrap();
    let anti = SpectralFunction::sample(tube, re, im, |l| Ok(l.value().conj())).unwrap();
    assert!(tube_holomorphy_defect(&hol, 10, 9).unwrap() < 1e-2);
    assert!(tube_holomorphy_defect_with(&hol, 10, 9, Stencil::Fourth).unwrap() < 1e-5);
    assert!((tube_holomorphy_defect(&anti, 10, 9).unwrap() - 2.0).abs() < 1e-9);
    assert!(tube_holomorphy_defect(&hol, 0, 9).is_err());
    assert!(tube_holomorphy_defect_with(&hol, 1, 9, Stencil::Fourth).is_err());
}

#[test]
fn transform_on_the_tube_is_holomorphic_and_weyl_symmetric() {
    let g = sl2();
    let f = RadialFunction::bump(1.0, 0.5).unwrap();
    let tube = TubeDomain::for_schwartz_exponent(&g, 1.0).unwrap();
    let (re, im) = tube_grid(&tube, -2.0, 2.0).unwrap();
    let sf = SpectralFunction::sample(tube, re.clone(), im.clone(), |l| spherical_transform_polar(&g, &f, l)).unwrap();
    let (nx, ny) = (re.len(), im.len());
    let mut worst = 0.0f64;
    for i in 2..nx - 2 {
        for j in 2..ny - 2 {
            worst = worst.max(tube_holomorphy_defect_with(&sf, i, j, Stencil::Fourth).unwrap());
        }
    }
    assert!(worst < 1e-4, "CR defect {worst}");
    for i in 0..nx {
        for j in 0..ny {
            let w = sf.value(nx - 1 - i, ny - 1 - j);
            assert!((sf.value(i, j) - w).norm() < 1e-12, "Weyl at ({i}, {j})");
        }
    }
}

#[test]
fn seminorms() {
    let g = sl2();
    let gauss = RadialFunction::gauss(1.0).unwrap();
    let m0 = seminorm_mu_p(&g, &gauss, 1.0, 0, 0).unwrap();
    let m2 = seminorm_mu_p(&g, &gauss, 1.0, 2, 0).unwrap();
    assert!(m0 >= 1.0 && m2 >= m0 && m2.is_finite());
    assert!(seminorm_mu_p(&g, &gauss, 1.0, 0, 2).unwrap().is_finite());
    // a constant is not in any Schwartz space: the weight grows without bound
    let one = RadialFunction::sample_from(&[0.0, 20.0, 40.0], |_| 1.0).unwrap();
    assert_eq!(seminorm_mu_p(&g, &one, 1.0, 0, 0).unwrap(), f64::INFINITY);
    assert!(seminorm_mu_p(&g, &gauss, 2.5, 0, 0).is_err());
    assert!(seminorm_mu_p(&g, &gauss, 1.0, 0, 3).is_err());
}

#[test]
fn abstract_groups_use_the_polar_form_only() {
    let g = RankOneGroup::new(3, 1).unwrap();
    let f = RadialFunction::gauss(0.8).unwrap();
    assert!(spherical_transform_polar(&g, &f, 1.0.into()).unwrap().norm() > 0.0);
    assert!(matches!(spherical_transform_horocycle(&g, &f, 1.0.into()), Err(Error::RequiresSl2r)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_symmetries(lr in -6.0f64..6.0, li in -0.45f64..0.45, c in 0.0f64..2.0, w in 0.2f64..1.0) {
        let g = sl2();
        let f = RadialFunction::bump(c, w).unwrap();
        let l = SpectralParameter::new(lr, li);
        let v = spherical_transform_polar(&g, &f, l).unwrap();
        let weyl = spherical_transform_polar(&g, &f, l.weyl()).unwrap();
        let conj = spherical_transform_polar(&g, &f, SpectralParameter(l.value().conj())).unwrap();
        prop_assert!((v - weyl).norm() < 1e-12 * v.norm().max(1e-6));
        prop_assert!((v - conj.conj()).norm() < 1e-12 * v.norm().max(1e-6));
    }

    #[test]
    fn transform_is_linear(a in -2.0f64..2.0, lr in 0.0f64..5.0) {
        let g = sl2();
        let f = RadialFunction::bump(1.0, 0.5).unwrap();
        let h = RadialFunction::gauss(0.6).unwrap();
        let grid: Vec<f64> = (0..=600).map(|i| i as f64 * 0.01).collect();
        let sum = RadialFunction::sample_from(&grid, |t| a * f.value(t) + h.value(t)).unwrap();
        let l = SpectralParameter::real(lr);
        let lhs = spherical_transform_polar(&g, &sum, l).unwrap();
        let rhs = spherical_transform_polar(&g, &f, l).unwrap() * a + spherical_transform_polar(&g, &h, l).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-5 * rhs.norm().max(1e-2));
    }
}
