//! K-biinvariant test functions, stored as even functions of the radius.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spherical::RadialJet;

/// Natural cubic spline through strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameters(
                "spline needs at least two (t, value) pairs".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameters(
                "spline knots must be strictly increasing".into(),
            ));
        }
        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations
            let mut diag = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            let mut upper = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
                if i > 1 {
                    let w = h0 / diag[i - 1];
                    diag[i] -= w * upper[i - 1];
                    rhs[i] -= w * rhs[i - 1];
                }
            }
            for i in (1..n - 1).rev() {
                let next = if i + 1 < n - 1 { m[i + 1] } else { 0.0 };
                m[i] = (rhs[i] - upper[i] * next) / diag[i];
            }
        }
        Ok(Self { xs, ys, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().expect("non-empty"))
    }

    /// `order`-th derivative (0..=2) inside the knot range.
    pub fn eval(&self, x: f64, order: u8) -> f64 {
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            j => (j - 1).min(self.xs.len() - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        match order {
            0 => a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0,
            1 => (y1 - y0) / h + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0,
            _ => a * m0 + b * m1,
        }
    }
}

/// An even, smooth function of t representing a K-biinvariant function on G.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialFunction {
    /// exp(−1/(1−x²)) with x = (t − center)/width, mirrored to −t and
    /// summed, so the even extension stays smooth when the support reaches 0.
    Bump { center: f64, width: f64 },
    /// e^{−t²/s²}.
    Gauss { scale: f64 },
    /// Natural cubic spline of |t|; zero outside the sampled range.
    Sampled(CubicSpline),
}

impl RadialFunction {
    pub fn bump(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !center.is_finite() || !width.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "bump needs a finite center and positive width, got c={center}, w={width}"
            )));
        }
        Ok(Self::Bump { center, width })
    }

    pub fn gauss(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "gauss needs a positive scale, got {scale}"
            )));
        }
        Ok(Self::Gauss { scale })
    }

    pub fn sampled(points: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = points.iter().copied().unzip();
        Ok(Self::Sampled(CubicSpline::new(xs, ys)?))
    }

    /// Samples `f` on `grid` (t ≥ 0, increasing).
    pub fn sample_from<F: Fn(f64) -> f64>(grid: &[f64], f: F) -> Result<Self> {
        let pts: Vec<(f64, f64)> = grid.iter().map(|&t| (t, f(t))).collect();
        Self::sampled(&pts)
    }

    /// The identically zero function.
    pub fn zero() -> Self {
        Self::Sampled(CubicSpline::new(vec![0.0, 1.0], vec![0.0, 0.0]).expect("valid knots"))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    /// `order`-th derivative (0, 1 or 2) of the even function at t.
    pub fn derivative(&self, t: f64, order: u8) -> f64 {
        match self {
            Self::Bump { center, width } => {
                bump_profile(t, *center, *width, order) + mirror(order) * bump_profile(-t, *center, *width, order)
            }
            Self::Gauss { scale } => {
                let s2 = scale * scale;
                let g = (-t * t / s2).exp();
                match order {
                    0 => g,
                    1 => -2.0 * t / s2 * g,
                    _ => (4.0 * t * t / (s2 * s2) - 2.0 / s2) * g,
                }
            }
            Self::Sampled(spline) => {
                let x = t.abs();
                let (lo, hi) = spline.domain();
                if x < lo || x > hi {
                    return 0.0;
                }
                let sign = if t < 0.0 && order == 1 { -1.0 } else { 1.0 };
                sign * spline.eval(x, order)
            }
        }
    }

    /// Interval of t ≥ 0 outside which |f(t)| e^{growth·t} < `tol`.
    pub fn support(&self, growth: f64, tol: f64) -> (f64, f64) {
        match self {
            Self::Bump { center, width } => {
                let lo = (center.abs() - width).max(0.0);
                (lo, center.abs() + width)
            }
            Self::Gauss { scale } => {
                // solve t²/s² − g t = ln(1/tol)
                let l = (1.0 / tol).ln();
                let s2 = scale * scale;
                let g = growth.max(0.0);
                let hi = 0.5 * s2 * (g + (g * g + 4.0 * l / s2).sqrt());
                (0.0, hi)
            }
            Self::Sampled(spline) => {
                let (lo, hi) = spline.domain();
                (lo.max(0.0), hi)
            }
        }
    }

    pub fn is_compactly_supported(&self) -> bool {
        !matches!(self, Self::Gauss { .. })
    }
}

impl fmt::Display for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bump { center, width } => write!(f, "bump:c={center},w={width}"),
            Self::Gauss { scale } => write!(f, "gauss:s={scale}"),
            Self::Sampled(s) => write!(f, "sampled[{} knots]", s.knots().len()),
        }
    }
}

impl RadialJet for RadialFunction {
    fn jet(&self, t: f64) -> Result<[C64; 3]> {
        Ok([0, 1, 2].map(|k| C64::new(self.derivative(t, k), 0.0)))
    }
}

fn mirror(order: u8) -> f64 {
    if order == 1 {
        -1.0
    } else {
        1.0
    }
}

fn bump_profile(t: f64, center: f64, width: f64, order: u8) -> f64 {
    let x = (t - center) / width;
    if x.abs() >= 1.0 {
        return 0.0;
    }
    let d = 1.0 - x * x;
    let b = (-1.0 / d).exp();
    match order {
        0 => b,
        1 => b * (-2.0 * x / (d * d)) / width,
        _ => {
            let g1 = -2.0 * x / (d * d);
            let g2 = -2.0 * (1.0 + 3.0 * x * x) / (d * d * d);
            b * (g2 + g1 * g1) / (width * width)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_support_and_parity() {
        let f = RadialFunction::bump(1.0, 0.5).unwrap();
        assert_eq!(f.value(0.5), 0.0);
        assert_eq!(f.value(1.5), 0.0);
        assert_eq!(f.value(0.2), 0.0);
        assert!((f.value(1.0) - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(f.value(1.2), f.value(-1.2));
        assert_eq!(f.support(3.0, 1e-16), (0.5, 1.5));
        assert!(RadialFunction::bump(1.0, 0.0).is_err());
    }

    #[test]
    fn bump_derivatives_match_differences() {
        let f = RadialFunction::bump(0.5, 0.3).unwrap();
        let h = 1e-5;
        for t in [0.3, 0.45, 0.6, 0.72] {
            let d1 = (f.value(t + h) - f.value(t - h)) / (2.0 * h);
            let d2 = (f.value(t + h) - 2.0 * f.value(t) + f.value(t - h)) / (h * h);
            assert!((f.derivative(t, 1) - d1).abs() < 1e-6);
            assert!((f.derivative(t, 2) - d2).abs() < 1e-3);
        }
    }

    #[test]
    fn bump_reaching_origin_is_smooth() {
        let f = RadialFunction::bump(0.1, 0.5).unwrap();
        assert!(f.derivative(0.0, 1).abs() < 1e-15);
    }

    #[test]
    fn gauss_definition_and_support() {
        let f = RadialFunction::gauss(1.0).unwrap();
        assert!((f.value(1.0) - (-1f64).exp()).abs() < 1e-15);
        let (_, hi) = f.support(1.5, 1e-18);
        assert!((-hi * hi + 1.5 * hi).exp() <= 1.01e-18);
    }

    #[test]
    fn spline_reproduces_cubic_interior_and_knots() {
        let xs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let f = RadialFunction::sample_from(&xs, |t| t.sin()).unwrap();
        for &x in &xs {
            assert!((f.value(x) - x.sin()).abs() < 1e-15);
        }
        assert!((f.value(1.013) - 1.013f64.sin()).abs() < 1e-6);
        assert_eq!(f.value(2.5), 0.0);
        assert!(RadialFunction::sampled(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
    }

    #[test]
    fn zero_function() {
        let z = RadialFunction::zero();
        assert_eq!(z.value(0.3), 0.0);
        assert_eq!(z.derivative(0.7, 2), 0.0);
    }
}
