use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_model::{SpectralParameter, TubeDomain};

pub const CSV_HEADER: &str = "re_lambda,im_lambda,re_value,im_value";

/// Samples of a function on a rectangular grid of λ = x + iy inside a tube.
///
/// Values are stored row-major: one row per imaginary part, ordered by
/// increasing real part within the row.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    pub tube: TubeDomain,
    re: Vec<f64>,
    im: Vec<f64>,
    values: Vec<C64>,
}

impl SpectralFunction {
    pub fn from_values(tube: TubeDomain, re: Vec<f64>, im: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if values.len() != re.len() * im.len() || re.is_empty() || im.is_empty() {
            return Err(Error::InvalidParameters(format!(
                "grid {}x{} does not match {} values",
                im.len(),
                re.len(),
                values.len()
            )));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&re) || !increasing(&im) {
            return Err(Error::InvalidParameters(
                "spectral grid axes must be strictly increasing".into(),
            ));
        }
        Ok(Self { tube, re, im, values })
    }

    /// Evaluates `f` at every grid node (in parallel, stored in grid order).
    pub fn sample<F>(tube: TubeDomain, re: Vec<f64>, im: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(SpectralParameter) -> Result<C64> + Sync,
    {
        let nodes: Vec<SpectralParameter> = im
            .iter()
            .flat_map(|&y| re.iter().map(move |&x| SpectralParameter::new(x, y)))
            .collect();
        let values = nodes.par_iter().map(|&l| f(l)).collect::<Result<Vec<_>>>()?;
        Self::from_values(tube, re, im, values)
    }

    /// A single row on the tempered axis.
    pub fn real_axis<F>(tube: TubeDomain, re: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(SpectralParameter) -> Result<C64> + Sync,
    {
        Self::sample(tube, re, vec![0.0], f)
    }

    pub fn re_axis(&self) -> &[f64] {
        &self.re
    }

    pub fn im_axis(&self) -> &[f64] {
        &self.im
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, i_re: usize, i_im: usize) -> C64 {
        self.values[i_im * self.re.len() + i_re]
    }

    pub fn lambda(&self, i_re: usize, i_im: usize) -> SpectralParameter {
        SpectralParameter::new(self.re[i_re], self.im[i_im])
    }

    /// Row index of the tempered axis, if the grid contains it.
    pub fn real_row(&self) -> Option<usize> {
        self.im.iter().position(|&y| y == 0.0)
    }

    /// Values on the tempered axis, paired with λ.
    pub fn tempered_samples(&self) -> Result<Vec<(f64, C64)>> {
        let row = self.real_row().ok_or_else(|| {
            Error::InvalidParameters("spectral grid has no tempered (Im λ = 0) row".into())
        })?;
        Ok((0..self.re.len()).map(|i| (self.re[i], self.value(i, row))).collect())
    }

    /// Pointwise product on a common grid.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.re != other.re || self.im != other.im {
            return Err(Error::InvalidParameters(
                "spectral functions live on different grids".into(),
            ));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self {
            tube: self.tube,
            re: self.re.clone(),
            im: self.im.clone(),
            values,
        })
    }

    /// Writes the grid as CSV with header `re_lambda,im_lambda,re_value,im_value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for (j, &y) in self.im.iter().enumerate() {
            for (i, &x) in self.re.iter().enumerate() {
                let v = self.value(i, j);
                writeln!(out, "{x},{y},{},{}", v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Reads the CSV layout written by [`Self::write_csv`].
    pub fn read_csv<R: BufRead>(tube: TubeDomain, input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty spectral CSV".into()))??;
        if header.trim() != CSV_HEADER {
            return Err(Error::Parse(format!(
                "expected header `{CSV_HEADER}`, found `{}`",
                header.trim()
            )));
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))?;
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "line {}: expected 4 columns, found {}",
                    n + 2,
                    fields.len()
                )));
            }
            rows.push(fields);
        }
        let mut re: Vec<f64> = Vec::new();
        let mut im: Vec<f64> = Vec::new();
        for r in &rows {
            if im.last() != Some(&r[1]) && !im.contains(&r[1]) {
                im.push(r[1]);
            }
            if im.len() == 1 {
                re.push(r[0]);
            }
        }
        let values = rows.iter().map(|r| C64::new(r[2], r[3])).collect::<Vec<_>>();
        for (k, r) in rows.iter().enumerate() {
            let (i, j) = (k % re.len().max(1), k / re.len().max(1));
            if j >= im.len() || r[0] != re[i] || r[1] != im[j] {
                return Err(Error::Parse(format!(
                    "row {} breaks the row-major grid layout",
                    k + 2
                )));
            }
        }
        Self::from_values(tube, re, im, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::RankOneGroup;

    fn tube() -> TubeDomain {
        TubeDomain::new(&RankOneGroup::sl2r(), 1.0).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = SpectralFunction::sample(tube(), vec![0.0, 0.1, 0.2], vec![-0.05, 0.0, 0.05], |l| {
            Ok(l.value() * l.value() + 0.1)
        })
        .unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("re_lambda,im_lambda,re_value,im_value\n"));
        assert_eq!(text.lines().count(), 10);
        let back = SpectralFunction::read_csv(tube(), buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn csv_rejects_wrong_header_and_columns() {
        let bad = "lambda,value\n0,1\n";
        assert!(SpectralFunction::read_csv(tube(), bad.as_bytes()).is_err());
        let bad = "re_lambda,im_lambda,re_value,im_value\n0,0,1\n";
        assert!(SpectralFunction::read_csv(tube(), bad.as_bytes()).is_err());
    }

    #[test]
    fn product_requires_same_grid() {
        let a = SpectralFunction::real_axis(tube(), vec![0.0, 1.0], |_| Ok(C64::new(2.0, 0.0))).unwrap();
        let b = SpectralFunction::real_axis(tube(), vec![0.0, 2.0], |_| Ok(C64::new(2.0, 0.0))).unwrap();
        assert!(a.product(&b).is_err());
        let sq = a.product(&a).unwrap();
        assert_eq!(sq.values(), &[C64::new(4.0, 0.0); 2]);
    }
}
