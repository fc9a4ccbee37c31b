//! Value grammars shared by the subcommands: grids, complex numbers,
//! radial function presets and the flat config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hc_rankone::radial::RadialFunction;
use num_complex::Complex64 as C64;

/// `start:end:step` with `step > 0` and `end >= start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Grid {
    /// start, start + step, ... up to `end` (inclusive within 1e-9 steps).
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:end:step, got `{s}`"));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{x}` is not a finite number"))
        };
        let (start, end, step) = (num(a)?, num(b)?, num(c)?);
        if !(step > 0.0) {
            return Err(format!("step must be positive, got {step}"));
        }
        if end < start {
            return Err(format!("end {end} is less than start {start}"));
        }
        if (end - start) / step > 1e7 {
            return Err("grid has more than 10^7 points".into());
        }
        Ok(Self { start, end, step })
    }
}

/// Parses `1.5`, `-2`, `0.3i`, `1+0.3i`, `1-0.3i`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim();
    let bad = || format!("`{s}` is not a real or complex number");
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        return re.is_finite().then(|| C64::new(re, 0.0)).ok_or_else(bad);
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re: f64 = re_part.parse().map_err(|_| bad())?;
    if re.is_finite() && im.is_finite() {
        Ok(C64::new(re, im))
    } else {
        Err(bad())
    }
}

/// A single spectral value or a real grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSet(pub Vec<C64>);

impl FromStr for LambdaSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.contains(':') {
            let g: Grid = s.parse()?;
            Ok(Self(g.points().into_iter().map(|l| C64::new(l, 0.0)).collect()))
        } else {
            Ok(Self(vec![parse_complex(s)?]))
        }
    }
}

/// A single radius or a grid of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Radii(pub Vec<f64>);

impl FromStr for Radii {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.contains(':') {
            Ok(Self(s.parse::<Grid>()?.points()))
        } else {
            let t: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
            if t.is_finite() && t >= 0.0 {
                Ok(Self(vec![t]))
            } else {
                Err(format!("radius {t} must be finite and nonnegative"))
            }
        }
    }
}

/// A finite positive real.
pub fn parse_positive(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite() && *v > 0.0)
        .ok_or_else(|| format!("`{s}` is not a positive number"))
}

/// Text form of a radial test function.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Bump { c: f64, w: f64 },
    Gauss { s: f64 },
    File(PathBuf),
}

impl FunctionSpec {
    /// Builds the radial function, reading the sample file if needed.
    pub fn load(&self) -> Result<RadialFunction, String> {
        let r = match self {
            Self::Bump { c, w } => RadialFunction::bump(*c, *w),
            Self::Gauss { s } => RadialFunction::gauss(*s),
            Self::File(path) => return read_samples(path),
        };
        r.map_err(|e| e.to_string())
    }
}

impl FromStr for FunctionSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("expected bump:..., gauss:... or file:..., got `{s}`"))?;
        if kind == "file" {
            if rest.is_empty() {
                return Err("file: needs a path".into());
            }
            return Ok(Self::File(PathBuf::from(rest)));
        }
        let allowed: &[&str] = match kind {
            "bump" => &["c", "w"],
            "gauss" => &["s"],
            other => return Err(format!("unknown function kind `{other}`")),
        };
        let mut values: Vec<Option<f64>> = vec![None; allowed.len()];
        for pair in rest.split(',') {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{pair}`"))?;
            let slot = allowed
                .iter()
                .position(|k| *k == key.trim())
                .ok_or_else(|| format!("unknown key `{}` for {kind}", key.trim()))?;
            if values[slot].is_some() {
                return Err(format!("key `{key}` given twice"));
            }
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| format!("`{value}` is not a number"))?;
            values[slot] = Some(v);
        }
        let get = |k: usize| values[k].ok_or_else(|| format!("{kind} needs `{}`", allowed[k]));
        let spec = match kind {
            "bump" => Self::Bump { c: get(0)?, w: get(1)? },
            _ => Self::Gauss { s: get(0)? },
        };
        spec.load()?;
        Ok(spec)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bump { c, w } => write!(f, "bump:c={c},w={w}"),
            Self::Gauss { s } => write!(f, "gauss:s={s}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Reads `t,value` rows (optional header line) into a sampled function.
fn read_samples(path: &Path) -> Result<RadialFunction, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut points = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (n == 0 && line == "t,value") {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)));
        let Some(p) = parsed else {
            return Err(format!("{}: line {}: expected `t,value`", path.display(), n + 1));
        };
        points.push(p);
    }
    RadialFunction::sampled(&points).map_err(|e| format!("{}: {e}", path.display()))
}

/// Appends `--key value` for every config entry whose flag is absent from
/// `args`. Config lines are `key = value`; `#` starts a comment.
pub fn merge_config(args: &[String], config: &str) -> Result<Vec<String>, String> {
    let mut merged = args.to_vec();
    let given = |key: &str| {
        let flag = format!("--{key}");
        args.iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };
    for (n, raw) in config.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key `{key}`", n + 1));
        }
        if !given(key) {
            merged.push(format!("--{key}={}", value.trim()));
        }
    }
    Ok(merged)
}
