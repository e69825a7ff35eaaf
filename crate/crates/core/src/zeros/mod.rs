//! Zero ordinates of `L(s, f)` and the shifted multiset for `L_lambda(s, f)`.
//!
//! Ordinates are read as zeros on the critical line; a list of positive
//! ordinates `gamma` stands for the zeros `1/2 +- i gamma`. Windows are open:
//! a zero exactly at `+-T` is not counted.

mod fetch;
mod format;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

pub use fetch::{cache_path, fetch_zeros, FetchConfig, ZEROS_URL_ENV};
pub use format::{checksum, parse_zero_text, render_body, render_zero_file, ParsedZeros, ZeroHeader};

use crate::error::{Error, Result};
use crate::newform::NewformSpec;

/// Ascending positive ordinates, complete up to `coverage`.
#[derive(Debug, Clone)]
pub struct ZeroList {
    spec: NewformSpec,
    ordinates: Vec<f64>,
    coverage: f64,
}

impl ZeroList {
    pub fn new(spec: NewformSpec, ordinates: Vec<f64>, coverage: f64) -> Result<Self> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::NegativeOrdinate { line: i + 1, value: g });
            }
            if i > 0 && g <= ordinates[i - 1] {
                return Err(Error::NonMonotone { line: i + 1 });
            }
            if g > coverage {
                return Err(Error::AboveCoverage { value: g, coverage });
            }
        }
        Ok(Self { spec, ordinates, coverage })
    }

    pub fn spec(&self) -> &NewformSpec {
        &self.spec
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Writes the list with a checksummed header.
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = render_zero_file(&self.spec.label, self.spec.weight, self.spec.level, self.coverage, &self.ordinates);
        fs::write(path, text)?;
        Ok(())
    }
}

/// Loads a zero file. Coverage is taken from `coverage` when given, else
/// from the header, else the largest ordinate.
pub fn load_zeros(path: &Path, spec: &NewformSpec, coverage: Option<f64>) -> Result<ZeroList> {
    let text = fs::read_to_string(path)?;
    let parsed = parse_zero_text(&text, path)?;
    let coverage = coverage
        .or(parsed.header.as_ref().map(|h| h.t_max))
        .unwrap_or_else(|| parsed.ordinates.last().copied().unwrap_or(0.0));
    ZeroList::new(spec.clone(), parsed.ordinates, coverage)
}

/// Sorted multiset `{+-gamma +- lambda/2} ∩ (-T, T)`: the ordinates of the
/// zeros of `L(s + i lambda/2) L(s - i lambda/2)` in the window.
#[derive(Debug, Clone)]
pub struct LambdaZeroSet {
    spec: NewformSpec,
    lambda: f64,
    window: f64,
    ordinates: Vec<f64>,
}

pub fn build_lambda_zeros(zl: &ZeroList, lambda: f64, window: f64) -> Result<LambdaZeroSet> {
    if !(lambda >= 0.0) || !(window > 0.0) {
        return Err(Error::Config(format!("need lambda >= 0 and T > 0, got lambda = {lambda}, T = {window}")));
    }
    let needed = window + lambda / 2.0;
    if needed > zl.coverage {
        return Err(Error::InsufficientCoverage { needed, available: zl.coverage });
    }
    let half = lambda / 2.0;
    let mut ordinates = Vec::with_capacity(4 * zl.len());
    for &g in &zl.ordinates {
        for v in [g + half, g - half, -g + half, -g - half] {
            if v.abs() < window {
                ordinates.push(v);
            }
        }
    }
    ordinates.sort_by(f64::total_cmp);
    Ok(LambdaZeroSet { spec: zl.spec.clone(), lambda, window, ordinates })
}

impl LambdaZeroSet {
    /// Wraps an arbitrary ordinate multiset (synthetic experiments).
    pub fn from_ordinates(spec: NewformSpec, lambda: f64, window: f64, mut ordinates: Vec<f64>) -> Self {
        ordinates.sort_by(f64::total_cmp);
        Self { spec, lambda, window, ordinates }
    }

    pub fn spec(&self) -> &NewformSpec {
        &self.spec
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }
}

/// Exact zero count in `(-T, T)` with the reference asymptotic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCount {
    pub count: usize,
    pub asymptotic: f64,
}

pub trait CountZeros {
    fn count_zeros(&self, t: f64) -> Result<ZeroCount>;
}

impl CountZeros for ZeroList {
    /// Counts `+-gamma` with `gamma < T`; reference `(2/pi) T log T`.
    fn count_zeros(&self, t: f64) -> Result<ZeroCount> {
        if t > self.coverage {
            return Err(Error::InsufficientCoverage { needed: t, available: self.coverage });
        }
        let n = self.ordinates.partition_point(|&g| g < t);
        Ok(ZeroCount { count: 2 * n, asymptotic: 2.0 / PI * t * t.ln() })
    }
}

impl CountZeros for LambdaZeroSet {
    /// Counts ordinates in `(-T, T)`; reference `(4/pi) T log T`.
    fn count_zeros(&self, t: f64) -> Result<ZeroCount> {
        if t > self.window {
            return Err(Error::InsufficientCoverage { needed: t, available: self.window });
        }
        let lo = self.ordinates.partition_point(|&g| g <= -t);
        let hi = self.ordinates.partition_point(|&g| g < t);
        Ok(ZeroCount { count: hi - lo, asymptotic: 4.0 / PI * t * t.ln() })
    }
}

/// A pair of ordinates separated by nearly `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPair {
    pub upper: f64,
    pub lower: f64,
    pub deviation: f64,
}

/// All ordered pairs `(gamma, gamma')` with `|gamma - gamma' - lambda| < eps`.
pub fn detect_lambda_pairs(zl: &ZeroList, lambda: f64, eps: f64) -> Vec<LambdaPair> {
    let g = &zl.ordinates;
    let mut out = Vec::new();
    let mut start = 0;
    for &lower in g {
        let target = lower + lambda;
        while start < g.len() && g[start] <= target - eps {
            start += 1;
        }
        let mut j = start;
        while j < g.len() && g[j] < target + eps {
            let deviation = (g[j] - lower - lambda).abs();
            if deviation < eps {
                out.push(LambdaPair { upper: g[j], lower, deviation });
            }
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> NewformSpec {
        NewformSpec::curve_11a2()
    }

    #[test]
    fn list_validation() {
        assert!(ZeroList::new(spec(), vec![1.0, 2.5], 3.0).is_ok());
        assert!(matches!(ZeroList::new(spec(), vec![2.5, 1.0], 3.0), Err(Error::NonMonotone { line: 2 })));
        assert!(matches!(ZeroList::new(spec(), vec![1.0, 1.0], 3.0), Err(Error::NonMonotone { .. })));
        assert!(matches!(ZeroList::new(spec(), vec![-1.0], 3.0), Err(Error::NegativeOrdinate { .. })));
        assert!(matches!(ZeroList::new(spec(), vec![1.0, 3.5], 3.0), Err(Error::AboveCoverage { .. })));
    }

    #[test]
    fn lambda_set_example() {
        let zl = ZeroList::new(spec(), vec![1.0, 2.5], 3.5).unwrap();
        let lz = build_lambda_zeros(&zl, 1.0, 3.0).unwrap();
        assert_eq!(lz.ordinates(), &[-2.0, -1.5, -0.5, 0.5, 1.5, 2.0]);
        assert_eq!(lz.count_zeros(3.0).unwrap().count, 6);
        let short = ZeroList::new(spec(), vec![1.0, 2.5], 3.0).unwrap();
        assert!(matches!(build_lambda_zeros(&short, 1.0, 3.0), Err(Error::InsufficientCoverage { .. })));
    }

    #[test]
    fn coincident_shift_keeps_multiplicity() {
        let zl = ZeroList::new(spec(), vec![1.25, 4.0], 10.0).unwrap();
        let lz = build_lambda_zeros(&zl, 2.5, 5.0).unwrap();
        assert_eq!(lz.ordinates().iter().filter(|&&v| v == 0.0).count(), 2);
    }

    #[test]
    fn counts() {
        let zl = ZeroList::new(spec(), vec![1.0, 2.5], 3.0).unwrap();
        let c = zl.count_zeros(2.0).unwrap();
        assert_eq!(c.count, 2);
        assert!((c.asymptotic - 2.0 / PI * 2.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(zl.count_zeros(1.0).unwrap().count, 0);
        assert!(zl.count_zeros(4.0).is_err());
    }

    #[test]
    fn lambda_pairs() {
        let zl = ZeroList::new(spec(), vec![1.0, 2.0, 3.5], 4.0).unwrap();
        let pairs = detect_lambda_pairs(&zl, 1.0, 0.01);
        assert_eq!(pairs, vec![LambdaPair { upper: 2.0, lower: 1.0, deviation: 0.0 }]);
        let zl = ZeroList::new(spec(), vec![1.0, 2.0 + 1e-7, 3.5], 4.0).unwrap();
        assert!(detect_lambda_pairs(&zl, 1.0, 1e-9).is_empty());
    }
}
