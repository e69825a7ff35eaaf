//! Normalized Hecke eigenvalues of non-CM newforms.
//!
//! Coefficients are stored in the analytic normalization
//! `a_n = c_n / n^((k-1)/2)`, so that `|a_p| <= 2` at good primes and the
//! L-function is symmetric about `Re s = 1/2`. Raw integer coefficients only
//! appear inside the source-specific generators.

mod curve;
mod file;
mod tau;

use std::path::PathBuf;
use std::sync::Arc;

pub use curve::WeierstrassCurve;
pub use file::{parse_coeff_file, read_coeff_file, CoeffFile};
pub use tau::{tau_coefficients, tau_coefficients_capped, DEFAULT_TAU_CAP};

use crate::error::{Error, Result};
use crate::primes::{is_square_free, Sieve};

/// Where the coefficients of a newform come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSource {
    /// The discriminant form `q prod (1 - q^n)^24` (weight 12, level 1).
    RamanujanTau,
    /// The weight-2 newform attached to an elliptic curve over Q.
    EllipticCurve(WeierstrassCurve),
    /// Raw q-expansion coefficients read from a file.
    CoeffFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewformSpec {
    pub weight: u32,
    pub level: u64,
    pub source: CoeffSource,
    pub label: String,
}

impl NewformSpec {
    pub fn new(weight: u32, level: u64, source: CoeffSource, label: impl Into<String>) -> Result<Self> {
        if weight < 2 || weight % 2 != 0 {
            return Err(Error::UnsupportedSpec(format!("weight {weight} must be even and >= 2")));
        }
        if !is_square_free(level) {
            return Err(Error::UnsupportedSpec(format!("level {level} is not square-free")));
        }
        match &source {
            CoeffSource::EllipticCurve(_) if weight != 2 => {
                return Err(Error::UnsupportedSpec("elliptic curve source requires weight 2".into()));
            }
            CoeffSource::RamanujanTau if (weight, level) != (12, 1) => {
                return Err(Error::UnsupportedSpec("Ramanujan tau source is weight 12, level 1".into()));
            }
            _ => {}
        }
        Ok(Self { weight, level, source, label: label.into() })
    }

    /// The discriminant modular form.
    pub fn delta() -> Self {
        Self::new(12, 1, CoeffSource::RamanujanTau, "delta").expect("valid spec")
    }

    pub fn elliptic_curve(label: impl Into<String>, a: [i64; 5], level: u64) -> Result<Self> {
        Self::new(2, level, CoeffSource::EllipticCurve(WeierstrassCurve::new(a)), label)
    }

    /// `y^2 + y = x^3 - x^2 - 10x - 20`, conductor 11.
    pub fn curve_11a2() -> Self {
        Self::elliptic_curve("11.a2", [0, -1, 1, -10, -20], 11).expect("valid spec")
    }

    /// Reads weight, level and label from the header of a coefficient file.
    pub fn from_coeff_file(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let f = read_coeff_file(&path)?;
        Self::new(f.weight, f.level, CoeffSource::CoeffFile(path), f.label)
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        self.level % p != 0
    }

    /// Exponent `(k - 1) / 2` of the analytic normalization.
    pub fn normalization_exponent(&self) -> f64 {
        (self.weight as f64 - 1.0) / 2.0
    }
}

/// Normalized coefficients `a_1 ..= a_{n_max}` of a newform.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    spec: NewformSpec,
    values: Vec<f64>,
    sieve: Arc<Sieve>,
}

const REL_TOL: f64 = 1e-12;

impl CoeffTable {
    /// Builds a table from prime coefficients, extended to prime powers by the
    /// local Euler factor and to all `n` multiplicatively.
    pub fn from_prime_coefficients<F>(spec: NewformSpec, n_max: usize, mut a_p: F) -> Self
    where
        F: FnMut(u64) -> f64,
    {
        let sieve = Arc::new(Sieve::new(n_max.max(1)));
        let mut values = vec![0.0; n_max + 1];
        if n_max >= 1 {
            values[1] = 1.0;
        }
        for &p in sieve.primes() {
            let p = p as usize;
            let ap = a_p(p as u64);
            let good = spec.is_good_prime(p as u64);
            let (mut prev, mut cur) = (1.0, ap);
            let mut q = p;
            loop {
                values[q] = cur;
                if q > n_max / p {
                    break;
                }
                q *= p;
                let next = if good { ap * cur - prev } else { ap * cur };
                (prev, cur) = (cur, next);
            }
        }
        for n in 2..=n_max {
            let (p, e, rest) = sieve.split(n);
            if rest > 1 {
                values[n] = values[n / rest] * values[rest];
            }
            let _ = (p, e);
        }
        Self { spec, values, sieve }
    }

    /// Wraps externally supplied normalized values and checks every invariant.
    pub fn from_values(spec: NewformSpec, values: Vec<f64>) -> Result<Self> {
        let n_max = values.len().saturating_sub(1);
        let table = Self { spec, values, sieve: Arc::new(Sieve::new(n_max.max(1))) };
        table.validate()?;
        Ok(table)
    }

    pub fn spec(&self) -> &NewformSpec {
        &self.spec
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn sieve(&self) -> &Arc<Sieve> {
        &self.sieve
    }

    /// `a_n` for `1 <= n <= max_index`.
    pub fn get(&self, n: usize) -> Option<f64> {
        (n >= 1).then(|| self.values.get(n).copied()).flatten()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.sieve.primes().iter().map(|&p| p as u64)
    }

    pub fn good_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes().filter(|&p| self.spec.is_good_prime(p))
    }

    /// Checks the Deligne bound, multiplicativity, the Hecke recurrence at
    /// good primes and the local shape at bad primes.
    pub fn validate(&self) -> Result<()> {
        let n_max = self.max_index();
        let violation = |msg: String| Err(Error::InvariantViolation(msg));
        if n_max == 0 {
            return violation("empty table".into());
        }
        if self.values[1] != 1.0 {
            return violation(format!("a_1 = {} != 1", self.values[1]));
        }
        let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0);
        for n in 2..=n_max {
            let factors = self.sieve.factorize(n);
            let divisors: u64 = factors.iter().map(|&(_, e)| e as u64 + 1).product();
            let a = self.values[n];
            if !a.is_finite() || a.abs() > divisors as f64 + REL_TOL {
                return violation(format!("|a_{n}| = {} exceeds sigma_0 = {divisors}", a.abs()));
            }
            let (p, e, rest) = self.sieve.split(n);
            if rest > 1 {
                let prod = self.values[n / rest] * self.values[rest];
                if !close(a, prod, REL_TOL) {
                    return violation(format!("a_{n} = {a} but a_{} a_{rest} = {prod}", n / rest));
                }
                continue;
            }
            let ap = self.values[p];
            if self.spec.is_good_prime(p as u64) {
                if e >= 2 {
                    let expect = ap * self.values[n / p] - self.values[n / (p * p)];
                    if !close(a, expect, REL_TOL) {
                        return violation(format!("Hecke recurrence fails at {p}^{e}: {a} vs {expect}"));
                    }
                }
            } else {
                if e == 1 && (ap.abs() - (p as f64).powf(-0.5)).abs() > 1e-9 {
                    return violation(format!("bad prime {p}: |a_p| = {} != p^(-1/2)", ap.abs()));
                }
                if e >= 2 && !close(a, ap.powi(e as i32), REL_TOL) {
                    return violation(format!("bad prime power {p}^{e}: {a} vs a_p^{e}"));
                }
            }
        }
        Ok(())
    }
}

/// Builds the coefficient table of `spec` up to `n_max` with the default
/// tau cap.
pub fn build_coeff_table(spec: &NewformSpec, n_max: usize) -> Result<CoeffTable> {
    build_coeff_table_capped(spec, n_max, DEFAULT_TAU_CAP)
}

pub fn build_coeff_table_capped(spec: &NewformSpec, n_max: usize, tau_cap: usize) -> Result<CoeffTable> {
    if n_max < 1 {
        return Err(Error::OutOfRange { index: 0, max: 0 });
    }
    if n_max > u32::MAX as usize / 2 {
        return Err(Error::Overflow(format!("n_max = {n_max} too large")));
    }
    match &spec.source {
        CoeffSource::RamanujanTau => {
            let tau = tau_coefficients_capped(n_max, tau_cap)?;
            Ok(CoeffTable::from_prime_coefficients(spec.clone(), n_max, |p| {
                tau[p as usize] as f64 / (p as f64).powf(5.5)
            }))
        }
        CoeffSource::EllipticCurve(curve) => {
            for q in crate::primes::prime_divisors(spec.level) {
                let t = curve.trace_of_frobenius(q);
                if !curve.is_bad_prime(q) || t.abs() != 1 {
                    return Err(Error::UnsupportedSpec(format!(
                        "reduction at {q} | N is not multiplicative for this model (a_p = {t})"
                    )));
                }
            }
            let mut bad = None;
            let table = CoeffTable::from_prime_coefficients(spec.clone(), n_max, |p| {
                if spec.is_good_prime(p) && bad.is_none() && curve.is_bad_prime(p) {
                    bad = Some(p);
                }
                curve.trace_of_frobenius(p) as f64 / (p as f64).sqrt()
            });
            if let Some(p) = bad {
                return Err(Error::UnsupportedSpec(format!(
                    "model has bad reduction at {p} which does not divide the level {}",
                    spec.level
                )));
            }
            Ok(table)
        }
        CoeffSource::CoeffFile(path) => {
            let f = read_coeff_file(path)?;
            if (f.weight, f.level) != (spec.weight, spec.level) {
                return Err(Error::UnsupportedSpec(format!(
                    "file header (k = {}, N = {}) disagrees with spec (k = {}, N = {})",
                    f.weight, f.level, spec.weight, spec.level
                )));
            }
            if f.raw.len() <= n_max {
                return Err(Error::FileParse {
                    path: path.clone(),
                    line: f.raw.len() + 1,
                    msg: format!("file covers n <= {}, requested {n_max}", f.raw.len() - 1),
                });
            }
            let exponent = spec.normalization_exponent();
            let values: Vec<f64> = f.raw[..=n_max]
                .iter()
                .enumerate()
                .map(|(n, &c)| if n == 0 { 0.0 } else { c / (n as f64).powf(exponent) })
                .collect();
            CoeffTable::from_values(spec.clone(), values)
        }
    }
}

/// `theta` in `[0, pi]` with `a = 2 cos theta`.
pub fn theta_from_ap(p: u64, a_p: f64) -> Result<f64> {
    if a_p.abs() > 2.0 + 1e-9 || a_p.is_nan() {
        return Err(Error::DeligneViolation { p, value: a_p.abs() });
    }
    Ok((a_p / 2.0).clamp(-1.0, 1.0).acos())
}

/// Sato–Tate angles `(p, theta_p)` of the good primes in the table.
pub fn theta_angles(table: &CoeffTable) -> Result<Vec<(u64, f64)>> {
    table
        .good_primes()
        .map(|p| theta_from_ap(p, table.values[p as usize]).map(|t| (p, t)))
        .collect()
}
