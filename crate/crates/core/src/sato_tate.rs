//! Distribution of the angles `theta_p` (`a_p = 2 cos theta_p`) against the
//! Sato–Tate measure `(2/pi) sin^2 theta d theta`.

use std::f64::consts::PI;

use crate::asymptotics::{psi_main_term, ShiftParams};
use crate::dirichlet::VonMangoldtTable;
use crate::error::{Error, Result};
use crate::newform::{theta_from_ap, CoeffTable, NewformSpec};
use crate::summation::KahanSum;

pub const DEFAULT_BINS: usize = 512;
pub const MIN_PRIMES: usize = 100;

/// Sato–Tate mass of `[a, b]`.
pub fn st_measure(a: f64, b: f64) -> Result<f64> {
    if !(0.0 <= a && a <= b && b <= PI) {
        return Err(Error::BadInterval(a, b));
    }
    Ok((2.0 / PI) * ((b - a) / 2.0 - ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0))
}

/// `mu_ST([0, theta]) = (theta - sin theta cos theta) / pi`.
pub fn st_cdf(theta: f64) -> f64 {
    let t = theta.clamp(0.0, PI);
    (t - t.sin() * t.cos()) / PI
}

/// Inverse of [`st_cdf`] by safeguarded Newton iteration.
pub fn st_inverse_cdf(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (0.0, PI);
    let mut t = PI * u;
    for _ in 0..100 {
        let f = st_cdf(t) - u;
        if f.abs() < 1e-15 {
            break;
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = 2.0 / PI * t.sin().powi(2);
        let next = t - f / d;
        t = if d > 0.0 && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    t
}

/// `log(k N log x) / sqrt(log x)`, the relative scale of the effective error.
pub fn error_band(spec: &NewformSpec, x: f64) -> f64 {
    let lx = x.ln();
    (spec.weight as f64 * spec.level as f64 * lx).ln() / lx.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    pub x_cut: f64,
    pub prime_count: usize,
    /// Bin edges `0 = e_0 < ... < e_n = pi`.
    pub edges: Vec<f64>,
    pub empirical_mass: Vec<f64>,
    pub st_mass: Vec<f64>,
    pub sup_discrepancy: f64,
    pub second_moment_ratio: f64,
    pub error_band: f64,
}

/// Histogram of `theta_p` for good primes `p <= x_cut`.
pub fn distribution_report(table: &CoeffTable, x_cut: f64, n_bins: usize) -> Result<DistributionReport> {
    if x_cut > table.max_index() as f64 {
        return Err(Error::OutOfRange { index: x_cut as u64, max: table.max_index() as u64 });
    }
    let mut angles = Vec::new();
    let mut square = KahanSum::new();
    for p in table.good_primes().take_while(|&p| p as f64 <= x_cut) {
        let a = table.values()[p as usize];
        angles.push(theta_from_ap(p, a)?);
        square.add(a * a);
    }
    if angles.len() < MIN_PRIMES {
        return Err(Error::TooFewPrimes { x: x_cut, count: angles.len() });
    }
    let mut report = angle_report(&angles, n_bins)?;
    report.x_cut = x_cut;
    report.second_moment_ratio = square.value() / angles.len() as f64;
    report.error_band = error_band(table.spec(), x_cut);
    Ok(report)
}

/// Histogram and discrepancy of raw angles in `[0, pi]`.
///
/// `x_cut`, `error_band` are left at zero; `second_moment_ratio` is the mean
/// of `(2 cos theta)^2`.
pub fn angle_report(angles: &[f64], n_bins: usize) -> Result<DistributionReport> {
    if angles.len() < MIN_PRIMES {
        return Err(Error::TooFewPrimes { x: 0.0, count: angles.len() });
    }
    if n_bins == 0 {
        return Err(Error::Config("n_bins must be positive".into()));
    }
    let width = PI / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins).map(|k| if k == n_bins { PI } else { k as f64 * width }).collect();
    let mut counts = vec![0usize; n_bins];
    let mut square = KahanSum::new();
    for &t in angles {
        let k = ((t / width) as usize).min(n_bins - 1);
        counts[k] += 1;
        square.add(4.0 * t.cos().powi(2));
    }
    let total = angles.len() as f64;
    let empirical_mass: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let st_mass = edges
        .windows(2)
        .map(|e| st_measure(e[0], e[1]))
        .collect::<Result<Vec<_>>>()?;
    // sup over [e_i, e_j] of |emp - st| is max - min of the cumulative gap
    let (mut gap, mut hi, mut lo) = (KahanSum::new(), 0.0f64, 0.0f64);
    for (e, s) in empirical_mass.iter().zip(&st_mass) {
        gap.add(e - s);
        hi = hi.max(gap.value());
        lo = lo.min(gap.value());
    }
    Ok(DistributionReport {
        x_cut: 0.0,
        prime_count: angles.len(),
        edges,
        empirical_mass,
        st_mass,
        sup_discrepancy: (hi - lo).clamp(0.0, 1.0),
        second_moment_ratio: square.value() / total,
        error_band: 0.0,
    })
}

/// `Psi_{L_lambda}(x)` next to its two-term main part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiRatio {
    pub x: f64,
    pub lambda: f64,
    pub psi: f64,
    pub main: f64,
    pub ratio: f64,
    pub error_band: f64,
}

pub fn psi_prediction_ratio(vm: &VonMangoldtTable, x: f64, lambda: f64) -> Result<PsiRatio> {
    let psi = vm.psi(x, lambda)?.value;
    let main = psi_main_term(x, &ShiftParams::new(lambda.abs()));
    if main.abs() <= 1e-12 * x * x.ln() {
        return Err(Error::MainTermZero(x));
    }
    Ok(PsiRatio { x, lambda, psi, main, ratio: psi / main, error_band: error_band(vm.spec(), x) })
}
