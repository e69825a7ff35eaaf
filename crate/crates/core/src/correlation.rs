//! Sums over zeros of `L_lambda`: the single sum `S(x) = sum x^rho`, its
//! Landau–Gonek main term, the double sum `sum x^(rho+rho')/(rho+rho')`,
//! the weighted double sum and the pair-correlation function `F_lambda`.
//!
//! Every pair loop runs over rows of the sorted ordinate array in fixed-size
//! chunks; the pairs `(i, j)` and `(j, i)` contribute identical terms, so only
//! `j >= i` is visited and off-diagonal terms are doubled.

use std::time::Instant;

use num_complex::{Complex, Complex64};

use crate::dirichlet::VonMangoldtTable;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_complex, QuadOptions};
use crate::scalar::Real;
use crate::summation::{reduce_complex, reduce_complex_lanes, ComplexKahan, KahanSum};
use crate::zeros::LambdaZeroSet;

pub const DEFAULT_PAIR_BUDGET: u128 = 4_000_000_000;
pub const DEFAULT_BIN_WIDTH: f64 = 1e-4;
const ROW_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSumOptions {
    /// Maximum term operations (ordered pairs times evaluation points) for
    /// one direct evaluation. Double sums check it per evaluation point.
    pub pair_budget: u128,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
    /// Whether the pair `rho = rho'` (same zero) is included.
    pub include_diagonal: bool,
}

impl Default for PairSumOptions {
    fn default() -> Self {
        Self { pair_budget: DEFAULT_PAIR_BUDGET, threads: 0, include_diagonal: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    SingleSum,
    LgCompare,
    DoubleSum,
    FLambda,
    WeightedDoubleSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Direct,
    Binned { bin_width: f64 },
    IntegralOracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Binned { .. } => "binned",
            Method::IntegralOracle => "integral_oracle",
        }
    }
}

/// Evaluated sums with the metadata of the run.
#[derive(Debug, Clone)]
pub struct CorrelationResult {
    pub kind: CorrelationKind,
    pub method: Method,
    /// `x` values or `alpha` values, matching `values`.
    pub points: Vec<f64>,
    pub values: Vec<Complex64>,
    pub window: f64,
    pub lambda: f64,
    pub zero_count: usize,
    pub pair_count: u128,
    pub runtime_ms: u128,
}

impl CorrelationResult {
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// Largest `|Im|` over the evaluated points.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn ordered_pairs(n: usize) -> u128 {
    (n as u128) * (n as u128)
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::PairBudgetExceeded { needed, budget });
    }
    Ok(())
}

/// `sum_k x^(1/2 + i gamma_k) = sqrt(x) sum_k e^(i gamma_k log x)`.
pub fn single_sum_kernel<T: Real>(ordinates: &[T], x: T) -> Complex<T> {
    let u = x.ln();
    let mut acc = ComplexKahan::new();
    for &g in ordinates {
        let (s, c) = (g * u).sin_cos();
        acc.add(Complex::new(c, s));
    }
    acc.value() * x.sqrt()
}

pub fn single_zero_sum(lzs: &LambdaZeroSet, x: f64) -> Complex64 {
    single_sum_kernel(lzs.ordinates(), x)
}

/// Nearest integer with ties resolved to the even neighbour.
pub fn nearest_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - x.trunc()).abs() == 0.5 && r % 2.0 != 0.0 {
        r - x.signum()
    } else {
        r
    }
}

/// `-(Lambda_{L_lambda}(n) / pi) sin(T log(x/n)) / log(x/n)`, continued to
/// `-Lambda T / pi` at `x = n`.
pub fn lg_main_term(shifted_coefficient: f64, window: f64, x: f64, n: f64) -> f64 {
    let u = (x / n).ln();
    let ratio = if u.abs() < 1e-12 { window } else { (window * u).sin() / u };
    -shifted_coefficient / std::f64::consts::PI * ratio
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgComparison {
    pub x: f64,
    pub nearest: u64,
    pub lhs: Complex64,
    pub main: f64,
}

/// The zero sum `S(x)` next to its Landau–Gonek main term.
pub fn landau_gonek_compare(lzs: &LambdaZeroSet, vm: &VonMangoldtTable, x: f64) -> Result<LgComparison> {
    let n = nearest_integer(x);
    if (x - x.round()).abs() < 1e-9 {
        return Err(Error::IntegerX(x));
    }
    if !(x > 1.0) {
        return Err(Error::Config(format!("x = {x} must exceed 1")));
    }
    let coefficient = vm.lambda_shifted(n as usize, lzs.lambda())?;
    let main = lg_main_term(coefficient, lzs.window(), x, n);
    Ok(LgComparison { x, nearest: n as u64, lhs: single_zero_sum(lzs, x), main })
}

/// True when consecutive `log x` differences agree to `1e-12`.
fn log_uniform(xs: &[f64]) -> bool {
    if xs.len() < 3 {
        return true;
    }
    let step = xs[1].ln() - xs[0].ln();
    xs.windows(2).all(|w| ((w[1].ln() - w[0].ln()) - step).abs() <= 1e-12 * step.abs().max(1.0))
}

/// Rotating phasors `e^{i s u_k}` for a grid of `u_k`.
struct PhaseWalker<T> {
    us: Vec<T>,
    uniform: bool,
}

impl<T: Real> PhaseWalker<T> {
    fn new(us: Vec<T>, uniform: bool) -> Self {
        Self { us, uniform }
    }

    #[inline]
    fn fill(&self, s: T, out: &mut [Complex<T>]) {
        if self.uniform && self.us.len() > 2 {
            let step = Complex::from_polar(T::one(), s * (self.us[1] - self.us[0]));
            let mut z = Complex::from_polar(T::one(), s * self.us[0]);
            for o in out.iter_mut() {
                *o = z;
                z = z * step;
            }
        } else {
            for (o, &u) in out.iter_mut().zip(&self.us) {
                *o = Complex::from_polar(T::one(), s * u);
            }
        }
    }
}

/// Direct pair sum `sum_{i,j} term(s_ij) e^{i s_ij u_k}` for every grid
/// point `u_k`, where `term` depends only on `s = g_i + g_j`.
fn pair_phase_sum<T, W>(ordinates: &[T], us: Vec<T>, uniform: bool, opts: &PairSumOptions, term: W) -> Vec<Complex<T>>
where
    T: Real,
    W: Fn(T) -> Complex<T> + Sync,
{
    let lanes = us.len();
    let walker = PhaseWalker::new(us, uniform);
    let n = ordinates.len();
    let two = T::lit(2.0);
    reduce_complex_lanes(n, lanes, ROW_CHUNK, opts.threads, |rows, acc: &mut [ComplexKahan<T>]| {
        let mut phases = vec![Complex::new(T::zero(), T::zero()); lanes];
        for i in rows {
            let gi = ordinates[i];
            let start = if opts.include_diagonal { i } else { i + 1 };
            for j in start..n {
                let s = gi + ordinates[j];
                let mut c = term(s);
                if j != i {
                    c = c * two;
                }
                walker.fill(s, &mut phases);
                for (a, &ph) in acc.iter_mut().zip(phases.iter()) {
                    a.add(c * ph);
                }
            }
        }
    })
}

/// Direct double sum `sum x^(rho+rho')/(rho+rho')` at each `x`, with
/// `rho + rho' = 1 + i s`.
pub fn double_sum_kernel<T: Real>(ordinates: &[T], xs: &[T], opts: &PairSumOptions) -> Vec<Complex<T>> {
    let us: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let uniform = log_uniform(&xs.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect::<Vec<_>>());
    let sums = pair_phase_sum(ordinates, us, uniform, opts, |s| {
        // 1 / (1 + i s)
        let d = T::one() + s * s;
        Complex::new(T::one() / d, -s / d)
    });
    sums.into_iter().zip(xs).map(|(z, &x)| z * x).collect()
}

/// `sum x^(rho+rho')/(rho+rho')` over all ordered pairs of `lzs`.
pub fn double_zero_sum(lzs: &LambdaZeroSet, x: f64, method: Method, opts: &PairSumOptions) -> Result<CorrelationResult> {
    match method {
        Method::Direct => double_zero_sum_grid(lzs, &[x], opts),
        Method::IntegralOracle => {
            let start = Instant::now();
            let v = double_sum_integral_oracle(lzs.ordinates(), lzs.window(), x, opts.include_diagonal)?;
            Ok(CorrelationResult {
                kind: CorrelationKind::DoubleSum,
                method,
                points: vec![x],
                values: vec![v],
                window: lzs.window(),
                lambda: lzs.lambda(),
                zero_count: lzs.len(),
                pair_count: ordered_pairs(lzs.len()),
                runtime_ms: start.elapsed().as_millis(),
            })
        }
        Method::Binned { .. } => Err(Error::Config("double sums have no binned method".into())),
    }
}

/// Direct double sums at several `x`. The pair budget bounds the ordered
/// pairs per evaluation point.
pub fn double_zero_sum_grid(lzs: &LambdaZeroSet, xs: &[f64], opts: &PairSumOptions) -> Result<CorrelationResult> {
    if let Some(&bad) = xs.iter().find(|&&x| !(x > 1.0)) {
        return Err(Error::Config(format!("double sum needs x > 1, got {bad}")));
    }
    let pairs = ordered_pairs(lzs.len());
    check_budget(pairs, opts.pair_budget)?;
    let start = Instant::now();
    let values = double_sum_kernel(lzs.ordinates(), xs, opts);
    Ok(CorrelationResult {
        kind: CorrelationKind::DoubleSum,
        method: Method::Direct,
        points: xs.to_vec(),
        values,
        window: lzs.window(),
        lambda: lzs.lambda(),
        zero_count: lzs.len(),
        pair_count: pairs,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// `int_0^x S(t)^2 dt / t` by adaptive quadrature in `u = log t`, panels no
/// wider than `pi / (4T)`.
///
/// Each pair contributes `int_0^x t^(rho+rho'-1) dt = x^(rho+rho')/(rho+rho')`,
/// so this equals the direct double sum for a finite zero set. Without the
/// diagonal, the `i = j` terms are subtracted in closed form.
pub fn double_sum_integral_oracle(ordinates: &[f64], window: f64, x: f64, include_diagonal: bool) -> Result<Complex64> {
    let n = ordinates.len();
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let reach = ordinates.iter().fold(window, |m, g| m.max(g.abs()));
    let top = x.ln();
    // tail below `bottom` is bounded by n^2 e^bottom
    let bottom = top - ((n as f64).ln() + 36.0);
    let opts = QuadOptions {
        abs_tol: 1e-9,
        rel_tol: 1e-12,
        max_width: Some(std::f64::consts::PI / (4.0 * reach.max(1.0))),
        max_depth: 30,
    };
    let r = integrate_complex(
        |u| {
            let mut acc = ComplexKahan::new();
            for &g in ordinates {
                let (s, c) = (g * u).sin_cos();
                acc.add(Complex64::new(c, s));
            }
            let z = acc.value();
            z * z * u.exp()
        },
        bottom,
        top,
        &opts,
    )?;
    let mut value = r.value;
    if !include_diagonal {
        let mut diag = ComplexKahan::new();
        for &g in ordinates {
            let s = Complex64::new(1.0, 2.0 * g);
            diag.add(Complex64::new(x, 0.0).powc(s) / s);
        }
        value -= diag.value();
    }
    Ok(value)
}

/// `sum x^(rho+rho'-1) w(rho+rho'-1) = sum x^{i s} 4/(4+s^2)`.
pub fn weighted_double_sum(lzs: &LambdaZeroSet, x: f64, opts: &PairSumOptions) -> Result<Complex64> {
    let pairs = ordered_pairs(lzs.len());
    check_budget(pairs, opts.pair_budget)?;
    let v = pair_phase_sum(lzs.ordinates(), vec![x.ln()], true, opts, |s| {
        Complex64::new(4.0 / (4.0 + s * s), 0.0)
    });
    Ok(v[0])
}

/// Both sides of the kernel identity behind the weighted sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCheck {
    /// `int_1^inf h_x(y) D(y) dy` by quadrature, `D` the direct double sum.
    pub assembled: Complex64,
    /// `x * weighted_double_sum(x)`.
    pub weighted: Complex64,
    /// `sum 1 / (x s (s + 1))` with `s = rho + rho'`.
    pub correction: Complex64,
}

impl KernelCheck {
    pub fn relative_gap(&self) -> f64 {
        let rhs = self.weighted + self.correction;
        (self.assembled - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE)
    }
}

/// Integrates the double sum against `h_x` and compares with the weighted sum.
pub fn kernel_integration_check(lzs: &LambdaZeroSet, x: f64, opts: &PairSumOptions) -> Result<KernelCheck> {
    let ords = lzs.ordinates();
    let pairs = ordered_pairs(ords.len());
    check_budget(pairs, opts.pair_budget)?;
    let serial = PairSumOptions { threads: 1, ..*opts };
    let reach = ords.iter().fold(lzs.window(), |m, g| m.max(g.abs())).max(1.0);
    let quad = QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-12,
        max_width: Some(std::f64::consts::PI / (4.0 * reach)),
        max_depth: 30,
    };
    let d = |y: f64| double_sum_kernel(ords, &[y], &serial)[0];
    let lx = x.ln();
    let inner = integrate_complex(|u| d(u.exp()) * (-u.exp() / x), 0.0, lx, &quad)?;
    let outer = integrate_complex(|u| d(u.exp()) * (3.0 * x.powi(3) * (-3.0 * u).exp()), lx, lx + 40.0, &quad)?;
    let weighted = weighted_double_sum(lzs, x, opts)? * x;
    let correction = pair_phase_sum(ords, vec![0.0], true, opts, |s| {
        let z = Complex64::new(1.0, s);
        (z * (z + 1.0)).inv() / x
    })[0];
    Ok(KernelCheck { assembled: inner.value + outer.value, weighted, correction })
}

/// Evaluates `F_lambda(alpha)` on a grid.
///
/// `F(alpha) = (1/N) sum_{pairs} T^{4 i alpha s} 4/(4 + s^2)` with
/// `s = gamma + gamma'` and `N = |lzs|`. The direct method falls back to
/// binning when `N^2 |alpha|` exceeds the budget.
pub fn f_lambda(lzs: &LambdaZeroSet, alphas: &[f64], method: Method, opts: &PairSumOptions) -> Result<CorrelationResult> {
    if lzs.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    if alphas.is_empty() || alphas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("alpha grid must be nonempty and ascending".into()));
    }
    let start = Instant::now();
    let n = lzs.len();
    let pairs = ordered_pairs(n);
    let log_t = lzs.window().ln();
    let method = match method {
        Method::Direct if pairs * alphas.len() as u128 > opts.pair_budget => Method::Binned { bin_width: DEFAULT_BIN_WIDTH },
        Method::IntegralOracle => return Err(Error::Config("F_lambda has no integral oracle".into())),
        m => m,
    };
    let freqs: Vec<f64> = alphas.iter().map(|a| 4.0 * a * log_t).collect();
    let raw = match method {
        Method::Direct => {
            let uniform = log_uniform(&alphas.iter().map(|a| a.exp()).collect::<Vec<_>>());
            pair_phase_sum(lzs.ordinates(), freqs, uniform, opts, |s| Complex64::new(4.0 / (4.0 + s * s), 0.0))
        }
        Method::Binned { bin_width } => binned_phase_sum(lzs.ordinates(), &freqs, bin_width, opts)?,
        Method::IntegralOracle => unreachable!(),
    };
    let values: Vec<Complex64> = raw.into_iter().map(|z| z / n as f64).collect();
    if let Some(z) = values.iter().find(|z| z.im.abs() > IMAG_TOL) {
        return Err(Error::InvariantViolation(format!(
            "F_lambda has imaginary part {:e}; the zero set is not conjugation symmetric",
            z.im
        )));
    }
    Ok(CorrelationResult {
        kind: CorrelationKind::FLambda,
        method,
        points: alphas.to_vec(),
        values,
        window: lzs.window(),
        lambda: lzs.lambda(),
        zero_count: n,
        pair_count: pairs,
        runtime_ms: start.elapsed().as_millis(),
    })
}

const SLAB_BINS: usize = 1 << 22;
const IMAG_TOL: f64 = 1e-9;

/// Histogram of `s = g_i + g_j` weighted by `4/(4+s^2)`, evaluated as
/// `sum_k b_k e^{i f s_k}` at bin centers `s_k = k * bin_width`. Centers sit
/// on a grid symmetric about zero, so a conjugation-symmetric zero set gives
/// a symmetric histogram. The `s` axis is processed in slabs so memory stays
/// bounded.
fn binned_phase_sum(ordinates: &[f64], freqs: &[f64], bin_width: f64, opts: &PairSumOptions) -> Result<Vec<Complex64>> {
    if !(bin_width > 0.0) {
        return Err(Error::Config(format!("bin width must be positive, got {bin_width}")));
    }
    let n = ordinates.len();
    let index = |s: f64| (s / bin_width).round() as i64;
    let k_min = index(2.0 * ordinates[0]);
    let total_bins = (index(2.0 * ordinates[n - 1]) - k_min + 1) as usize;
    let n_slabs = total_bins.div_ceil(SLAB_BINS);
    let lanes = freqs.len();
    let per_slab = crate::summation::chunked_map(n_slabs, 1, opts.threads, |slabs| {
        let mut acc = vec![ComplexKahan::new(); lanes];
        for slab in slabs {
            let first = k_min + (slab * SLAB_BINS) as i64;
            let count = SLAB_BINS.min(total_bins - slab * SLAB_BINS);
            let end = first + count as i64;
            let mut bins = vec![0.0f64; count];
            let s_lo = (first as f64 - 1.0) * bin_width;
            let s_hi = (end as f64 + 1.0) * bin_width;
            for i in 0..n {
                let gi = ordinates[i];
                let j0 = ordinates.partition_point(|&g| gi + g < s_lo);
                let start = j0.max(if opts.include_diagonal { i } else { i + 1 });
                for (j, &gj) in ordinates.iter().enumerate().skip(start) {
                    let s = gi + gj;
                    if s >= s_hi {
                        break;
                    }
                    let k = index(s);
                    if k < first || k >= end {
                        continue;
                    }
                    let w = 4.0 / (4.0 + s * s);
                    bins[(k - first) as usize] += if j == i { w } else { 2.0 * w };
                }
            }
            for (a, &f) in acc.iter_mut().zip(freqs) {
                let step = Complex64::from_polar(1.0, f * bin_width);
                let mut z = Complex64::new(0.0, 0.0);
                for (k, &b) in bins.iter().enumerate() {
                    // reseed the rotation every 1024 bins
                    if k % 1024 == 0 {
                        z = Complex64::from_polar(1.0, f * (first + k as i64) as f64 * bin_width);
                    }
                    if b != 0.0 {
                        a.add(z * b);
                    }
                    z *= step;
                }
            }
        }
        acc
    });
    let mut total = vec![ComplexKahan::new(); lanes];
    for slab in &per_slab {
        for (t, s) in total.iter_mut().zip(slab) {
            t.merge(s);
        }
    }
    Ok(total.iter().map(ComplexKahan::value).collect())
}

/// Direct `sum_{i, j}` over all ordered pairs without symmetry folding, used
/// as a reference in tests.
pub fn naive_pair_sum<F: Fn(f64, f64) -> Complex64>(ordinates: &[f64], term: F) -> Complex64 {
    let mut acc = ComplexKahan::new();
    for &a in ordinates {
        for &b in ordinates {
            acc.add(term(a, b));
        }
    }
    acc.value()
}

/// Plain `sum` of reals with compensation; re-exported for callers that
/// post-process correlation output.
pub fn compensated_sum(values: &[f64]) -> f64 {
    KahanSum::sum_iter(values.iter().copied())
}

/// Single sums for many `x` on a fixed chunking of the ordinates.
pub fn single_zero_sum_parallel(lzs: &LambdaZeroSet, x: f64, threads: usize) -> Complex64 {
    let u = x.ln();
    let ords = lzs.ordinates();
    reduce_complex(ords.len(), 4096, threads, |r, acc: &mut ComplexKahan<f64>| {
        for &g in &ords[r] {
            let (s, c) = (g * u).sin_cos();
            acc.add(Complex64::new(c, s));
        }
    }) * x.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newform::NewformSpec;

    fn set(ords: &[f64], window: f64) -> LambdaZeroSet {
        LambdaZeroSet::from_ordinates(NewformSpec::curve_11a2(), 1.0, window, ords.to_vec())
    }

    #[test]
    fn single_sum_conjugate_pair() {
        let x = 7.3;
        let t = 2.2;
        let z = single_zero_sum(&set(&[-t, t], 5.0), x);
        assert!((z.re - 2.0 * x.sqrt() * (t * x.ln()).cos()).abs() < 1e-13);
        assert!(z.im.abs() < 1e-13);
    }

    #[test]
    fn single_sum_four_terms() {
        let e = std::f64::consts::E;
        let z = single_zero_sum(&set(&[0.5, -0.5, 1.5, -1.5], 3.0), e);
        let expect = 2.0 * e.sqrt() * (0.5f64.cos() + 1.5f64.cos());
        assert!((z.re - expect).abs() < 1e-13);
        let near_one = single_zero_sum(&set(&[0.5, -0.5, 1.5, -1.5], 3.0), 1.0 + 1e-12);
        assert!((near_one.re - 4.0).abs() < 1e-9);
    }

    #[test]
    fn nearest_integer_ties_to_even() {
        assert_eq!(nearest_integer(2.5), 2.0);
        assert_eq!(nearest_integer(3.5), 4.0);
        assert_eq!(nearest_integer(3.49), 3.0);
        assert_eq!(nearest_integer(7.51), 8.0);
    }

    #[test]
    fn lg_main_term_limit() {
        let v = lg_main_term(1.7, 100.0, 5.0, 5.0);
        assert!((v + 1.7 * 100.0 / std::f64::consts::PI).abs() < 1e-12);
        let near = lg_main_term(1.7, 100.0, 5.0 * (1.0 + 1e-9), 5.0);
        assert!((near - v).abs() < 1e-6);
    }

    #[test]
    fn double_sum_conjugate_pair() {
        let (t, x) = (1.3, 4.2);
        let r = double_zero_sum(&set(&[-t, t], 3.0), x, Method::Direct, &PairSumOptions::default()).unwrap();
        let c = |s: f64| Complex64::new(x, 0.0).powc(Complex64::new(1.0, s)) / Complex64::new(1.0, s);
        let expect = c(2.0 * t) + c(-2.0 * t) + 2.0 * x;
        assert!((r.values[0] - expect).norm() < 1e-12);
        assert_eq!(r.pair_count, 4);
    }

    #[test]
    fn folding_matches_naive() {
        let ords = [-3.1, -1.7, -0.2, 0.9, 1.4, 2.8, 4.4];
        let x = 3.7;
        let folded = double_sum_kernel(&ords, &[x], &PairSumOptions::default())[0];
        let naive = naive_pair_sum(&ords, |a, b| {
            let s = Complex64::new(1.0, a + b);
            Complex64::new(x, 0.0).powc(s) / s
        });
        assert!((folded - naive).norm() < 1e-12 * naive.norm());
        let no_diag = double_sum_kernel(&ords, &[x], &PairSumOptions { include_diagonal: false, ..Default::default() })[0];
        let diag: Complex64 = ords
            .iter()
            .map(|&g| {
                let s = Complex64::new(1.0, 2.0 * g);
                Complex64::new(x, 0.0).powc(s) / s
            })
            .sum();
        assert!((folded - no_diag - diag).norm() < 1e-12 * naive.norm());
    }

    #[test]
    fn uniform_grid_matches_pointwise() {
        let ords: Vec<f64> = (0..40).map(|k| (k as f64 * 0.77).sin() * 20.0).collect();
        let xs: Vec<f64> = (0..25).map(|k| (0.5 + 0.1 * k as f64).exp()).collect();
        let grid = double_sum_kernel(&ords, &xs, &PairSumOptions::default());
        for (k, &x) in xs.iter().enumerate() {
            let single = double_sum_kernel(&ords, &[x], &PairSumOptions::default())[0];
            assert!((grid[k] - single).norm() < 1e-11 * single.norm().max(1.0));
        }
    }

    #[test]
    fn f_lambda_conjugate_pair() {
        let t = 2.0;
        let window = 10.0;
        let lz = set(&[-t, t], window);
        let alphas = [0.05, 0.1, 0.3];
        let r = f_lambda(&lz, &alphas, Method::Direct, &PairSumOptions::default()).unwrap();
        for (k, &a) in alphas.iter().enumerate() {
            let expect = 0.5 * (2.0 + 2.0 * (8.0 * a * t * window.ln()).cos() * 4.0 / (4.0 + 4.0 * t * t));
            assert!((r.values[k].re - expect).abs() < 1e-14);
            assert!(r.values[k].im.abs() < 1e-14);
        }
    }

    #[test]
    fn f_lambda_auto_switches_to_binned() {
        let lz = set(&[-1.0, 1.0], 5.0);
        let opts = PairSumOptions { pair_budget: 3, ..Default::default() };
        let r = f_lambda(&lz, &[0.1], Method::Direct, &opts).unwrap();
        assert!(matches!(r.method, Method::Binned { .. }));
        assert!(matches!(f_lambda(&set(&[], 5.0), &[0.1], Method::Direct, &opts), Err(Error::EmptyZeroSet)));
    }

    #[test]
    fn double_sum_budget() {
        let lz = set(&[-1.0, 1.0, 2.0], 5.0);
        let opts = PairSumOptions { pair_budget: 8, ..Default::default() };
        assert!(matches!(double_zero_sum(&lz, 2.0, Method::Direct, &opts), Err(Error::PairBudgetExceeded { .. })));
    }

    #[test]
    fn weighted_sum_conjugate_pair() {
        let (t, x) = (0.8, 3.0);
        let w = weighted_double_sum(&set(&[-t, t], 3.0), x, &PairSumOptions::default()).unwrap();
        let term = |s: f64| Complex64::new(x, 0.0).powc(Complex64::new(1.0, s)) * (4.0 / (4.0 + s * s));
        let expect = (term(2.0 * t) + term(-2.0 * t) + 2.0 * term(0.0)) / x;
        assert!((w - expect).norm() < 1e-13);
    }

    #[test]
    fn oracle_matches_direct_small() {
        let ords = [-2.9, -1.1, 0.4, 1.1, 2.9, 3.3];
        let lz = set(&ords, 4.0);
        for x in [1.5, 4.0, 9.0] {
            let d = double_zero_sum(&lz, x, Method::Direct, &PairSumOptions::default()).unwrap().values[0];
            let o = double_zero_sum(&lz, x, Method::IntegralOracle, &PairSumOptions::default()).unwrap().values[0];
            assert!((d - o).norm() < 1e-8 * d.norm(), "x = {x}: {d} vs {o}");
        }
    }
}
