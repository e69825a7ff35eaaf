//! Closed-form main terms and kernel integrals.
//!
//! Everything here is generic over the scalar type. Phases are reported in
//! `(-pi, pi]`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::newform::NewformSpec;
use crate::scalar::{wrap_phase, Real};

/// The shift `lambda` with its derived angles `theta = atan(lambda)` and
/// `phi = atan(lambda / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftParams<T> {
    pub lambda: T,
    pub theta: T,
    pub phi: T,
}

impl<T: Real> ShiftParams<T> {
    pub fn new(lambda: T) -> Self {
        assert!(lambda >= T::zero(), "shift must be non-negative");
        Self { lambda, theta: lambda.atan(), phi: (lambda / T::lit(2.0)).atan() }
    }
}

/// Amplitude and phase of the pair-correlation modulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrConstants<T> {
    pub amplitude: T,
    pub phase: T,
}

/// `(2/pi) (1 + cos(lambda log x - atan lambda) / sqrt(1 + lambda^2)) T x log x`.
pub fn double_sum_main_term<T: Real>(x: T, t: T, params: &ShiftParams<T>) -> T {
    let lx = x.ln();
    let one = T::one();
    let modulation = (params.lambda * lx - params.theta).cos() / (one + params.lambda.powi(2)).sqrt();
    T::lit(2.0) / T::PI() * (one + modulation) * t * x * lx
}

/// `2 x log x (1 + cos(lambda log x - theta) / sqrt(1 + lambda^2))`.
pub fn psi_main_term<T: Real>(x: T, params: &ShiftParams<T>) -> T {
    let lx = x.ln();
    let one = T::one();
    let modulation = (params.lambda * lx - params.theta).cos() / (one + params.lambda.powi(2)).sqrt();
    T::lit(2.0) * x * lx * (one + modulation)
}

/// Kernel `h_x(y)`: `-1/x` for `y <= x`, `3x^3/y^4` beyond.
pub fn kernel_h<T: Real>(x: T, y: T) -> T {
    if y <= x {
        -x.recip()
    } else {
        T::lit(3.0) * x.powi(3) / y.powi(4)
    }
}

/// `-4 / ((s + 1)(s - 3))`, equal to `w(s - 1)` with `w(u) = 4/(4 - u^2)`
/// continued from the imaginary axis.
pub fn weight_w<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    let one = T::one();
    let three = T::lit(3.0);
    if (s.re + one == T::zero() || s.re == three) && s.im == T::zero() {
        return Err(Error::PoleAt(format!("{:?}", s)));
    }
    let denom = (s + one) * (s - three);
    Ok(-Complex::new(T::lit(4.0), T::zero()) / denom)
}

/// `int_1^inf y log y h_x(y) dy / y = x log x / 2 + 7x/4 - 1`.
pub fn phi1_kernel_integral<T: Real>(x: T) -> T {
    x * x.ln() / T::lit(2.0) + T::lit(7.0) / T::lit(4.0) * x - T::one()
}

/// Closed form of `int_1^inf log y cos(lambda log y - theta) h_x(y) x dy`
/// split into its two pieces, plus the leading-order approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi2Integral<T> {
    /// `-int_1^x log y cos(lambda log y - theta) dy`.
    pub inner: T,
    /// `3x^3 int_x^inf y^-3 log y cos(lambda log y - theta) dy`.
    pub outer: T,
    /// `inner + outer`.
    pub total: T,
    /// The `x log x` part of `total`.
    pub leading: T,
}

pub fn phi2_kernel_integral<T: Real>(x: T, params: &ShiftParams<T>) -> Phi2Integral<T> {
    let (one, two, three, four) = (T::one(), T::lit(2.0), T::lit(3.0), T::lit(4.0));
    let l = params.lambda;
    let l2 = l * l;
    let lx = x.ln();
    let arg = l * lx - params.theta;
    let (s, c) = arg.sin_cos();
    let d1 = one + l2;
    let d4 = four + l2;

    let inner = -x / d1 * ((lx - (one - l2) / d1) * c + (l * lx - two * l / d1) * s)
        + (three * l2 - one) / d1.powf(T::lit(2.5));
    let outer = three * x / d4 * ((two * lx + (four - l2) / d4) * c - (l * lx + four * l / d4) * s);
    let leading = x
        * lx
        * (-(arg - params.theta).cos() / d1.sqrt() + three * (arg + params.phi).cos() / d4.sqrt());
    Phi2Integral { inner, outer, total: inner + outer, leading }
}

/// `A_lambda` and `theta_lambda` from their closed forms.
pub fn pair_corr_constants<T: Real>(lambda: T) -> PairCorrConstants<T> {
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let l2 = lambda * lambda;
    let amplitude = two / (l2 + one) * ((T::lit(16.0) * l2 + one) / (l2 + four)).sqrt();
    let phase = (lambda * (l2 - T::lit(5.0)) / (two * (two * l2 * l2 + T::lit(6.0) * l2 + one))).atan();
    PairCorrConstants { amplitude, phase }
}

/// `1 - 2/(1+l^2) cos(l L - 2 theta) + 6/sqrt((1+l^2)(4+l^2)) cos(l L - theta + phi)`.
pub fn recombine_trig<T: Real>(lambda: T, log_x: T) -> T {
    let p = ShiftParams::new(lambda);
    let l2 = lambda * lambda;
    let (one, two) = (T::one(), T::lit(2.0));
    let c1 = -two / (one + l2);
    let c2 = T::lit(6.0) / ((one + l2) * (T::lit(4.0) + l2)).sqrt();
    one + c1 * (lambda * log_x - two * p.theta).cos() + c2 * (lambda * log_x - p.theta + p.phi).cos()
}

/// Amplitude and phase `(A, psi)` with
/// `c1 cos(u - 2 theta) + c2 cos(u - theta + phi) = A cos(u - psi)`,
/// obtained by summing the two phasors.
pub fn recombined_phasor<T: Real>(lambda: T) -> PairCorrConstants<T> {
    let p = ShiftParams::new(lambda);
    let l2 = lambda * lambda;
    let (one, two) = (T::one(), T::lit(2.0));
    let c1 = -two / (one + l2);
    let c2 = T::lit(6.0) / ((one + l2) * (T::lit(4.0) + l2)).sqrt();
    let z = Complex::from_polar(c1, -two * p.theta) + Complex::from_polar(c2, p.phi - p.theta);
    PairCorrConstants { amplitude: z.norm(), phase: wrap_phase(-z.arg()) }
}

/// Which normalization of the pair-correlation prediction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `2 alpha (1 + A cos(4 alpha lambda log T - theta_lambda))`.
    Paper,
    /// `alpha (1 + A cos(4 alpha lambda log T - theta_lambda))`, from dividing
    /// the weighted sum by `N(T) ~ (4/pi) T log T`.
    Derivation,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Derivation => "derivation",
        }
    }
}

pub fn pair_corr_prediction<T: Real>(alpha: T, t: T, lambda: T, convention: Convention) -> T {
    let c = pair_corr_constants(lambda);
    let bracket = T::one() + c.amplitude * (T::lit(4.0) * alpha * lambda * t.ln() - c.phase).cos();
    match convention {
        Convention::Paper => T::lit(2.0) * alpha * bracket,
        Convention::Derivation => alpha * bracket,
    }
}

/// `int u e^{z u} du = e^{z u} (u/z - 1/z^2)` evaluated between `a` and `b`;
/// `b = inf` is allowed when `Re z < 0`.
fn u_exp_integral<T: Real>(z: Complex<T>, a: T, b: T) -> Complex<T> {
    let anti = |u: T| {
        if u.is_infinite() {
            Complex::new(T::zero(), T::zero())
        } else {
            (z * u).exp() * (Complex::new(u, T::zero()) / z - (z * z).inv())
        }
    };
    anti(b) - anti(a)
}

/// Exact `int_1^inf h_x(y) y log y (1 + cos(lambda log y - theta)/sqrt(1+lambda^2)) dy`,
/// the kernel integral of the double-sum main term taken with the integrand
/// `y log y` on both sides of `y = x`.
pub fn kernel_main_integral<T: Real>(x: T, params: &ShiftParams<T>) -> T {
    let (zero, one, two, three) = (T::zero(), T::one(), T::lit(2.0), T::lit(3.0));
    let lx = x.ln();
    let amp = one / (one + params.lambda * params.lambda).sqrt();
    let rot = Complex::from_polar(one, -params.theta);
    // y log y dy = u e^{2u} du on [0, log x]; y^-3 log y dy = u e^{-2u} du beyond
    let piece = |beta: T, a: T, b: T| {
        let plain = u_exp_integral(Complex::new(beta, zero), a, b).re;
        let wave = (rot * u_exp_integral(Complex::new(beta, params.lambda), a, b)).re;
        plain + amp * wave
    };
    -piece(two, zero, lx) / x + three * x.powi(3) * piece(-two, lx, T::infinity())
}

/// `1 + 4/(4 + lambda^2) cos(lambda L)`, the `x log x` coefficient of
/// [`kernel_main_integral`] with `L = log x`.
pub fn kernel_bracket<T: Real>(lambda: T, log_x: T) -> T {
    let four = T::lit(4.0);
    T::one() + four / (four + lambda * lambda) * (lambda * log_x).cos()
}

/// `2 alpha (1 + 4/(4+lambda^2) cos(4 alpha lambda log T))`: the pair
/// correlation main term obtained from [`kernel_main_integral`] and
/// `N(T) ~ (4/pi) T log T`.
pub fn kernel_prediction<T: Real>(alpha: T, t: T, lambda: T) -> T {
    T::lit(2.0) * alpha * kernel_bracket(lambda, T::lit(4.0) * alpha * t.ln())
}

/// `c / log(N (|t| + k + 3))`, the width of the classical zero-free region
/// for a caller-supplied constant `c`.
pub fn zero_free_width<T: Real>(t: T, spec: &NewformSpec, c: T) -> T {
    let n = T::lit(spec.level as f64);
    let k = T::lit(spec.weight as f64);
    c / (n * (t.abs() + k + T::lit(3.0))).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn main_terms_at_zero_shift() {
        let p = ShiftParams::new(0.0);
        let (x, t) = (37.0_f64, 120.0);
        assert!((double_sum_main_term(x, t, &p) - 4.0 / PI * t * x * x.ln()).abs() < 1e-9);
        assert!((psi_main_term(x, &p) - 4.0 * x * x.ln()).abs() < 1e-11);
        assert_eq!(double_sum_main_term(1.0, t, &ShiftParams::new(2.0)), 0.0);
    }

    #[test]
    fn main_term_when_cosine_vanishes() {
        let p = ShiftParams::new(1.0);
        let x = (PI / 2.0 + p.theta).exp();
        let t = 10.0;
        assert!((double_sum_main_term(x, t, &p) - 2.0 / PI * t * x * x.ln()).abs() < 1e-12);
    }

    #[test]
    fn psi_main_large_shift() {
        let x: f64 = 1000.0;
        let v = psi_main_term(x, &ShiftParams::new(1e12));
        assert!((v / (2.0 * x * x.ln()) - 1.0).abs() < 1e-11);
        let p = ShiftParams::new(1.0);
        let lx = 1e4f64.ln();
        let expect = 2e4 * lx * (1.0 + (lx - PI / 4.0).cos() / 2f64.sqrt());
        assert!((psi_main_term(1e4, &p) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn kernel_branches() {
        assert_eq!(kernel_h(5.0, 5.0), -0.2);
        assert!((kernel_h(5.0f64, 10.0) - 3.0 / 80.0).abs() < 1e-16);
    }

    #[test]
    fn weight_examples() {
        let w = weight_w(Complex::new(1.0, 0.0)).unwrap();
        assert!((w - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let w = weight_w(Complex::new(1.0, 2.0)).unwrap();
        assert!((w - Complex::new(0.5, 0.0)).norm() < 1e-15);
        assert!(matches!(weight_w(Complex::new(3.0, 0.0)), Err(Error::PoleAt(_))));
        assert!(matches!(weight_w(Complex::new(-1.0_f32, 0.0)), Err(Error::PoleAt(_))));
        let s = Complex::new(0.3, -1.7);
        let alt = Complex::new(4.0, 0.0) / (Complex::new(4.0, 0.0) - (s - 1.0) * (s - 1.0));
        assert!((weight_w(s).unwrap() - alt).norm() < 1e-15);
    }

    #[test]
    fn phi1_values() {
        assert!((phi1_kernel_integral(1.0f64) - 0.75).abs() < 1e-15);
        assert!((phi1_kernel_integral(10.0_f64) - (5.0 * 10f64.ln() + 16.5)).abs() < 1e-12);
        assert!((phi1_kernel_integral(10.0_f64) - 28.012_925).abs() < 1e-6);
    }

    #[test]
    fn phi2_reduces_at_zero_shift() {
        for x in [1.5_f64, 2.0, 10.0, 1000.0] {
            let v = phi2_kernel_integral(x, &ShiftParams::new(0.0));
            assert!((v.total - phi1_kernel_integral(x)).abs() < 1e-12 * x);
        }
    }

    #[test]
    fn constants_at_special_shifts() {
        let c = pair_corr_constants(0.0_f64);
        assert_eq!((c.amplitude, c.phase), (1.0, 0.0));
        assert!(pair_corr_constants(5f64.sqrt()).phase.abs() < 1e-15);
        assert!((pair_corr_constants(1.0_f64).amplitude - (17.0_f64 / 5.0).sqrt()).abs() < 1e-15);
        assert!((pair_corr_constants(1.0_f64).amplitude - 1.843_908_9).abs() < 1e-7);
    }

    #[test]
    fn recombination_examples() {
        for l in [0.0, 1.0, 7.5, 100.0] {
            assert!((recombine_trig(0.0, l) - 2.0_f64).abs() < 1e-14);
        }
        let r = recombined_phasor(1.0_f64);
        assert!((r.amplitude - 3.4_f64.sqrt()).abs() < 1e-14);
        assert!((r.phase - (-2.0_f64 / 9.0).atan()).abs() < 1e-14);
    }

    #[test]
    fn predictions_at_zero_shift() {
        for a in [0.05_f64, 0.125, 0.4] {
            assert!((pair_corr_prediction(a, 5000.0, 0.0, Convention::Paper) - 4.0 * a).abs() < 1e-15);
            assert!((pair_corr_prediction(a, 5000.0, 0.0, Convention::Derivation) - 2.0 * a).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_free_width_examples() {
        let delta = NewformSpec::delta();
        assert!((zero_free_width(0.0, &delta, 1.0) - 1.0 / 15f64.ln()).abs() < 1e-16);
        let e = NewformSpec::curve_11a2();
        assert!((zero_free_width(100.0, &e, 1.0) - 1.0 / (11.0f64 * 105.0).ln()).abs() < 1e-16);
        assert!(zero_free_width(-50.0, &e, 1.0) > zero_free_width(60.0, &e, 1.0));
        let _ = E;
    }

    #[test]
    fn generic_f32_path() {
        let c = pair_corr_constants(1.0_f32);
        assert!((c.amplitude - (17.0_f32 / 5.0).sqrt()).abs() < 1e-6);
        let v = recombine_trig(2.0_f32, 3.0);
        let c = pair_corr_constants(2.0_f32);
        assert!((v - (1.0 + c.amplitude * (6.0 - c.phase).cos())).abs() < 1e-5);
    }

    #[test]
    fn kernel_main_integral_against_quadrature() {
        use crate::quadrature::{integrate, QuadOptions};
        for lambda in [0.0, 0.5, 1.0, 3.0] {
            let p = ShiftParams::new(lambda);
            for x in [2.0_f64, 10.0, 300.0] {
                let f = |y: f64| {
                    let ly = y.ln();
                    kernel_h(x, y) * y * ly * (1.0 + (lambda * ly - p.theta).cos() / (1.0 + lambda * lambda).sqrt())
                };
                let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, ..QuadOptions::default() };
                let inner = integrate(f, 1.0, x, &opts).unwrap().value;
                // substitute y = x / t on the tail
                let outer = integrate(|t: f64| f(x / t) * x / (t * t), 0.0, 1.0, &opts).unwrap().value;
                let closed = kernel_main_integral(x, &p);
                assert!((closed - inner - outer).abs() < 1e-9 * closed.abs().max(1.0), "x={x} l={lambda}");
            }
        }
    }

    #[test]
    fn kernel_bracket_is_leading_coefficient() {
        let p = ShiftParams::new(1.3);
        let x = 1e12_f64;
        let lx = x.ln();
        let ratio = kernel_main_integral(x, &p) / (x * lx);
        assert!((ratio - kernel_bracket(1.3, lx)).abs() < 0.1);
        assert_eq!(kernel_prediction(0.1, 100.0, 0.0), 0.4);
    }
}
