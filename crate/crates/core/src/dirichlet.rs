//! Dirichlet coefficients of `-L'/L` and the shifted prime-power sum.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::newform::{CoeffTable, NewformSpec};
use crate::primes::Sieve;
use crate::summation::KahanSum;

/// Coefficients `Lambda_L(n)` of `-L'/L(s, f) = sum Lambda_L(n) n^{-s}`.
///
/// At a good prime `Lambda_L(p^r) = c_r log p` where `c_r = alpha^r + beta^r`
/// are power sums of the Satake parameters; at a bad prime
/// `Lambda_L(p^r) = a_p^r log p`.
#[derive(Debug, Clone)]
pub struct VonMangoldtTable {
    spec: NewformSpec,
    lambda_l: Vec<f64>,
    ln: Vec<f64>,
    sieve: Arc<Sieve>,
    coeffs_ap: Vec<f64>,
}

pub fn build_von_mangoldt(table: &CoeffTable) -> VonMangoldtTable {
    let n_max = table.max_index();
    let sieve = Arc::clone(table.sieve());
    let mut lambda_l = vec![0.0; n_max + 1];
    let mut ln = vec![0.0; n_max + 1];
    let mut coeffs_ap = vec![0.0; n_max + 1];
    for &p in sieve.primes() {
        let p = p as usize;
        let ap = table.values()[p];
        coeffs_ap[p] = ap;
        let log_p = (p as f64).ln();
        let good = table.spec().is_good_prime(p as u64);
        // c_0 = 2, c_1 = a_p
        let (mut prev, mut cur) = (2.0, ap);
        let mut bad_pow = ap;
        let mut q = p;
        loop {
            lambda_l[q] = if good { cur } else { bad_pow } * log_p;
            ln[q] = (q as f64).ln();
            if q > n_max / p {
                break;
            }
            q *= p;
            (prev, cur) = (cur, ap * cur - prev);
            bad_pow *= ap;
        }
    }
    VonMangoldtTable { spec: table.spec().clone(), lambda_l, ln, sieve, coeffs_ap }
}

/// `Psi_{L_lambda}(x)` with its decomposition into the prime sums
/// `psi1 = 2 sum a_p^2 log^2 p`, `psi2 = 2 sum a_p^2 log^2 p cos(lambda log p)`
/// and the prime-power (`r >= 2`) remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub x: f64,
    pub lambda: f64,
    pub value: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub remainder: f64,
}

impl VonMangoldtTable {
    pub fn spec(&self) -> &NewformSpec {
        &self.spec
    }

    pub fn max_index(&self) -> usize {
        self.lambda_l.len() - 1
    }

    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    /// `Lambda_L(n)`; zero off prime powers.
    pub fn get(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.lambda_l[n])
    }

    pub fn values(&self) -> &[f64] {
        &self.lambda_l
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_index() {
            return Err(Error::OutOfRange { index: n as u64, max: self.max_index() as u64 });
        }
        Ok(())
    }

    /// `Lambda_{L_lambda}(n) = 2 Lambda_L(n) cos((lambda / 2) log n)`.
    pub fn lambda_shifted(&self, n: usize, lambda: f64) -> Result<f64> {
        self.check(n)?;
        Ok(self.shifted_unchecked(n, lambda))
    }

    #[inline]
    fn shifted_unchecked(&self, n: usize, lambda: f64) -> f64 {
        let l = self.lambda_l[n];
        if l == 0.0 {
            0.0
        } else {
            2.0 * l * (0.5 * lambda * self.ln[n]).cos()
        }
    }

    /// Exact `Psi_{L_lambda}(x) = sum_{n <= x} Lambda_{L_lambda}(n)^2`,
    /// accumulated in ascending `n` with compensation.
    pub fn psi(&self, x: f64, lambda: f64) -> Result<PsiValue> {
        let zero = PsiValue { x, lambda, value: 0.0, psi1: 0.0, psi2: 0.0, remainder: 0.0 };
        if x.is_nan() || x < 2.0 {
            return Ok(zero);
        }
        let top = x.floor();
        if top > self.max_index() as f64 {
            return Err(Error::OutOfRange { index: top as u64, max: self.max_index() as u64 });
        }
        let top = top as usize;
        let (mut total, mut psi1, mut psi2, mut rem) =
            (KahanSum::new(), KahanSum::new(), KahanSum::new(), KahanSum::new());
        for n in 2..=top {
            let l = self.lambda_l[n];
            if l == 0.0 {
                continue;
            }
            let shifted = self.shifted_unchecked(n, lambda);
            total.add(shifted * shifted);
            if self.sieve.is_prime(n) {
                let base = 2.0 * l * l;
                psi1.add(base);
                psi2.add(base * (lambda * self.ln[n]).cos());
            } else {
                rem.add(shifted * shifted);
            }
        }
        Ok(PsiValue {
            x,
            lambda,
            value: total.value(),
            psi1: psi1.value(),
            psi2: psi2.value(),
            remainder: rem.value(),
        })
    }

    /// `a_p` at a prime `p <= max_index` (zero elsewhere).
    pub fn prime_coefficient(&self, p: usize) -> f64 {
        self.coeffs_ap.get(p).copied().unwrap_or(0.0)
    }
}

/// Free-function form of [`VonMangoldtTable::lambda_shifted`].
pub fn lambda_l_shifted(vm: &VonMangoldtTable, n: usize, lambda: f64) -> Result<f64> {
    vm.lambda_shifted(n, lambda)
}

/// Free-function form of [`VonMangoldtTable::psi`].
pub fn psi_l_lambda(vm: &VonMangoldtTable, x: f64, lambda: f64) -> Result<PsiValue> {
    vm.psi(x, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newform::build_coeff_table;

    fn delta_vm(n: usize) -> VonMangoldtTable {
        build_von_mangoldt(&build_coeff_table(&NewformSpec::delta(), n).unwrap())
    }

    #[test]
    fn support_and_low_powers() {
        let t = build_coeff_table(&NewformSpec::delta(), 100).unwrap();
        let vm = build_von_mangoldt(&t);
        assert_eq!(vm.get(6).unwrap(), 0.0);
        assert_eq!(vm.get(1).unwrap(), 0.0);
        let a2 = t.get(2).unwrap();
        assert!((vm.get(2).unwrap() - a2 * 2f64.ln()).abs() < 1e-15);
        assert!((vm.get(4).unwrap() - (a2 * a2 - 2.0) * 2f64.ln()).abs() < 1e-14);
        assert!(matches!(vm.get(101), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn power_sums_match_satake_expansion() {
        // -d/ds log((1 - a p^-s)(1 - b p^-s)) has p^{-rs} coefficient (a^r + b^r) log p
        for phi in [0.1_f64, 0.7, 1.3, 2.9] {
            let ap = 2.0 * phi.cos();
            let (mut prev, mut cur) = (2.0, ap);
            for r in 1..12 {
                let satake = 2.0 * (r as f64 * phi).cos();
                assert!((cur - satake).abs() < 1e-12, "r = {r}");
                (prev, cur) = (cur, ap * cur - prev);
            }
        }
    }

    #[test]
    fn bad_prime_powers() {
        let t = build_coeff_table(&NewformSpec::curve_11a2(), 2000).unwrap();
        let vm = build_von_mangoldt(&t);
        let a11 = t.get(11).unwrap();
        assert!((vm.get(121).unwrap() - a11 * a11 * 11f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn shifted_examples() {
        let vm = delta_vm(50);
        assert_eq!(vm.lambda_shifted(1, 3.0).unwrap(), 0.0);
        assert!((vm.lambda_shifted(7, 0.0).unwrap() - 2.0 * vm.get(7).unwrap()).abs() < 1e-15);
        let l = std::f64::consts::PI / 4f64.ln();
        assert!(vm.lambda_shifted(4, l).unwrap().abs() < 1e-15);
    }

    #[test]
    fn psi_decomposition_exact() {
        let vm = delta_vm(20_000);
        for lambda in [0.0, 0.5, 1.0, 3.7] {
            let v = vm.psi(20_000.0, lambda).unwrap();
            let sum = v.psi1 + v.psi2 + v.remainder;
            assert!((v.value - sum).abs() <= 1e-9 * v.value, "lambda = {lambda}");
        }
        assert_eq!(vm.psi(1.5, 1.0).unwrap().value, 0.0);
        assert!(matches!(vm.psi(20_001.0, 1.0), Err(Error::OutOfRange { .. })));
    }
}
