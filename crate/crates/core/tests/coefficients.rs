mod common;

use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use shiftpair::newform::{build_coeff_table, tau_coefficients, tau_coefficients_capped, CoeffTable, NewformSpec};
use shiftpair::Error;

#[test]
fn tau_matches_eta_product() {
    let n = 1000;
    let oracle = common::eta_product(&[(1, 24)], n);
    let tau = tau_coefficients(n).unwrap();
    for k in 1..=n {
        assert_eq!(BigInt::from(tau[k]), oracle[k], "tau({k})");
    }
}

#[test]
fn curve_11a_matches_eta_product() {
    let n = 1000;
    let oracle = common::eta_product(&[(1, 2), (11, 2)], n);
    let table = build_coeff_table(&NewformSpec::curve_11a2(), n).unwrap();
    for k in 1..=n {
        let raw = (table.values()[k] * (k as f64).sqrt()).round() as i64;
        assert_eq!(BigInt::from(raw), oracle[k], "a_{k}");
    }
}

#[test]
fn tau_cap_enforced() {
    assert!(matches!(tau_coefficients_capped(2000, 1000), Err(Error::Overflow(_))));
}

#[test]
fn tau_large_index_known_values() {
    let tau = tau_coefficients(100_000).unwrap();
    // Ramanujan congruence tau(n) = sigma_11(n) mod 691
    for n in [97usize, 1009, 65_536, 99_991, 100_000] {
        let mut sigma: i128 = 0;
        for d in 1..=n {
            if n % d == 0 {
                sigma = (sigma + (0..11).fold(1i128, |acc, _| acc * (d as i128 % 691) % 691)) % 691;
            }
        }
        assert_eq!(tau[n].rem_euclid(691), sigma, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coprime_products_multiply(a in 1usize..300, b in 1usize..300) {
        let table = delta_table();
        prop_assume!(num_integer_gcd(a, b) == 1);
        let lhs = table.values()[a * b];
        let rhs = table.values()[a] * table.values()[b];
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }
}

fn num_integer_gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn delta_table() -> &'static CoeffTable {
    static T: OnceLock<CoeffTable> = OnceLock::new();
    T.get_or_init(|| build_coeff_table(&NewformSpec::delta(), 90_000).unwrap())
}
