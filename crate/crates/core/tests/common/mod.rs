#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;

/// Coefficients of `q prod_n prod_(m, e) (1 - q^(m n))^e` for `n <= n_max`,
/// index 0 unused, by repeated multiplication of truncated series.
pub fn eta_product(factors: &[(usize, u32)], n_max: usize) -> Vec<BigInt> {
    // series in q for the product, shifted by one
    let mut c = vec![BigInt::from(0); n_max];
    c[0] = BigInt::from(1);
    for &(m, e) in factors {
        let mut step = m;
        while step < n_max {
            for _ in 0..e {
                for d in (step..n_max).rev() {
                    let v = c[d - step].clone();
                    c[d] -= v;
                }
            }
            step += m;
        }
    }
    let mut out = vec![BigInt::from(0); n_max + 1];
    out[1..].clone_from_slice(&c);
    out
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros")
}

pub fn zero_file(label: &str) -> PathBuf {
    data_dir().join(format!("{label}.zeros"))
}
