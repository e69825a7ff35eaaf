//! Exact coefficients of `q * prod (1 - q^n)^24` by multi-modular NTT.
//!
//! The series is built as `(prod (1 - q^n)^3)^8` with the cube taken from
//! Jacobi's identity, squared three times modulo several NTT primes, and
//! reconstructed by Garner's algorithm. A fifth prime is held back to
//! detect any coefficient outside the reconstruction range.

use crate::error::{Error, Result};

/// Largest index accepted by default; beyond it the reconstruction bound
/// is not guaranteed.
pub const DEFAULT_TAU_CAP: usize = 1_000_000;

trait NttPrime {
    const P: u64;
    const G: u64;
}

macro_rules! ntt_prime {
    ($name:ident, $p:expr, $g:expr) => {
        struct $name;
        impl NttPrime for $name {
            const P: u64 = $p;
            const G: u64 = $g;
        }
    };
}

ntt_prime!(P0, 998_244_353, 3);
ntt_prime!(P1, 1_811_939_329, 13);
ntt_prime!(P2, 2_013_265_921, 31);
ntt_prime!(P3, 2_113_929_217, 5);
ntt_prime!(PCheck, 469_762_049, 3);

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn ntt<M: NttPrime>(a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(M::G, (M::P - 1) / len as u64, M::P);
        if invert {
            w_len = pow_mod(w_len, M::P - 2, M::P);
        }
        let half = len / 2;
        // twiddles for this stage
        let mut tw = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            tw.push(w);
            w = w * w_len % M::P;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * tw[k] % M::P;
                lo[k] = if u + v >= M::P { u + v - M::P } else { u + v };
                hi[k] = if u >= v { u - v } else { u + M::P - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, M::P - 2, M::P);
        for x in a.iter_mut() {
            *x = *x * n_inv % M::P;
        }
    }
}

/// Residues of the coefficients of `prod (1 - q^n)^24` up to degree `deg`.
fn eta24_mod<M: NttPrime>(cube: &[i64], deg: usize) -> Vec<u64> {
    let size = (2 * deg + 1).next_power_of_two();
    let mut series: Vec<u64> = cube.iter().map(|&c| c.rem_euclid(M::P as i64) as u64).collect();
    for _ in 0..3 {
        let mut buf = vec![0u64; size];
        buf[..series.len()].copy_from_slice(&series);
        ntt::<M>(&mut buf, false);
        for x in buf.iter_mut() {
            *x = *x * *x % M::P;
        }
        ntt::<M>(&mut buf, true);
        buf.truncate(deg + 1);
        series = buf;
    }
    series
}

/// Coefficients of `prod (1 - q^n)^3` up to degree `deg` (Jacobi's identity).
fn eta_cube(deg: usize) -> Vec<i64> {
    let mut c = vec![0i64; deg + 1];
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e > deg {
            break;
        }
        let v = (2 * k + 1) as i64;
        c[e] = if k % 2 == 0 { v } else { -v };
        k += 1;
    }
    c
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

/// Ramanujan's `tau(n)` for `n` in `0..=n_max` (index 0 is 0).
pub fn tau_coefficients(n_max: usize) -> Result<Vec<i128>> {
    tau_coefficients_capped(n_max, DEFAULT_TAU_CAP)
}

pub fn tau_coefficients_capped(n_max: usize, cap: usize) -> Result<Vec<i128>> {
    if n_max > cap {
        return Err(Error::Overflow(format!("tau requested to n = {n_max}, configured cap {cap}")));
    }
    if n_max == 0 {
        return Ok(vec![0]);
    }
    let deg = n_max - 1;
    let cube = eta_cube(deg);
    let r0 = eta24_mod::<P0>(&cube, deg);
    let r1 = eta24_mod::<P1>(&cube, deg);
    let r2 = eta24_mod::<P2>(&cube, deg);
    let r3 = eta24_mod::<P3>(&cube, deg);
    let rc = eta24_mod::<PCheck>(&cube, deg);

    let (p0, p1, p2, p3) = (P0::P, P1::P, P2::P, P3::P);
    let inv01 = inv_mod(p0, p1);
    let inv02 = inv_mod(p0, p2);
    let inv12 = inv_mod(p1, p2);
    let inv03 = inv_mod(p0, p3);
    let inv13 = inv_mod(p1, p3);
    let inv23 = inv_mod(p2, p3);
    let modulus: u128 = p0 as u128 * p1 as u128 * p2 as u128 * p3 as u128;
    let half = modulus / 2;

    let mut out = vec![0i128; n_max + 1];
    for d in 0..=deg {
        let v0 = r0[d];
        let v1 = (r1[d] + p1 - v0 % p1) % p1 * inv01 % p1;
        let mut v2 = (r2[d] + p2 - v0 % p2) % p2 * inv02 % p2;
        v2 = (v2 + p2 - v1 % p2) % p2 * inv12 % p2;
        let mut v3 = (r3[d] + p3 - v0 % p3) % p3 * inv03 % p3;
        v3 = (v3 + p3 - v1 % p3) % p3 * inv13 % p3;
        v3 = (v3 + p3 - v2 % p3) % p3 * inv23 % p3;
        let x: u128 = v0 as u128
            + p0 as u128 * (v1 as u128 + p1 as u128 * (v2 as u128 + p2 as u128 * v3 as u128));
        let value: i128 = if x > half { x as i128 - modulus as i128 } else { x as i128 };
        if value.rem_euclid(PCheck::P as i128) as u64 != rc[d] {
            return Err(Error::Overflow(format!("coefficient of q^{} exceeds reconstruction range", d + 1)));
        }
        out[d + 1] = value;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_tau_values() {
        let t = tau_coefficients(12).unwrap();
        assert_eq!(&t[1..], &[1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]);
    }

    #[test]
    fn ntt_round_trip() {
        let mut a: Vec<u64> = (0..64).map(|i| (i * i + 7) as u64).collect();
        let orig = a.clone();
        ntt::<P2>(&mut a, false);
        ntt::<P2>(&mut a, true);
        assert_eq!(a, orig);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(tau_coefficients_capped(100, 10), Err(Error::Overflow(_))));
    }

    #[test]
    fn primes_have_large_two_adicity() {
        for (p, g) in [(P0::P, P0::G), (P1::P, P1::G), (P2::P, P2::G), (P3::P, P3::G), (PCheck::P, PCheck::G)] {
            assert_eq!((p - 1) % (1 << 23), 0);
            // generator of the full group: g^((p-1)/2) = -1
            assert_eq!(pow_mod(g, (p - 1) / 2, p), p - 1);
        }
    }
}
