//! Seeded synthetic inputs: conjugation-symmetric zero sets and coefficient
//! tables with Sato–Tate distributed prime angles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::newform::{CoeffTable, NewformSpec};
use crate::sato_tate::st_inverse_cdf;
use crate::zeros::LambdaZeroSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` positive ordinates on a jittered lattice of `(0, t_max)`, mirrored to
/// `2n` ordinates `+-gamma`.
pub fn symmetric_ordinates(n: usize, t_max: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let spacing = t_max / n as f64;
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let g = (k as f64 + r.gen_range(0.05..0.95)) * spacing;
        out.push(g);
        out.push(-g);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// A synthetic zero set with window `t_max` for shift `lambda`.
pub fn synthetic_lambda_set(n: usize, t_max: f64, lambda: f64, seed: u64) -> LambdaZeroSet {
    LambdaZeroSet::from_ordinates(NewformSpec::delta(), lambda, t_max, symmetric_ordinates(n, t_max, seed))
}

/// A level-1 table whose `a_p = 2 cos theta_p` with `theta_p` drawn i.i.d.
/// from the Sato–Tate measure, extended by the Hecke recurrence.
pub fn st_sampled_table(n_max: usize, seed: u64) -> CoeffTable {
    let mut r = rng(seed);
    CoeffTable::from_prime_coefficients(NewformSpec::delta(), n_max, |_| {
        2.0 * st_inverse_cdf(r.gen::<f64>()).cos()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_seeded() {
        let a = symmetric_ordinates(50, 100.0, 7);
        assert_eq!(a.len(), 100);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        for (x, y) in a.iter().zip(a.iter().rev()) {
            assert_eq!(*x, -*y);
        }
        assert_eq!(a, symmetric_ordinates(50, 100.0, 7));
        assert_ne!(a, symmetric_ordinates(50, 100.0, 8));
    }

    #[test]
    fn sampled_table_is_valid() {
        let t = st_sampled_table(2000, 3);
        t.validate().unwrap();
    }
}
