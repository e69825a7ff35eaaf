//! Compensated summation and deterministic chunked reductions.
//!
//! Parallel reductions split the index space into fixed-size chunks whose
//! boundaries do not depend on the worker count. Each chunk produces a
//! compensated partial, and the partials are folded serially in chunk order,
//! so the result is bit-identical for any number of workers.

use std::ops::Range;

use num_complex::Complex;
use rayon::prelude::*;

use crate::scalar::Real;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), compensation: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }

    pub fn sum_iter<I: IntoIterator<Item = T>>(iter: I) -> T {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

/// Compensated accumulator for complex values (independent real/imaginary lanes).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexKahan<T> {
    re: KahanSum<T>,
    im: KahanSum<T>,
}

impl<T: Real> ComplexKahan<T> {
    pub fn new() -> Self {
        Self { re: KahanSum::new(), im: KahanSum::new() }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Runs `work` over fixed chunks of `0..len` on `threads` workers and returns
/// the per-chunk results in chunk order.
///
/// `threads == 0` uses the global rayon pool; `threads == 1` runs inline.
pub fn chunked_map<R, F>(len: usize, chunk: usize, threads: usize, work: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    let n_chunks = len.div_ceil(chunk);
    let range = |c: usize| c * chunk..((c + 1) * chunk).min(len);
    match threads {
        1 => (0..n_chunks).map(|c| work(range(c))).collect(),
        0 => (0..n_chunks).into_par_iter().map(|c| work(range(c))).collect(),
        n => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool construction");
            pool.install(|| (0..n_chunks).into_par_iter().map(|c| work(range(c))).collect())
        }
    }
}

/// Deterministic compensated complex reduction over `0..len`.
pub fn reduce_complex<T, F>(len: usize, chunk: usize, threads: usize, work: F) -> Complex<T>
where
    T: Real,
    F: Fn(Range<usize>, &mut ComplexKahan<T>) + Sync + Send,
{
    let partials = chunked_map(len, chunk, threads, |r| {
        let mut acc = ComplexKahan::new();
        work(r, &mut acc);
        acc
    });
    let mut total = ComplexKahan::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

/// Deterministic compensated reduction of a vector of complex lanes (one per
/// grid point) over `0..len`.
pub fn reduce_complex_lanes<T, F>(
    len: usize,
    lanes: usize,
    chunk: usize,
    threads: usize,
    work: F,
) -> Vec<Complex<T>>
where
    T: Real,
    F: Fn(Range<usize>, &mut [ComplexKahan<T>]) + Sync + Send,
{
    let partials = chunked_map(len, chunk, threads, |r| {
        let mut acc = vec![ComplexKahan::new(); lanes];
        work(r, &mut acc);
        acc
    });
    let mut total = vec![ComplexKahan::new(); lanes];
    for p in &partials {
        for (t, q) in total.iter_mut().zip(p) {
            t.merge(q);
        }
    }
    total.iter().map(ComplexKahan::value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        acc.add(-1.0e16);
        assert_eq!(acc.value(), 1000.0);
    }

    #[test]
    fn neumaier_handles_large_later_term() {
        let v = [1.0, 1.0e100, 1.0, -1.0e100];
        assert_eq!(KahanSum::sum_iter(v), 2.0);
    }

    #[test]
    fn chunked_reduction_independent_of_workers() {
        let f = |r: Range<usize>, acc: &mut ComplexKahan<f64>| {
            for i in r {
                let x = i as f64 * 0.37;
                acc.add(Complex::new(x.sin() * 1e3, x.cos() / (1.0 + x)));
            }
        };
        let serial = reduce_complex(100_003, 97, 1, f);
        for threads in [0, 2, 3, 8] {
            assert_eq!(reduce_complex(100_003, 97, threads, f), serial);
        }
    }

    #[test]
    fn f32_accumulator() {
        let s: f32 = KahanSum::sum_iter((0..100_000).map(|_| 0.1_f32));
        assert!((s - 10_000.0).abs() < 1e-2);
    }
}
