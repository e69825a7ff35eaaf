//! Smallest-prime-factor sieve and divisor counting.

/// Smallest prime factor for every integer in `[0, limit]`.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = p as usize * i;
                if p > si || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        Self { spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn smallest_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    /// Splits `n >= 2` as `p^e * rest` with `p` its smallest prime factor.
    pub fn split(&self, n: usize) -> (usize, u32, usize) {
        let p = self.spf[n] as usize;
        let mut rest = n;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        (p, e, rest)
    }

    /// `Some((p, r))` when `n = p^r` with `r >= 1`.
    pub fn prime_power(&self, n: usize) -> Option<(usize, u32)> {
        if n < 2 {
            return None;
        }
        let (p, e, rest) = self.split(n);
        (rest == 1).then_some((p, e))
    }

    pub fn factorize(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let (p, e, rest) = self.split(n);
            out.push((p, e));
            n = rest;
        }
        out
    }

    /// Number of primes `<= x`.
    pub fn prime_count(&self, x: usize) -> usize {
        self.primes.partition_point(|&p| p as usize <= x)
    }
}

/// Number of positive divisors of `n`.
pub fn sigma0(n: u64) -> u64 {
    assert!(n >= 1, "sigma0 is defined for n >= 1");
    let mut n = n;
    let mut count = 1;
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        count *= e + 1;
        d += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
