//! Point counting on elliptic curves over prime fields.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::primes::prime_divisors;

/// Integral Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl WeierstrassCurve {
    pub fn new(a: [i64; 5]) -> Self {
        Self { a1: a[0], a2: a[1], a3: a[2], a4: a[3], a6: a[4] }
    }

    fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = [self.a1, self.a2, self.a3, self.a4, self.a6].map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// `(c4, c6)` invariants.
    pub fn c_invariants(&self) -> (BigInt, BigInt) {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        (c4, c6)
    }

    /// Whether `p` divides the discriminant of this model.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        (self.discriminant() % BigInt::from(p)) == BigInt::from(0)
    }

    /// Primes dividing the discriminant (trial division, small models only).
    pub fn discriminant_primes(&self) -> Vec<u64> {
        let d = self.discriminant();
        let (_, digits) = d.to_u64_digits();
        match digits.as_slice() {
            [v] => prime_divisors(*v),
            _ => Vec::new(),
        }
    }

    fn reduce(v: i64, p: u64) -> u64 {
        v.rem_euclid(p as i64) as u64
    }

    /// `#E(F_p)` including the point at infinity, by exhaustive counting.
    /// Valid at any prime, including primes of bad reduction where it counts
    /// the points of the singular cubic.
    pub fn count_points_naive(&self, p: u64) -> u64 {
        let r = |v: i64| Self::reduce(v, p);
        if p <= 3 {
            let (a1, a2, a3, a4, a6) = (r(self.a1), r(self.a2), r(self.a3), r(self.a4), r(self.a6));
            let mut count = 1;
            for x in 0..p {
                for y in 0..p {
                    let lhs = (y * y + a1 * x * y + a3 * y) % p;
                    let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p;
                    if lhs == rhs {
                        count += 1;
                    }
                }
            }
            return count;
        }
        // odd p: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        let [b2, b4, b6, _] = self.b_invariants();
        let pb = BigInt::from(p);
        let m = |v: &BigInt| -> u64 {
            let r = ((v % &pb) + &pb) % &pb;
            r.to_u64_digits().1.first().copied().unwrap_or(0)
        };
        let (b2, b4, b6) = (m(&b2), m(&b4), m(&b6));
        let mut is_square = vec![false; p as usize];
        for y in 0..p {
            is_square[(y * y % p) as usize] = true;
        }
        let mut count = 1u64;
        for x in 0..p {
            let v = ((4 * x % p * x % p * x) % p + b2 * x % p * x % p + 2 * b4 % p * x % p + b6) % p;
            count += if v == 0 {
                1
            } else if is_square[v as usize] {
                2
            } else {
                0
            };
        }
        count
    }

    /// Trace of Frobenius `a_p = p + 1 - #E(F_p)`.
    pub fn trace_of_frobenius(&self, p: u64) -> i64 {
        if p < 1000 || self.is_bad_prime(p) {
            return p as i64 + 1 - self.count_points_naive(p) as i64;
        }
        let (c4, c6) = self.c_invariants();
        let pb = BigInt::from(p);
        let m = |v: BigInt| -> u64 {
            let r = ((v % &pb) + &pb) % &pb;
            r.to_u64_digits().1.first().copied().unwrap_or(0)
        };
        let a = m(-27 * c4);
        let b = m(-54 * c6);
        match (ShortCurve { a, b, p }).trace_bsgs() {
            Some(t) => t,
            None => p as i64 + 1 - self.count_points_naive(p) as i64,
        }
    }
}

/// `y^2 = x^3 + a x + b` over `F_p`, `p >= 5`, nonsingular.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ShortCurve {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pt {
    Inf,
    Aff(u64, u64),
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

/// Tonelli–Shanks square root of a quadratic residue.
fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if powm(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powm(n, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powm(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powm(z, q, p);
    let mut t = powm(n, q, p);
    let mut r = powm(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt, p);
            i += 1;
        }
        let b = powm(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b, p);
        t = mulm(t, c, p);
        r = mulm(r, b, p);
    }
    Some(r)
}

impl ShortCurve {
    fn add(&self, u: Pt, v: Pt) -> Pt {
        let p = self.p;
        match (u, v) {
            (Pt::Inf, q) | (q, Pt::Inf) => q,
            (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => {
                let slope = if x1 == x2 {
                    if (y1 + y2) % p == 0 {
                        return Pt::Inf;
                    }
                    let num = (3 * mulm(x1, x1, p) + self.a) % p;
                    mulm(num, invm(2 * y1 % p, p), p)
                } else {
                    mulm((y2 + p - y1) % p, invm((x2 + p - x1) % p, p), p)
                };
                let x3 = (mulm(slope, slope, p) + 2 * p - x1 - x2) % p;
                let y3 = (mulm(slope, (x1 + p - x3) % p, p) + p - y1) % p;
                Pt::Aff(x3, y3)
            }
        }
    }

    fn neg(&self, u: Pt) -> Pt {
        match u {
            Pt::Inf => Pt::Inf,
            Pt::Aff(x, y) => Pt::Aff(x, (self.p - y) % self.p),
        }
    }

    fn mul(&self, u: Pt, mut k: u64) -> Pt {
        let mut acc = Pt::Inf;
        let mut base = u;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    fn point_with_x(&self, x: u64) -> Option<Pt> {
        let p = self.p;
        let rhs = (mulm(mulm(x, x, p), x, p) + mulm(self.a, x, p) + self.b) % p;
        sqrt_mod(rhs, p).map(|y| Pt::Aff(x, y))
    }

    /// Some `n` in the Hasse interval with `n * pt = O`.
    fn multiple_in_hasse(&self, pt: Pt) -> Option<u64> {
        let p = self.p;
        let bound = (4 * p).isqrt();
        let m = bound.isqrt() + 1;
        let mut baby: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut cur = Pt::Inf;
        for j in 0..=m {
            if let Pt::Aff(x, _) = cur {
                baby.entry(x).or_default().push(j);
            }
            cur = self.add(cur, pt);
        }
        let stride = 2 * m + 1;
        let giant = self.mul(pt, stride);
        let steps = bound / stride + 1;
        let q = self.mul(pt, p + 1);
        // r = q - i * giant for i = -steps ..= steps
        let mut r = self.add(q, self.mul(giant, steps));
        let neg_giant = self.neg(giant);
        for i in -(steps as i64)..=(steps as i64) {
            let mut ts: Vec<i64> = Vec::new();
            match r {
                Pt::Inf => ts.push(i * stride as i64),
                Pt::Aff(x, _) => {
                    if let Some(js) = baby.get(&x) {
                        for &j in js {
                            let jp = self.mul(pt, j);
                            let base = i * stride as i64;
                            if jp == r {
                                ts.push(base + j as i64);
                            }
                            if self.neg(jp) == r {
                                ts.push(base - j as i64);
                            }
                        }
                    }
                }
            }
            for t in ts {
                if t.unsigned_abs() <= bound {
                    let n = (p as i64 + 1 - t) as u64;
                    if self.mul(pt, n) == Pt::Inf {
                        return Some(n);
                    }
                }
            }
            r = self.add(r, neg_giant);
        }
        None
    }

    fn order_dividing(&self, pt: Pt, n: u64) -> u64 {
        let mut ord = n;
        for q in prime_divisors(n) {
            while ord % q == 0 && self.mul(pt, ord / q) == Pt::Inf {
                ord /= q;
            }
        }
        ord
    }

    /// Trace via baby-step giant-step on a few points; `None` if the group
    /// order stays ambiguous.
    pub(crate) fn trace_bsgs(&self) -> Option<i64> {
        let p = self.p;
        let bound = (4 * p).isqrt();
        let (lo, hi) = (p + 1 - bound, p + 1 + bound);
        let mut lcm = 1u64;
        let mut tried = 0;
        let mut k = 0u64;
        while tried < 12 && k < 4 * p {
            let x = (k.wrapping_mul(2_654_435_761).wrapping_add(12_345)) % p;
            k += 1;
            let Some(pt) = self.point_with_x(x) else { continue };
            tried += 1;
            let n = self.multiple_in_hasse(pt)?;
            let ord = self.order_dividing(pt, n);
            lcm = lcm / gcd(lcm, ord) * ord;
            let first = lo.div_ceil(lcm) * lcm;
            if first + lcm > hi && first <= hi {
                return Some(p as i64 + 1 - first as i64);
            }
        }
        None
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    const E11: [i64; 5] = [0, -1, 1, -10, -20];

    #[test]
    fn discriminant_11a() {
        let e = WeierstrassCurve::new(E11);
        assert_eq!(e.discriminant(), BigInt::from(-161_051));
        assert_eq!(e.discriminant_primes(), vec![11]);
    }

    #[test]
    fn naive_matches_exhaustive_pairs() {
        let e = WeierstrassCurve::new(E11);
        for p in [5u64, 7, 13, 17, 19, 23, 29] {
            let mut count = 1;
            for x in 0..p as i64 {
                for y in 0..p as i64 {
                    let lhs = y * y + y;
                    let rhs = x * x * x - x * x - 10 * x - 20;
                    if (lhs - rhs).rem_euclid(p as i64) == 0 {
                        count += 1;
                    }
                }
            }
            assert_eq!(e.count_points_naive(p), count, "p = {p}");
        }
    }

    #[test]
    fn bsgs_agrees_with_naive() {
        let e = WeierstrassCurve::new(E11);
        let (c4, c6) = e.c_invariants();
        for &p in &[1009u64, 1013, 2003, 7919, 10007, 65_537, 99_991] {
            let pb = BigInt::from(p);
            let m = |v: BigInt| (((v % &pb) + &pb) % &pb).to_u64_digits().1.first().copied().unwrap_or(0);
            let sc = ShortCurve { a: m(-27 * c4.clone()), b: m(-54 * c6.clone()), p };
            let naive = p as i64 + 1 - e.count_points_naive(p) as i64;
            assert_eq!(sc.trace_bsgs().unwrap_or(naive), naive, "p = {p}");
        }
    }

    #[test]
    fn split_multiplicative_at_11() {
        // 11a1 has split multiplicative reduction at 11: a_11 = 1
        assert_eq!(WeierstrassCurve::new(E11).trace_of_frobenius(11), 1);
    }

    #[test]
    fn sqrt_mod_cases() {
        for p in [13u64, 17, 41, 97, 7681] {
            for n in 1..p {
                if let Some(r) = sqrt_mod(n, p) {
                    assert_eq!(mulm(r, r, p), n);
                }
            }
        }
    }
}
