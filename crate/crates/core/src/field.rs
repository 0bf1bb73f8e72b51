//! Prime field arithmetic with a dense discrete-log table.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_P: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

struct Inner {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    exp: Vec<u32>,
}

/// F_p together with its least primitive root. Cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (g={})", self.p(), self.g())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p()
    }
}
impl Eq for FieldCtx {}

pub fn make_field(p: u64) -> Result<FieldCtx> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p > MAX_P {
        return Err(Error::PrimeOutOfRange(p));
    }
    let pm1 = p - 1;
    let qs = prime_factors(pm1);
    let g = (2..p)
        .find(|&c| qs.iter().all(|&q| pow_mod(c, pm1 / q, p) != 1))
        .expect("a prime has a primitive root");
    let mut dlog = vec![0u32; p as usize];
    let mut exp = vec![0u32; pm1 as usize];
    let mut x = 1u64;
    for k in 0..pm1 {
        exp[k as usize] = x as u32;
        dlog[x as usize] = k as u32;
        x = x * g % p;
    }
    Ok(FieldCtx(Arc::new(Inner { p, g, dlog, exp })))
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn g(&self) -> u64 {
        self.0.g
    }
    pub fn order(&self) -> u64 {
        self.0.p - 1
    }
    /// Discrete log of a nonzero residue.
    pub fn dlog(&self, x: u64) -> u64 {
        debug_assert!(x != 0 && x < self.p());
        self.0.dlog[x as usize] as u64
    }
    /// g^k for any k.
    pub fn pow_g(&self, k: u64) -> u64 {
        self.0.exp[(k % self.order()) as usize] as u64
    }
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p() as i64) as u64
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p()
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p() - b) % self.p()
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p() - a) % self.p()
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p()
    }
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p())
    }
    /// Inverse of a nonzero residue; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p() != 0, "inverse of zero");
        let k = self.dlog(a % self.p());
        self.pow_g(self.order() - k)
    }
    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }
    pub fn legendre(&self, x: u64) -> i8 {
        let x = x % self.p();
        if x == 0 {
            0
        } else if self.dlog(x) % 2 == 0 {
            1
        } else {
            -1
        }
    }
    /// Least quadratic nonresidue.
    pub fn nonresidue(&self) -> u64 {
        (2..self.p()).find(|&x| self.legendre(x) == -1).unwrap()
    }
    /// A square root of a residue, if it exists.
    pub fn sqrt(&self, x: u64) -> Option<u64> {
        let x = x % self.p();
        if x == 0 {
            return Some(0);
        }
        let k = self.dlog(x);
        (k % 2 == 0).then(|| self.pow_g(k / 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of(x: u64, p: u64) -> u64 {
        let mut y = x % p;
        let mut k = 1;
        while y != 1 {
            y = y * x % p;
            k += 1;
        }
        k
    }

    #[test]
    fn least_primitive_roots() {
        assert_eq!(make_field(5).unwrap().g(), 2);
        assert_eq!(make_field(7).unwrap().g(), 3);
        for p in [3u64, 11, 13, 101, 1009, 4099] {
            let f = make_field(p).unwrap();
            assert_eq!(order_of(f.g(), p), p - 1);
            for c in 2..f.g() {
                assert!(order_of(c, p) < p - 1);
            }
        }
    }

    #[test]
    fn rejects_non_odd_primes() {
        assert_eq!(make_field(4).unwrap_err(), Error::NotOddPrime(4));
        assert!(make_field(2).is_err());
        assert!(make_field(9).is_err());
        assert!(make_field(1_048_583).is_err());
    }

    #[test]
    fn dlog_roundtrip() {
        let f = make_field(1009).unwrap();
        assert_eq!(f.dlog(1), 0);
        assert_eq!(f.dlog(f.g()), 1);
        for x in 1..1009 {
            assert_eq!(f.pow_g(f.dlog(x)), x);
            assert_eq!(f.mul(x, f.inv(x)), 1);
        }
    }

    #[test]
    fn order_test_up_to_8192() {
        for p in (3..8192u64).filter(|&p| is_prime(p)) {
            let f = make_field(p).unwrap();
            for q in prime_factors(p - 1) {
                assert_ne!(pow_mod(f.g(), (p - 1) / q, p), 1);
            }
        }
    }

    #[test]
    fn legendre_small() {
        let f = make_field(7).unwrap();
        assert_eq!(f.legendre(0), 0);
        assert_eq!(f.legendre(2), 1);
        assert_eq!(f.legendre(3), -1);
        for x in 1..7 {
            let sq = (1..7).any(|y| y * y % 7 == x);
            assert_eq!(f.legendre(x) == 1, sq);
        }
    }
}
