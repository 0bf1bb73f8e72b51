//! Additive and multiplicative characters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

fn unit(k: u64, n: u64) -> Complex64 {
    // reduce to the first half-turn before calling sin/cos
    let k = k % n;
    let (s, c) = (std::f64::consts::TAU * k as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// e(k/p) = exp(2πik/p) for k < p.
#[derive(Clone, Debug)]
pub struct RootTable {
    p: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(field: &FieldCtx) -> Self {
        let p = field.p();
        let mut roots = vec![Complex64::new(1.0, 0.0); p as usize];
        for k in 1..=p / 2 {
            let z = unit(k, p);
            roots[k as usize] = z;
            roots[(p - k) as usize] = z.conj();
        }
        RootTable { p, roots }
    }
    /// e(x/p).
    pub fn e(&self, x: u64) -> Complex64 {
        self.roots[(x % self.p) as usize]
    }
}

/// Multiplicative character of order d, stored as root-of-unity indices.
#[derive(Clone, Debug)]
pub struct CharTable {
    field: FieldCtx,
    order: u64,
    idx: Vec<u64>,
}

pub fn mul_char(field: &FieldCtx, d: u64) -> Result<CharTable> {
    let pm1 = field.order();
    if d < 2 || pm1 % d != 0 {
        return Err(Error::NotDivisor { t: d, pm1 });
    }
    let mut idx = vec![0; field.p() as usize];
    for (x, slot) in idx.iter_mut().enumerate().skip(1) {
        *slot = field.dlog(x as u64) % d;
    }
    Ok(CharTable { field: field.clone(), order: d, idx })
}

impl CharTable {
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    /// Exponent k with χ(x) = e^{2πik/d}; None at 0.
    pub fn index(&self, x: u64) -> Option<u64> {
        let x = x % self.field.p();
        (x != 0).then(|| self.idx[x as usize])
    }
    pub fn value(&self, x: u64) -> Complex64 {
        match self.index(x) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => unit(k, self.order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::numeric::sum_c64;

    #[test]
    fn quadratic_character_is_legendre() {
        let f = make_field(101).unwrap();
        let chi = mul_char(&f, 2).unwrap();
        for x in 0..101 {
            assert!((chi.value(x).re - f.legendre(x) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_character_p7() {
        let f = make_field(7).unwrap();
        let chi = mul_char(&f, 3).unwrap();
        assert_eq!(chi.index(1), Some(0));
        assert_eq!(chi.index(f.pow_g(3)), Some(0));
        assert_eq!(chi.index(f.g()), Some(1));
        assert!(mul_char(&f, 4).is_err());
    }

    #[test]
    fn multiplicative_and_orthogonal() {
        let f = make_field(31).unwrap();
        for d in [2u64, 3, 5, 6, 10, 15, 30] {
            let chi = mul_char(&f, d).unwrap();
            for x in 1..31 {
                for y in 1..31 {
                    let lhs = chi.value(f.mul(x, y));
                    assert!((lhs - chi.value(x) * chi.value(y)).norm() < 1e-12);
                }
            }
            assert!(sum_c64((1..31).map(|x| chi.value(x))).norm() < 1e-12);
            // exact order d
            let gk = chi.index(f.g()).unwrap();
            assert_eq!(num_integer::gcd(gk, d), 1);
        }
    }

    #[test]
    fn roots() {
        let f = make_field(13).unwrap();
        let r = RootTable::new(&f);
        let s = sum_c64((0..13).map(|k| r.e(k)));
        assert!(s.norm() < 1e-12);
        for k in 0..13 {
            assert!((r.e(k) * r.e(13 - k) - 1.0).norm() < 1e-14);
        }
    }
}
