//! Compensated summation and exact-rational helpers.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Neumaier summation; feed terms in a fixed order for reproducible results.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum_f64(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = KahanSum::new();
    xs.into_iter().for_each(|x| s.add(x));
    s.value()
}

pub fn sum_c64(xs: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut s = ComplexSum::new();
    xs.into_iter().for_each(|x| s.add(x));
    s.value()
}

pub fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn big_pow(b: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

pub fn rat_pow(r: &BigRational, e: u32) -> BigRational {
    num_traits::pow(r.clone(), e as usize)
}

/// Float value of a rational without overflowing on huge numerators.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let (n, d) = if shift > 0 {
        (r.numer().clone(), r.denom().clone() << shift as usize)
    } else {
        (r.numer().clone() << (-shift) as usize, r.denom().clone())
    };
    let q = (n / d).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

pub fn int_to_f64(n: &BigInt) -> f64 {
    rat_to_f64(&BigRational::from_integer(n.clone()))
}

pub fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Exact floor of the square root.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

pub fn abs_rat(r: &BigRational) -> BigRational {
    r.abs()
}

pub fn is_unit(r: &BigRational) -> bool {
    r.is_one()
}

pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}

/// Format a float with 12 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().unwrap();
    let mag = v.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let t = format!("{:.*}", decimals, v);
        if t.contains('.') {
            t.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            t
        }
    } else {
        s
    }
}

pub fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}


/// Natural log of a positive integer, accurate for any size.
pub fn ln_int(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "log of non-positive integer");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift as usize).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rat(r: &BigRational) -> f64 {
    ln_int(r.numer()) - ln_int(r.denom())
}
