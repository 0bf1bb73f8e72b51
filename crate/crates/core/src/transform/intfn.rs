use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::FieldCtx;
use crate::sets::SetFp;

/// Integer values over a structural denominator: f(x) = values[x] / denom.
#[derive(Clone, Debug, PartialEq)]
pub struct IntFn {
    field: FieldCtx,
    values: Vec<BigInt>,
    denom: BigUint,
}

impl IntFn {
    pub fn new(field: &FieldCtx, values: Vec<BigInt>, denom: BigUint) -> Self {
        assert_eq!(values.len() as u64, field.p(), "IntFn needs exactly p values");
        assert!(!denom.is_zero(), "zero denominator");
        IntFn { field: field.clone(), values, denom }
    }
    pub fn from_ints(field: &FieldCtx, values: Vec<BigInt>) -> Self {
        Self::new(field, values, BigUint::one())
    }
    pub fn from_i64(field: &FieldCtx, values: &[i64]) -> Self {
        Self::from_ints(field, values.iter().map(|&v| BigInt::from(v)).collect())
    }
    pub fn from_fn(field: &FieldCtx, f: impl Fn(u64) -> i64) -> Self {
        Self::from_ints(field, (0..field.p()).map(|x| BigInt::from(f(x))).collect())
    }
    pub fn zero(field: &FieldCtx) -> Self {
        Self::from_ints(field, vec![BigInt::zero(); field.p() as usize])
    }
    pub fn delta(field: &FieldCtx, at: u64) -> Self {
        Self::from_fn(field, |x| (x == at % field.p()) as i64)
    }
    pub fn indicator(set: &SetFp) -> Self {
        let m = set.mask();
        Self::from_fn(set.field(), |x| m[x as usize] as i64)
    }
    /// f_A = A − |A|/p, stored as (p·A − |A|)/p.
    pub fn balanced(set: &SetFp) -> Self {
        let p = set.p() as i64;
        let n = set.len() as i64;
        let m = set.mask();
        let v = (0..p).map(|x| BigInt::from(p * m[x as usize] as i64 - n)).collect();
        Self::new(set.field(), v, BigUint::from(p as u64))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    pub fn p(&self) -> u64 {
        self.field.p()
    }
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
    pub fn denom(&self) -> &BigUint {
        &self.denom
    }
    pub fn numer(&self, x: u64) -> &BigInt {
        &self.values[(x % self.p()) as usize]
    }
    pub fn at(&self, x: u64) -> BigRational {
        BigRational::new(self.numer(x).clone(), BigInt::from(self.denom.clone()))
    }
    pub fn at_f64(&self, x: u64) -> f64 {
        crate::numeric::rat_to_f64(&self.at(x))
    }
    pub fn to_f64(&self) -> Vec<f64> {
        let d = crate::numeric::int_to_f64(&BigInt::from(self.denom.clone()));
        self.values.iter().map(|v| crate::numeric::int_to_f64(v) / d).collect()
    }
    /// Numerators as i64 when all fit.
    pub fn numer_i64(&self) -> Option<Vec<i64>> {
        self.values.iter().map(|v| v.to_i64()).collect()
    }
    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }
    pub fn denom_int(&self) -> BigInt {
        BigInt::from(self.denom.clone())
    }

    pub fn sum(&self) -> BigRational {
        BigRational::new(self.values.iter().sum(), self.denom_int())
    }
    pub fn l1(&self) -> BigRational {
        BigRational::new(self.values.iter().map(|v| v.abs()).sum(), self.denom_int())
    }
    /// ‖f‖₂² exactly.
    pub fn l2_sq(&self) -> BigRational {
        let d = self.denom_int();
        BigRational::new(self.values.iter().map(|v| v * v).sum(), &d * &d)
    }
    pub fn max_abs_numer(&self) -> BigInt {
        self.values.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
    pub fn max_abs(&self) -> BigRational {
        BigRational::new(self.max_abs_numer(), self.denom_int())
    }
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.p()).filter(|&x| !self.values[x as usize].is_zero())
    }

    pub fn map_numer(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        Self::new(&self.field, self.values.iter().map(f).collect(), self.denom.clone())
    }
    pub fn neg(&self) -> Self {
        self.map_numer(|v| -v)
    }
    pub fn scale(&self, c: &BigInt) -> Self {
        self.map_numer(|v| v * c)
    }
    /// x ↦ f(−x).
    pub fn reflect(&self) -> Self {
        let p = self.p();
        Self::new(
            &self.field,
            (0..p).map(|x| self.values[((p - x) % p) as usize].clone()).collect(),
            self.denom.clone(),
        )
    }
    /// x ↦ f(x + t).
    pub fn translate(&self, t: u64) -> Self {
        let p = self.p();
        Self::new(
            &self.field,
            (0..p).map(|x| self.values[((x + t) % p) as usize].clone()).collect(),
            self.denom.clone(),
        )
    }
    /// x ↦ f(λx).
    pub fn dilate(&self, l: u64) -> Self {
        let p = self.p();
        Self::new(
            &self.field,
            (0..p).map(|x| self.values[(x * l % p) as usize].clone()).collect(),
            self.denom.clone(),
        )
    }
    /// Pointwise combination over the common denominator.
    fn zip(&self, o: &Self, op: impl Fn(BigInt, BigInt) -> BigInt) -> Self {
        assert_eq!(self.field, o.field);
        let (da, db) = (self.denom_int(), o.denom_int());
        let v = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| op(a * &db, b * &da))
            .collect();
        let d = &self.denom * &o.denom;
        Self::new(&self.field, v, d)
    }
    pub fn add(&self, o: &Self) -> Self {
        if self.denom == o.denom {
            let v = self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect();
            return Self::new(&self.field, v, self.denom.clone());
        }
        self.zip(o, |a, b| a + b)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    /// Pointwise product; denominators multiply.
    pub fn pointwise(&self, o: &Self) -> Self {
        assert_eq!(self.field, o.field);
        let v = self.values.iter().zip(&o.values).map(|(a, b)| a * b).collect();
        Self::new(&self.field, v, &self.denom * &o.denom)
    }
    /// Σ_x f(x)g(x).
    pub fn inner(&self, o: &Self) -> BigRational {
        let s: BigInt = self.values.iter().zip(&o.values).map(|(a, b)| a * b).sum();
        BigRational::new(s, BigInt::from(&self.denom * &o.denom))
    }
    /// Σ_x f(x)^k.
    pub fn power_sum(&self, k: u32) -> BigRational {
        let s: BigInt = self.values.iter().map(|v| num_traits::pow(v.clone(), k as usize)).sum();
        BigRational::new(s, num_traits::pow(self.denom_int(), k as usize))
    }
    /// Same function with the denominator reduced by the gcd of all entries.
    pub fn normalized(&self) -> Self {
        use num_integer::Integer;
        let mut g = self.denom_int();
        for v in &self.values {
            if g.is_one() {
                break;
            }
            g = g.gcd(v);
        }
        if g.is_one() || g.is_zero() {
            return self.clone();
        }
        let v = self.values.iter().map(|x| x / &g).collect();
        let d = (self.denom_int() / &g).to_biguint().unwrap();
        Self::new(&self.field, v, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn balanced_has_zero_sum_and_denom_p() {
        let f = make_field(11).unwrap();
        let a = SetFp::new(&f, [1, 4, 5]);
        let b = IntFn::balanced(&a);
        assert_eq!(b.denom(), &BigUint::from(11u32));
        assert!(b.sum().is_zero());
        assert_eq!(b.at(1), BigRational::new(8.into(), 11.into()));
        assert_eq!(b.at(0), BigRational::new((-3).into(), 11.into()));
    }

    #[test]
    fn arithmetic() {
        let f = make_field(7).unwrap();
        let a = IntFn::from_i64(&f, &[1, 2, 3, 0, 0, 0, 5]);
        assert_eq!(a.reflect().values()[1], BigInt::from(5));
        assert_eq!(a.translate(1).values()[0], BigInt::from(2));
        assert_eq!(a.l2_sq(), BigRational::from_integer(39.into()));
        let s = a.add(&IntFn::balanced(&SetFp::new(&f, [0])));
        assert_eq!(s.at(0), BigRational::new(13.into(), 7.into()));
        assert!(a.sub(&a).is_zero());
    }
}
