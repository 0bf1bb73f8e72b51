//! Polynomials and rational functions over F_p, coefficients lowest degree first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(coeffs: impl Into<Vec<i64>>) -> Self {
        let mut c = coeffs.into();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { coeffs: c }
    }
    pub fn one() -> Self {
        Poly::new(vec![1])
    }
    pub fn x() -> Self {
        Poly::new(vec![0, 1])
    }
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
    pub fn reduce(&self, field: &FieldCtx) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| field.reduce(c) as i64).collect::<Vec<_>>())
    }
    pub fn eval(&self, field: &FieldCtx, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| field.add(field.mul(acc, x), field.reduce(c)))
    }
    pub fn mul(&self, o: &Self, field: &FieldCtx) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(field.reduce(a), field.reduce(b)));
            }
        }
        Poly::new(out.into_iter().map(|v| v as i64).collect::<Vec<_>>())
    }
}

impl FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let c = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::BadSpec(format!("bad coefficient `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(c))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", if c.is_empty() { "0".to_string() } else { c.join(",") })
    }
}

/// num/den.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn poly(num: Poly) -> Self {
        Rational { num, den: Poly::one() }
    }
    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }
    /// Value at x, or None where the denominator vanishes.
    pub fn eval(&self, field: &FieldCtx, x: u64) -> Option<u64> {
        let d = self.den.eval(field, x);
        (d != 0).then(|| field.div(self.num.eval(field, x), d))
    }
}

/// Parses `c0,c1,...` or `c0,c1,.../d0,d1,...`.
impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.parse()?, d.parse()?),
            None => (s.parse()?, Poly::one()),
        };
        let r = Rational { num: n, den: d };
        if r.den.is_zero() {
            return Err(Error::BadSpec(format!("zero denominator in `{s}`")));
        }
        Ok(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Rank of integer vectors mod p by Gaussian elimination.
pub fn rank_mod_p(field: &FieldCtx, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in m.iter_mut() {
        r.resize(cols, 0);
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = field.inv(m[rank][c]);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let t = field.mul(m[i][c], inv);
                for j in c..cols {
                    let v = field.mul(t, m[rank][j]);
                    m[i][j] = field.sub(m[i][j], v);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn eval_and_parse() {
        let f = make_field(13).unwrap();
        let p: Poly = "1,0,1".parse().unwrap();
        assert_eq!(p.eval(&f, 5), 0);
        assert_eq!(p.degree(), 2);
        let r: Rational = "0,1/1,0,1".parse().unwrap();
        assert_eq!(r.eval(&f, 5), None);
        assert_eq!(r.eval(&f, 2), Some(f.div(2, 5)));
        assert!("1/0".parse::<Rational>().is_err());
        assert_eq!(r.to_string(), "0,1/1,0,1");
    }

    #[test]
    fn rank() {
        let f = make_field(7).unwrap();
        assert_eq!(rank_mod_p(&f, &[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_mod_p(&f, &[vec![1, 2], vec![2, 5], vec![0, 0]]), 2);
    }
}
