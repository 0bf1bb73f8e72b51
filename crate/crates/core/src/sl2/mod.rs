//! SL₂(F_p) and GL₂(F_p): Möbius action on P¹, group functions, flattening and tripling.

mod count;
mod family;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::numeric::{int, rat};
use crate::report::BoundReport;
use crate::transform::IntFn;

pub use count::{
    action_count, cf_count, cf_report, frobenius_check, gl2_image, inverse_diff_count, poly_shift_count,
    ActionCount, CfDistribution, FrobeniusMode, Gl2Image, InverseDiff, PolyShift,
};
pub use family::{coset_escape, family, EscapeReport, FamilyKind, FamilySpec, MatrixFamily};

/// Largest p for which the whole group is enumerated densely.
pub const MAX_DENSE_P: u64 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ProjPoint {
    Fin(u64),
    Inf,
}

impl ProjPoint {
    /// Finite points map to themselves, ∞ to p.
    pub fn index(self, p: u64) -> usize {
        match self {
            ProjPoint::Fin(x) => x as usize,
            ProjPoint::Inf => p as usize,
        }
    }
    pub fn from_index(i: usize, p: u64) -> Self {
        if i as u64 == p {
            ProjPoint::Inf
        } else {
            ProjPoint::Fin(i as u64)
        }
    }
    pub fn all(p: u64) -> impl Iterator<Item = ProjPoint> {
        (0..=p as usize).map(move |i| ProjPoint::from_index(i, p))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Fin(x) => write!(f, "{x}"),
            ProjPoint::Inf => write!(f, "inf"),
        }
    }
}

/// z ↦ (az+b)/(cz+d) for an invertible matrix.
pub(crate) fn mobius(p: u64, m: [u64; 4], z: ProjPoint) -> ProjPoint {
    let [a, b, c, d] = m;
    let inv = |x: u64| crate::field::pow_mod(x, p - 2, p);
    match z {
        ProjPoint::Inf => {
            if c == 0 {
                ProjPoint::Inf
            } else {
                ProjPoint::Fin(a * inv(c) % p)
            }
        }
        ProjPoint::Fin(z) => {
            let num = (a * z + b) % p;
            let den = (c * z + d) % p;
            if den == 0 {
                ProjPoint::Inf
            } else {
                ProjPoint::Fin(num * inv(den) % p)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SL2Elem {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl SL2Elem {
    pub fn new(field: &FieldCtx, a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        let (a, b, c, d) = (field.reduce(a as i64), field.reduce(b as i64), field.reduce(c as i64), field.reduce(d as i64));
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det != 1 {
            return Err(Error::BadSpec(format!("determinant {det} is not 1")));
        }
        Ok(Self::raw(a, b, c, d))
    }
    pub(crate) fn raw(a: u64, b: u64, c: u64, d: u64) -> Self {
        SL2Elem { a: a as u32, b: b as u32, c: c as u32, d: d as u32 }
    }
    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }
    pub fn entries(&self) -> [u64; 4] {
        [self.a as u64, self.b as u64, self.c as u64, self.d as u64]
    }
    pub fn trace(&self, field: &FieldCtx) -> u64 {
        field.add(self.a as u64, self.d as u64)
    }
}

impl fmt::Display for SL2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GL2Elem {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub det: u32,
}

impl GL2Elem {
    pub fn new(field: &FieldCtx, a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        let (a, b, c, d) = (field.reduce(a as i64), field.reduce(b as i64), field.reduce(c as i64), field.reduce(d as i64));
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det == 0 {
            return Err(Error::BadSpec("singular matrix".into()));
        }
        Ok(GL2Elem { a: a as u32, b: b as u32, c: c as u32, d: d as u32, det: det as u32 })
    }
    pub fn entries(&self) -> [u64; 4] {
        [self.a as u64, self.b as u64, self.c as u64, self.d as u64]
    }
    pub fn to_sl2(&self) -> Option<SL2Elem> {
        (self.det == 1).then(|| SL2Elem { a: self.a, b: self.b, c: self.c, d: self.d })
    }
    pub fn act(&self, field: &FieldCtx, z: ProjPoint) -> ProjPoint {
        mobius(field.p(), self.entries(), z)
    }
}

impl From<SL2Elem> for GL2Elem {
    fn from(g: SL2Elem) -> Self {
        GL2Elem { a: g.a, b: g.b, c: g.c, d: g.d, det: 1 }
    }
}

pub fn sl2_mul(field: &FieldCtx, g: &SL2Elem, h: &SL2Elem) -> SL2Elem {
    let p = field.p();
    let [a, b, c, d] = g.entries();
    let [e, f, x, y] = h.entries();
    SL2Elem::raw((a * e + b * x) % p, (a * f + b * y) % p, (c * e + d * x) % p, (c * f + d * y) % p)
}

pub fn sl2_inv(field: &FieldCtx, g: &SL2Elem) -> SL2Elem {
    SL2Elem::raw(g.d as u64, field.neg(g.b as u64), field.neg(g.c as u64), g.a as u64)
}

pub fn act(field: &FieldCtx, g: &SL2Elem, z: ProjPoint) -> ProjPoint {
    mobius(field.p(), g.entries(), z)
}

/// g'⁻¹g rescaled into SL₂; requires det g = det g'.
pub(crate) fn gl2_quotient(field: &FieldCtx, g1: &GL2Elem, g: &GL2Elem) -> SL2Elem {
    let p = field.p();
    let s = field.inv(g1.det as u64);
    let [a, b, c, d] = g1.entries();
    let adj = [d, field.neg(b), field.neg(c), a];
    let [e, f, x, y] = g.entries();
    let m = |u: u64, v: u64| u * v % p;
    SL2Elem::raw(
        m((adj[0] * e + adj[1] * x) % p, s),
        m((adj[0] * f + adj[1] * y) % p, s),
        m((adj[2] * e + adj[3] * x) % p, s),
        m((adj[2] * f + adj[3] * y) % p, s),
    )
}

pub fn sl2_order(p: u64) -> u64 {
    p * p * p - p
}

/// Every element of SL₂(F_p) in lexicographic order.
pub fn all_sl2(field: &FieldCtx) -> Vec<SL2Elem> {
    let p = field.p();
    let mut out = Vec::with_capacity(sl2_order(p) as usize);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                if a != 0 {
                    let d = field.div(field.add(1, field.mul(b, c)), a);
                    out.push(SL2Elem::raw(a, b, c, d));
                }
            }
            if a == 0 && b != 0 {
                let c = field.neg(field.inv(b));
                for d in 0..p {
                    out.push(SL2Elem::raw(a, b, c, d));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn random_sl2(field: &FieldCtx, rng: &mut impl Rng) -> SL2Elem {
    let p = field.p();
    loop {
        let (a, b, c) = (rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
        if a != 0 {
            return SL2Elem::raw(a, b, c, field.div(field.add(1, field.mul(b, c)), a));
        }
    }
}

/// Subgroup generated by `gens`, by closure under right multiplication.
pub fn generated(field: &FieldCtx, gens: &[SL2Elem]) -> HashSet<SL2Elem> {
    let mut seen: HashSet<SL2Elem> = HashSet::from([SL2Elem::identity()]);
    let mut frontier = vec![SL2Elem::identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = sl2_mul(field, &x, g);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// A finitely supported weight on SL₂(F_p): integer numerators over a common denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFn {
    field: FieldCtx,
    weights: BTreeMap<SL2Elem, BigInt>,
    denom: BigUint,
    total: BigRational,
}

impl GroupFn {
    pub fn new(field: &FieldCtx, weights: BTreeMap<SL2Elem, BigInt>, denom: BigUint) -> Self {
        let mut weights: BTreeMap<SL2Elem, BigInt> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let mut denom = denom;
        let g = weights.values().fold(BigInt::from(denom.clone()), |acc, w| acc.gcd(w));
        if !g.is_zero() && !g.is_one() {
            let g = g.magnitude().clone();
            for w in weights.values_mut() {
                *w /= BigInt::from(g.clone());
            }
            denom /= g;
        }
        let s: BigInt = weights.values().sum();
        let total = BigRational::new(s, BigInt::from(denom.clone()));
        GroupFn { field: field.clone(), weights, denom, total }
    }
    pub fn delta(field: &FieldCtx, g: SL2Elem) -> Self {
        Self::new(field, BTreeMap::from([(g, BigInt::one())]), BigUint::one())
    }
    /// Weight 1 on each distinct element.
    pub fn indicator(field: &FieldCtx, elems: &[SL2Elem]) -> Self {
        let w = elems.iter().map(|&g| (g, BigInt::one())).collect();
        Self::new(field, w, BigUint::one())
    }
    /// Uniform probability on the distinct elements.
    pub fn uniform(field: &FieldCtx, elems: &[SL2Elem]) -> Self {
        let w: BTreeMap<_, _> = elems.iter().map(|&g| (g, BigInt::one())).collect();
        let n = BigUint::from(w.len().max(1));
        Self::new(field, w, n)
    }
    /// Counts elements with multiplicity, normalized to mass 1.
    pub fn empirical(field: &FieldCtx, elems: &[SL2Elem]) -> Self {
        let mut w: BTreeMap<SL2Elem, BigInt> = BTreeMap::new();
        for &g in elems {
            *w.entry(g).or_default() += 1;
        }
        Self::new(field, w, BigUint::from(elems.len().max(1)))
    }
    pub fn haar(field: &FieldCtx) -> Result<Self> {
        dense_guard(field)?;
        Ok(Self::uniform(field, &all_sl2(field)))
    }
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    pub fn support_len(&self) -> usize {
        self.weights.len()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&SL2Elem, &BigInt)> {
        self.weights.iter()
    }
    pub fn denom(&self) -> &BigUint {
        &self.denom
    }
    pub fn weight(&self, g: &SL2Elem) -> BigRational {
        let n = self.weights.get(g).cloned().unwrap_or_default();
        BigRational::new(n, BigInt::from(self.denom.clone()))
    }
    pub fn total(&self) -> &BigRational {
        &self.total
    }
    pub fn l2_sq(&self) -> BigRational {
        let s: BigInt = self.weights.values().map(|w| w * w).sum();
        let d = BigInt::from(self.denom.clone());
        BigRational::new(s, &d * &d)
    }
    pub fn inverse(&self) -> Self {
        let w = self.weights.iter().map(|(g, v)| (sl2_inv(&self.field, g), v.clone())).collect();
        Self::new(&self.field, w, self.denom.clone())
    }
    pub fn is_symmetric(&self) -> bool {
        self.weights.iter().all(|(g, w)| self.weights.get(&sl2_inv(&self.field, g)) == Some(w))
    }
    pub fn is_probability(&self) -> bool {
        self.total.is_one() && self.weights.values().all(|w| !w.is_negative())
    }
}

fn dense_guard(field: &FieldCtx) -> Result<()> {
    if field.p() > MAX_DENSE_P {
        return Err(Error::Guard(format!("dense group iteration needs p <= {MAX_DENSE_P}, got {}", field.p())));
    }
    Ok(())
}

/// (μ*ν)(x) = Σ_{gh=x} μ(g)ν(h).
pub fn group_conv(mu: &GroupFn, nu: &GroupFn) -> Result<GroupFn> {
    if mu.field != nu.field {
        return Err(Error::FieldMismatch(mu.field.p(), nu.field.p()));
    }
    let field = &mu.field;
    let left: Vec<(&SL2Elem, &BigInt)> = mu.weights.iter().collect();
    let chunk = (left.len() / (4 * rayon::current_num_threads()).max(1)).max(16);
    let partial: Vec<HashMap<SL2Elem, BigInt>> = left
        .par_chunks(chunk)
        .map(|ch| {
            let mut acc: HashMap<SL2Elem, BigInt> = HashMap::new();
            for (g, wg) in ch {
                for (h, wh) in &nu.weights {
                    *acc.entry(sl2_mul(field, g, h)).or_default() += *wg * wh;
                }
            }
            acc
        })
        .collect();
    let mut out: BTreeMap<SL2Elem, BigInt> = BTreeMap::new();
    for m in partial {
        for (k, v) in m {
            *out.entry(k).or_default() += v;
        }
    }
    Ok(GroupFn::new(field, out, &mu.denom * &nu.denom))
}

/// (F*f)(x) = Σ_g F(g) f(g⁻¹x) on P¹, indexed by [`ProjPoint::index`], with f(∞) = 0.
pub fn gconv(big_f: &GroupFn, f: &IntFn) -> Vec<BigRational> {
    let field = &big_f.field;
    let p = field.p();
    let mut acc = vec![BigInt::zero(); p as usize + 1];
    let supp: Vec<u64> = f.support().collect();
    for (g, w) in &big_f.weights {
        for &y in &supp {
            let x = act(field, g, ProjPoint::Fin(y));
            acc[x.index(p)] += w * f.numer(y);
        }
    }
    let d = BigInt::from(&big_f.denom * f.denom());
    acc.into_iter().map(|v| BigRational::new(v, d.clone())).collect()
}

/// e_k = ‖μ^{*2^k}‖₂² − 1/|SL₂| for k = 0..=k_max.
pub fn flatten_profile(mu: &GroupFn, k_max: u32) -> Result<Vec<BigRational>> {
    dense_guard(&mu.field)?;
    if !mu.is_probability() {
        return Err(Error::BadMeasure("not a probability measure".into()));
    }
    if !mu.is_symmetric() {
        return Err(Error::BadMeasure("measure is not symmetric".into()));
    }
    let haar = rat(1, sl2_order(mu.field.p()));
    let mut nu = mu.clone();
    let mut out = vec![nu.l2_sq() - &haar];
    for _ in 0..k_max {
        nu = group_conv(&nu, &nu)?;
        out.push(nu.l2_sq() - &haar);
    }
    Ok(out)
}

/// Nonnegativity and monotonicity of a flattening profile.
pub fn flatten_report(e: &[BigRational]) -> Vec<BoundReport> {
    let mut rows = Vec::new();
    for (k, v) in e.iter().enumerate() {
        rows.push(
            BoundReport::assert("sl2", &format!("flattening-nonnegative/k={k}"), !v.is_negative())
                .lhs(v.clone())
                .rhs(int(0)),
        );
        if k + 1 < e.len() {
            rows.push(
                BoundReport::assert("sl2", &format!("flattening-monotone/k={k}"), e[k + 1] <= *v)
                    .lhs(e[k + 1].clone())
                    .rhs(v.clone()),
            );
        }
    }
    rows
}

/// Smallest k with e_k < 2/|SL₂|.
pub fn flattening_depth(e: &[BigRational], p: u64) -> Option<u32> {
    let t = rat(2, sl2_order(p));
    e.iter().position(|v| *v < t).map(|k| k as u32)
}

/// Measured depth for μ = uniform(S)⁻¹ * uniform(S), when p is small enough.
pub fn measured_depth(field: &FieldCtx, s: &[SL2Elem], k_max: u32) -> Option<u32> {
    if s.is_empty() || field.p() > MAX_DENSE_P {
        return None;
    }
    let u = GroupFn::uniform(field, s);
    let mu = group_conv(&u.inverse(), &u).ok()?;
    flattening_depth(&flatten_profile(&mu, k_max).ok()?, field.p())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tripling {
    pub size: usize,
    pub triple: usize,
    pub ratio: f64,
    /// log|AAA|/log|A| − 1, or 0 when |A| ≤ 1.
    pub exponent: f64,
}

pub const TRIPLING_GUARD: usize = 2000;

pub fn tripling(field: &FieldCtx, a: &[SL2Elem]) -> Result<Tripling> {
    let set: Vec<SL2Elem> = a.iter().copied().collect::<HashSet<_>>().into_iter().collect();
    if set.len() > TRIPLING_GUARD {
        return Err(Error::Guard(format!(
            "|A| = {} exceeds {TRIPLING_GUARD}; sample a smaller set",
            set.len()
        )));
    }
    let aa: Vec<SL2Elem> = set
        .par_iter()
        .flat_map_iter(|g| set.iter().map(move |h| sl2_mul(field, g, h)))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    let aaa: HashSet<SL2Elem> =
        aa.par_iter().flat_map_iter(|g| set.iter().map(move |h| sl2_mul(field, g, h))).collect();
    let n = set.len();
    let t = aaa.len();
    let exponent = if n <= 1 { 0.0 } else { (t as f64).ln() / (n as f64).ln() - 1.0 };
    Ok(Tripling { size: n, triple: t, ratio: if n == 0 { 0.0 } else { t as f64 / n as f64 }, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::sets::rng;

    #[test]
    fn enumeration_and_axioms() {
        let f = make_field(5).unwrap();
        let all = all_sl2(&f);
        assert_eq!(all.len(), 120);
        let id = SL2Elem::identity();
        for g in &all {
            assert_eq!(sl2_mul(&f, g, &sl2_inv(&f, g)), id);
            assert_eq!(sl2_mul(&f, &id, g), *g);
            for z in ProjPoint::all(5) {
                for h in all.iter().step_by(7) {
                    assert_eq!(act(&f, &sl2_mul(&f, g, h), z), act(&f, g, act(&f, h, z)));
                }
            }
        }
        let mut r = rng(1);
        for _ in 0..1000 {
            let (x, y, z) = (all[r.gen_range(0..120)], all[r.gen_range(0..120)], all[r.gen_range(0..120)]);
            assert_eq!(sl2_mul(&f, &sl2_mul(&f, &x, &y), &z), sl2_mul(&f, &x, &sl2_mul(&f, &y, &z)));
        }
    }

    #[test]
    fn infinity_convention() {
        let f = make_field(7).unwrap();
        let w = SL2Elem::new(&f, 0, 6, 1, 0).unwrap();
        assert_eq!(act(&f, &w, ProjPoint::Fin(0)), ProjPoint::Inf);
        assert_eq!(act(&f, &w, ProjPoint::Inf), ProjPoint::Fin(0));
        assert!(SL2Elem::new(&f, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn random_action_check() {
        let f = make_field(101).unwrap();
        let mut r = rng(2);
        for _ in 0..10_000 {
            let (g, h) = (random_sl2(&f, &mut r), random_sl2(&f, &mut r));
            let z = ProjPoint::from_index(r.gen_range(0..102), 101);
            assert_eq!(act(&f, &sl2_mul(&f, &g, &h), z), act(&f, &g, act(&f, &h, z)));
        }
    }

    #[test]
    fn conv_basics() {
        let f = make_field(5).unwrap();
        let mut r = rng(3);
        let (g, h) = (random_sl2(&f, &mut r), random_sl2(&f, &mut r));
        let c = group_conv(&GroupFn::delta(&f, g), &GroupFn::delta(&f, h)).unwrap();
        assert_eq!(c, GroupFn::delta(&f, sl2_mul(&f, &g, &h)));
        let haar = GroupFn::haar(&f).unwrap();
        assert_eq!(group_conv(&haar, &haar).unwrap(), haar);
    }

    #[test]
    fn gconv_uniform() {
        let f = make_field(5).unwrap();
        let one = GroupFn::indicator(&f, &all_sl2(&f));
        let v = IntFn::from_i64(&f, &[3, -1, 4, 1, -5]);
        let out = gconv(&one, &v);
        for x in out {
            assert_eq!(x, int(120 / 6 * 2));
        }
        let id = gconv(&GroupFn::delta(&f, SL2Elem::identity()), &v);
        assert_eq!(id[2], int(4));
        assert_eq!(id[5], int(0));
    }

    #[test]
    fn flattening_examples() {
        let f = make_field(5).unwrap();
        let e = flatten_profile(&GroupFn::haar(&f).unwrap(), 3).unwrap();
        assert!(e.iter().all(|v| v.is_zero()));
        let e = flatten_profile(&GroupFn::delta(&f, SL2Elem::identity()), 3).unwrap();
        assert!(e.iter().all(|v| *v == rat(119, 120)));
        let s = SL2Elem::new(&f, 1, 1, 0, 1).unwrap();
        let t = SL2Elem::new(&f, 1, 0, 1, 1).unwrap();
        let gens = [s, t, sl2_inv(&f, &s), sl2_inv(&f, &t)];
        assert_eq!(generated(&f, &gens).len(), 120);
        let e = flatten_profile(&GroupFn::uniform(&f, &gens), 5).unwrap();
        assert!(flatten_report(&e).iter().all(|r| r.passed()));
        assert!(e[5] < rat(1, 1000));
        assert!(flatten_profile(&GroupFn::uniform(&f, &[s]), 1).is_err());
    }

    #[test]
    fn tripling_examples() {
        let f = make_field(13).unwrap();
        let unip: Vec<SL2Elem> = (0..13).map(|x| SL2Elem::raw(1, x, 0, 1)).collect();
        let t = tripling(&f, &unip).unwrap();
        assert_eq!(t.triple, 13);
        assert_eq!(t.exponent, 0.0);
        assert_eq!(tripling(&f, &[SL2Elem::identity()]).unwrap().triple, 1);
        let mut r = rng(4);
        let mut a = Vec::new();
        while a.len() < 20 {
            let g = random_sl2(&f, &mut r);
            a.push(g);
            a.push(sl2_inv(&f, &g));
        }
        assert!(tripling(&f, &a).unwrap().exponent > 0.0);
    }
}
