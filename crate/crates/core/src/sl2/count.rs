use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{all_sl2, gconv, mobius, sl2_inv, sl2_order, GroupFn, MatrixFamily, ProjPoint, MAX_DENSE_P};
use crate::energy::{energy, Op};
use crate::error::{Error, Result};
use crate::numeric::{abs_rat, int, rat, rat_to_f64};
use crate::poly::Poly;
use crate::report::BoundReport;
use crate::sets::SetFp;
use crate::transform::IntFn;

/// N(x) = |{(a₁..a_k) ∈ A^k : [a₁,…,a_k] = x}| over P¹, with [a₁,…,a_k] = 1/(a₁ + [a₂,…,a_k]) and empty tail 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CfDistribution {
    pub p: u64,
    pub k: u32,
    pub set_size: usize,
    /// Indexed by [`ProjPoint::index`].
    pub counts: Vec<u128>,
}

impl CfDistribution {
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }
    pub fn at(&self, z: ProjPoint) -> u128 {
        self.counts[z.index(self.p)]
    }
    /// max_x |N(x) − |A|^k/p| / (|A|^k/p) over x ∈ P¹.
    pub fn max_relative_deviation(&self) -> f64 {
        let main = (self.set_size as f64).powi(self.k as i32) / self.p as f64;
        if main == 0.0 {
            return 0.0;
        }
        self.counts.iter().map(|&c| (c as f64 - main).abs() / main).fold(0.0, f64::max)
    }
}

pub fn cf_count(a: &SetFp, k: u32) -> Result<CfDistribution> {
    let field = a.field();
    let p = field.p();
    let bits = (a.len().max(1) as f64).log2() * k as f64;
    if bits >= 126.0 || (k > 8 && bits > (1e9f64).log2()) {
        return Err(Error::Guard(format!("|A|^k too large for |A| = {}, k = {k}", a.len())));
    }
    let n = p as usize + 1;
    let inv: Vec<u64> = (0..p).map(|x| if x == 0 { 0 } else { field.inv(x) }).collect();
    let mut cur = vec![0u128; n];
    cur[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; n];
        for (zi, &c) in cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if zi == p as usize {
                // 1/(a + ∞) = 0
                next[0] += c * a.len() as u128;
                continue;
            }
            for x in a.iter() {
                let s = field.add(x, zi as u64);
                let y = if s == 0 { p as usize } else { inv[s as usize] as usize };
                next[y] += c;
            }
        }
        cur = next;
    }
    Ok(CfDistribution { p, k, set_size: a.len(), counts: cur })
}

pub fn cf_report(d: &CfDistribution) -> Vec<BoundReport> {
    let expect = (d.set_size as u128).pow(d.k);
    let main = rat(BigInt::from(expect), d.p);
    vec![
        BoundReport::assert("sl2", "continued-fraction-mass", d.total() == expect)
            .lhs(BigInt::from(d.total()))
            .rhs(BigInt::from(expect)),
        BoundReport::ratio_row("sl2", "continued-fraction-equidistribution")
            .lhs(BigInt::from(d.counts.iter().copied().max().unwrap_or(0)))
            .main(main)
            .ratio(d.max_relative_deviation())
            .note(format!("k={}, |A|={}", d.k, d.set_size)),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionCount {
    /// Σ_{s,a} f₁(a) f₂(sa), with f₂(∞) = 0.
    pub sigma: BigRational,
    pub main: BigRational,
    pub error: BigRational,
    /// (s, a) with f₁(a) ≠ 0 sent to ∞.
    pub to_infinity: u64,
    pub rows: Vec<BoundReport>,
}

/// `depth` is the k of the p^{−1/2^{k+2}} factor, usually [`super::measured_depth`].
pub fn action_count(fam: &MatrixFamily, f1: &IntFn, f2: &IntFn, depth: Option<u32>) -> ActionCount {
    let field = &fam.field;
    let p = field.p();
    let supp: Vec<u64> = f1.support().collect();
    let mut acc = BigInt::zero();
    let mut to_infinity = 0u64;
    for g in &fam.elems {
        for &a in &supp {
            match mobius(p, g.entries(), ProjPoint::Fin(a)) {
                ProjPoint::Fin(y) => {
                    let w = f2.numer(y);
                    if !w.is_zero() {
                        acc += f1.numer(a) * w;
                    }
                }
                ProjPoint::Inf => to_infinity += 1,
            }
        }
    }
    let d = BigInt::from(f1.denom() * f2.denom());
    let sigma = BigRational::new(acc, d);
    let main = int(fam.len() as u64) * f1.sum() * f2.sum() / int(p);
    let error = &sigma - &main;
    let norms = rat_to_f64(&f1.l2_sq()).sqrt() * rat_to_f64(&f2.l2_sq()).sqrt();
    let shape = 2.0 * norms * fam.len() as f64 * depth.map_or(1.0, |k| (p as f64).powf(-1.0 / 2f64.powi(k as i32 + 2)));
    let row = BoundReport::ratio_row("sl2", "action-count")
        .lhs(sigma.clone())
        .main(main.clone())
        .err(error.clone())
        .rhs(shape)
        .ratio(if shape > 0.0 { rat_to_f64(&abs_rat(&error)) / shape } else { 0.0 })
        .note(match depth {
            Some(k) => format!("k={k}, to-infinity {to_infinity}"),
            None => format!("no measured depth, to-infinity {to_infinity}"),
        });
    ActionCount { sigma, main, error, to_infinity, rows: vec![row] }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseDiff {
    pub count: BigRational,
    /// Zero elements of A₁, A₂ left out.
    pub skipped: u64,
    pub energy: Option<BigRational>,
    pub rows: Vec<BoundReport>,
}

/// |{(a₁,a₂) : 1/a₁ − 1/a₂ = λ}|; `b` supplies K_i = |A_i + B|/|A_i| for the reports.
pub fn inverse_diff_count(a1: &SetFp, a2: &SetFp, lambda: u64, b: Option<&SetFp>) -> Result<InverseDiff> {
    let field = a1.field();
    let lambda = field.reduce(lambda as i64);
    if lambda == 0 {
        return Err(Error::OutOfRange("lambda must be nonzero".into()));
    }
    let skipped = a1.contains(0) as u64 + a2.contains(0) as u64;
    let (x1, x2) = (a1.without_zero(), a2.without_zero());
    let mut count = 0u64;
    for a in x1.iter() {
        let t = field.sub(field.inv(a), lambda);
        if t != 0 && x2.contains(field.inv(t)) {
            count += 1;
        }
    }
    let count = int(count);
    let p = field.p();
    let mut rows = Vec::new();
    let mut en = None;
    if let Some(b) = b {
        let k1 = if x1.is_empty() { 0.0 } else { x1.sumset(b).len() as f64 / x1.len() as f64 };
        let k2 = if x2.is_empty() { 0.0 } else { x2.sumset(b).len() as f64 / x2.len() as f64 };
        let shape = k1 * k2 * x1.len() as f64 * x2.len() as f64 / p as f64;
        rows.push(
            BoundReport::ratio_row("sl2", "inverse-difference-count")
                .lhs(count.clone())
                .main(shape)
                .rhs(shape + 2.0 * (k1 * k2 * x1.len() as f64 * x2.len() as f64).sqrt())
                .with_ratio()
                .note(format!("K1={k1:.6}, K2={k2:.6}")),
        );
        let bz = b.without_zero();
        let e = energy(Op::Add, &x1.inverses(), &bz.inverses());
        let kk = if x1.is_empty() { 0.0 } else { x1.sumset(&bz).len() as f64 / x1.len() as f64 };
        let (na, nb) = (x1.len() as f64, bz.len() as f64);
        let main = kk * kk * na * na * nb * nb / p as f64;
        let scale = kk.powf(1.25) * na.powf(1.25) * nb.powf(1.5) + kk * kk * na * na;
        let err = rat_to_f64(&e) - main;
        rows.push(
            BoundReport::ratio_row("sl2", "inverse-set-energy")
                .lhs(e.clone())
                .main(main)
                .err(err)
                .rhs(scale)
                .ratio(if scale > 0.0 { err / scale } else { 0.0 })
                .note(format!("K={kk:.6}")),
        );
        en = Some(e);
    }
    Ok(InverseDiff { count, skipped, energy: en, rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyShift {
    /// Pairs ((a,b),(a′,b′)) with equal values p₁(b) + 1/(a + p₂(b)).
    pub collisions: BigRational,
    pub image: usize,
    /// (a, b) with a + p₂(b) = 0.
    pub skipped: u64,
    pub rows: Vec<BoundReport>,
}

pub fn poly_shift_count(a: &SetFp, b: &SetFp, p1: &Poly, p2: &Poly) -> Result<PolyShift> {
    let field = a.field();
    let (p1, p2) = (p1.reduce(field), p2.reduce(field));
    if p1.is_constant() || p2.is_constant() {
        return Err(Error::BadSpec("both polynomials must be non-constant".into()));
    }
    let mut hist: HashMap<u64, u64> = HashMap::new();
    let mut skipped = 0u64;
    for y in b.iter() {
        let (u, v) = (p1.eval(field, y), p2.eval(field, y));
        for x in a.iter() {
            let s = field.add(x, v);
            if s == 0 {
                skipped += 1;
            } else {
                *hist.entry(field.add(u, field.inv(s))).or_default() += 1;
            }
        }
    }
    let coll: BigInt = hist.values().map(|&c| BigInt::from(c) * c).sum();
    let collisions = BigRational::from(coll);
    let p = field.p();
    let main = rat(BigInt::from(a.len() * a.len()) * (b.len() * b.len()), p);
    let err = &collisions - &main;
    let scale = 2.0 * a.len() as f64 * (b.len() * b.len()) as f64;
    let rows = vec![
        BoundReport::ratio_row("sl2", "polynomial-shift-collisions")
            .lhs(collisions.clone())
            .main(main)
            .err(err.clone())
            .rhs(scale)
            .ratio(if scale > 0.0 { rat_to_f64(&err) / scale } else { 0.0 })
            .note(format!("skipped {skipped}")),
        BoundReport::ratio_row("sl2", "polynomial-shift-image")
            .lhs(hist.len() as u64)
            .rhs(p.min(a.len() as u64))
            .with_ratio(),
    ];
    Ok(PolyShift { collisions, image: hist.len(), skipped, rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gl2Image {
    /// Distinct values of (a + b₁)/(ab₂ + b₃) in P¹.
    pub image: usize,
    pub hits_infinity: bool,
    /// Multiset of b₃ − b₁b₂ over all triples, zero included.
    pub det_spectrum: BTreeMap<u64, u64>,
    pub degenerate: u64,
    /// Σ_z r²_{B₃−B₁B₂}(z) over z ≠ 0.
    pub det_energy: BigInt,
    pub rows: Vec<BoundReport>,
}

pub fn gl2_image(a: &SetFp, b1: &SetFp, b2: &SetFp, b3: &SetFp) -> Gl2Image {
    let field = a.field();
    let p = field.p();
    let mut spectrum: BTreeMap<u64, u64> = BTreeMap::new();
    let mut image: HashSet<ProjPoint> = HashSet::new();
    for x in b1.iter() {
        for y in b2.iter() {
            for z in b3.iter() {
                let det = field.sub(z, field.mul(x, y));
                *spectrum.entry(det).or_default() += 1;
                if det == 0 {
                    continue;
                }
                for t in a.iter() {
                    image.insert(mobius(p, [1, x, y, z], ProjPoint::Fin(t)));
                }
            }
        }
    }
    let degenerate = spectrum.get(&0).copied().unwrap_or(0);
    let det_energy: BigInt = spectrum.iter().filter(|(&k, _)| k != 0).map(|(_, &c)| BigInt::from(c) * c).sum();
    let all_energy: BigInt = spectrum.values().map(|&c| BigInt::from(c) * c).sum();
    let n = BigInt::from(b1.len() * b2.len()) * b3.len();
    let support = spectrum.len().max(1);
    let cs = BigRational::new(&n * &n, BigInt::from(support));
    let rows = vec![
        BoundReport::assert("sl2", "determinant-energy-lower", BigRational::from(all_energy.clone()) >= cs)
            .lhs(all_energy)
            .rhs(cs),
        BoundReport::ratio_row("sl2", "gl2-image-size")
            .lhs(image.len() as u64)
            .rhs(p.min(a.len() as u64))
            .with_ratio()
            .note(format!("degenerate {degenerate}")),
    ];
    Gl2Image {
        image: image.len(),
        hits_infinity: image.contains(&ProjPoint::Inf),
        det_spectrum: spectrum,
        degenerate,
        det_energy,
        rows,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrobeniusMode {
    Inequality,
    PowerIteration,
}

pub const FROBENIUS_TOL: f64 = 1e-9;
pub const POWER_TOL: f64 = 1e-6;

/// Σ_x (F*f)(x)φ(x) ≤ 2p‖F‖₂‖φ‖₂‖f‖₂ for mean-zero f, or the top singular value of (g,x) ↦ f(g⁻¹x).
pub fn frobenius_check(big_f: &GroupFn, f: &IntFn, phi: &IntFn, mode: FrobeniusMode) -> Result<Vec<BoundReport>> {
    if !f.sum().is_zero() {
        return Err(Error::NonZeroMean);
    }
    let field = big_f.field();
    let p = field.p();
    let fnorm = rat_to_f64(&f.l2_sq()).sqrt();
    match mode {
        FrobeniusMode::Inequality => {
            let conv = gconv(big_f, f);
            let lhs: BigRational = (0..p).map(|x| &conv[x as usize] * phi.at(x)).sum();
            let rhs = 2.0 * p as f64 * rat_to_f64(&big_f.l2_sq()).sqrt() * rat_to_f64(&phi.l2_sq()).sqrt() * fnorm;
            let l = rat_to_f64(&abs_rat(&lhs));
            Ok(vec![BoundReport::assert("sl2", "frobenius-inequality", l <= rhs * (1.0 + FROBENIUS_TOL) + f64::MIN_POSITIVE)
                .lhs(lhs)
                .rhs(rhs)])
        }
        FrobeniusMode::PowerIteration => {
            if p > MAX_DENSE_P {
                return Err(Error::Guard(format!("power iteration needs p <= {MAX_DENSE_P}")));
            }
            let n = p as usize + 1;
            // Gram(x,y) = Σ_g f(g⁻¹x) f(g⁻¹y), in units of denom².
            let vals: Vec<BigInt> = (0..n).map(|i| if i < p as usize { f.numer(i as u64).clone() } else { BigInt::zero() }).collect();
            let mut gram = vec![vec![BigInt::zero(); n]; n];
            for g in all_sl2(field) {
                let gi = sl2_inv(field, &g);
                let col: Vec<&BigInt> = ProjPoint::all(p).map(|x| &vals[mobius(p, gi.entries(), x).index(p)]).collect();
                for x in 0..n {
                    if col[x].is_zero() {
                        continue;
                    }
                    for y in 0..n {
                        gram[x][y] += col[x] * col[y];
                    }
                }
            }
            let d2 = BigInt::from(f.denom() * f.denom());
            let trace = BigRational::new((0..n).map(|i| gram[i][i].clone()).sum(), d2.clone());
            let expect = int(sl2_order(p)) * f.l2_sq();
            let g: Vec<Vec<f64>> = gram
                .iter()
                .map(|r| r.iter().map(|v| rat_to_f64(&BigRational::new(v.clone(), d2.clone()))).collect())
                .collect();
            let top = power_iteration(&g);
            let sigma = top.max(0.0).sqrt();
            let bound = 2.0 * p as f64 * fnorm;
            Ok(vec![
                BoundReport::assert("sl2", "frobenius-top-singular", sigma <= bound * (1.0 + POWER_TOL))
                    .lhs(sigma)
                    .rhs(bound),
                BoundReport::assert("sl2", "frobenius-gram-trace", trace == expect).lhs(trace).rhs(expect),
            ])
        }
    }
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
fn power_iteration(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 + 1.0).sqrt() / n as f64).collect();
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w: Vec<f64> = (0..n).map(|i| m[i].iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let next = norm / vn;
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - lambda).abs() <= 1e-14 * next {
            return next;
        }
        lambda = next;
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::sets::rng;
    use crate::sl2::{family, FamilySpec};

    #[test]
    fn cf_small() {
        let f = make_field(11).unwrap();
        let d = cf_count(&SetFp::nonzero(&f), 1).unwrap();
        for a in 1..11 {
            assert_eq!(d.at(ProjPoint::Fin(f.inv(a))), 1);
        }
        assert_eq!(d.at(ProjPoint::Fin(0)), 0);
        let d = cf_count(&SetFp::new(&f, [0, 3]), 1).unwrap();
        assert_eq!(d.at(ProjPoint::Inf), 1);
        let d = cf_count(&SetFp::new(&f, [0, 3, 5]), 4).unwrap();
        assert_eq!(d.total(), 81);
        assert!(cf_report(&d)[0].passed());
    }

    #[test]
    fn inverse_diff_examples() {
        let f = make_field(7).unwrap();
        let one = SetFp::new(&f, [1]);
        assert!(inverse_diff_count(&one, &one, 1, None).unwrap().count.is_zero());
        let all = SetFp::nonzero(&f);
        assert_eq!(inverse_diff_count(&all, &all, 1, None).unwrap().count, int(5));
        assert!(inverse_diff_count(&all, &all, 0, None).is_err());
    }

    #[test]
    fn poly_shift_examples() {
        let f = make_field(11).unwrap();
        let x = Poly::x();
        let r = poly_shift_count(&SetFp::new(&f, [2]), &SetFp::new(&f, [3]), &x, &x).unwrap();
        assert_eq!((r.collisions.clone(), r.image), (int(1), 1));
        assert!(poly_shift_count(&SetFp::new(&f, [2]), &SetFp::new(&f, [3]), &Poly::one(), &x).is_err());
    }

    #[test]
    fn gl2_examples() {
        let f = make_field(7).unwrap();
        let one = SetFp::new(&f, [1]);
        let r = gl2_image(&SetFp::new(&f, [0]), &one, &one, &SetFp::new(&f, [1]));
        assert_eq!(r.degenerate, 1);
        assert_eq!(r.image, 0);
        let r = gl2_image(&SetFp::new(&f, [0]), &one, &SetFp::new(&f, [0]), &one);
        assert_eq!(r.image, 1);
        let r = gl2_image(&SetFp::full(&f), &SetFp::new(&f, [2]), &SetFp::new(&f, [3]), &SetFp::new(&f, [1]));
        assert_eq!(r.image, 7);
        assert!(r.rows[0].passed());
    }

    #[test]
    fn action_identity() {
        let f = make_field(13).unwrap();
        let a = SetFp::new(&f, [1, 4, 6]);
        let fam = family(&FamilySpec::S(SetFp::new(&f, [0]), SetFp::new(&f, [0]))).unwrap();
        let ind = IntFn::indicator(&a);
        let c = action_count(&fam, &ind, &ind, None);
        let hits = a.iter().filter(|&x| x != 0 && a.contains(f.neg(f.inv(x)))).count();
        assert_eq!(c.sigma, int(hits as u64));
        assert!(action_count(&fam, &IntFn::zero(&f), &ind, None).sigma.is_zero());
    }

    #[test]
    fn frobenius_modes() {
        let f = make_field(5).unwrap();
        let mut r = rng(9);
        let a = SetFp::random(&f, 2, &mut r).unwrap();
        let bal = IntFn::balanced(&a);
        let all = all_sl2(&f);
        let big_f = GroupFn::uniform(&f, &all[..30]);
        let phi = IntFn::from_i64(&f, &[1, -2, 0, 3, 1]);
        assert!(frobenius_check(&big_f, &bal, &phi, FrobeniusMode::Inequality).unwrap()[0].passed());
        let rows = frobenius_check(&big_f, &bal, &phi, FrobeniusMode::PowerIteration).unwrap();
        assert!(rows.iter().all(|r| r.passed()), "{rows:?}");
        let z = frobenius_check(&big_f, &IntFn::zero(&f), &phi, FrobeniusMode::PowerIteration).unwrap();
        assert!(z.iter().all(|r| r.passed()));
        assert!(frobenius_check(&big_f, &IntFn::indicator(&a), &phi, FrobeniusMode::Inequality).is_err());
    }
}
