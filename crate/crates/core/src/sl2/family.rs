use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use serde::Serialize;

use super::{all_sl2, gl2_quotient, mobius, random_sl2, sl2_inv, sl2_mul, GL2Elem, ProjPoint, SL2Elem, MAX_DENSE_P};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{rank_mod_p, Poly, Rational};
use crate::report::{BoundReport, Kind};
use crate::sets::{rng, SetFp};

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// (0 −1; 1 a), a ∈ B.
    Sprime(SetFp),
    /// (b −1+ab; 1 a), a ∈ B₁, b ∈ B₂.
    S(SetFp, SetFp),
    /// (1 r₁(b); r₂(b) 1+r₁(b)r₂(b)), b ∈ B.
    Srational(Rational, Rational, SetFp),
    /// (1 b₁; b₂ b₃), b₃ ≠ b₁b₂.
    GL2(SetFp, SetFp, SetFp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    Sprime,
    S,
    Srational,
    GL2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    pub kind: FamilyKind,
    pub field: FieldCtx,
    pub elems: Vec<GL2Elem>,
    /// Parameters dropped for a vanishing denominator or determinant.
    pub skipped: u64,
    /// Size parameter of the intersection bounds: max |Bᵢ|, or the maximal degree for rational families.
    pub m: u64,
}

impl MatrixFamily {
    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
    /// Elements as SL₂ members; None for a GL₂ family.
    pub fn sl2_elems(&self) -> Option<Vec<SL2Elem>> {
        if self.kind == FamilyKind::GL2 {
            return None;
        }
        self.elems.iter().map(|g| g.to_sl2()).collect()
    }
}

fn check_independent(field: &FieldCtx, named: &[(&str, Poly)]) -> Result<()> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (i, (name, poly)) in named.iter().enumerate() {
        rows.push(poly.reduce(field).coeffs().iter().map(|&c| c as u64).collect());
        if rank_mod_p(field, &rows) < rows.len() {
            let prev: Vec<&str> = named[..i].iter().map(|(n, _)| *n).collect();
            return Err(Error::Dependent(format!("{name} is a linear combination of {{{}}}", prev.join(", "))));
        }
    }
    Ok(())
}

pub fn family(spec: &FamilySpec) -> Result<MatrixFamily> {
    let mut skipped = 0u64;
    let (kind, field, elems, m) = match spec {
        FamilySpec::Sprime(b) => {
            let f = b.field();
            let e = b.iter().map(|a| GL2Elem::new(f, 0, f.neg(1), 1, a)).collect::<Result<Vec<_>>>()?;
            (FamilyKind::Sprime, f.clone(), e, b.len() as u64)
        }
        FamilySpec::S(b1, b2) => {
            let f = b1.field();
            if b2.field() != f {
                return Err(Error::FieldMismatch(f.p(), b2.p()));
            }
            let mut e = Vec::with_capacity(b1.len() * b2.len());
            for a in b1.iter() {
                for b in b2.iter() {
                    e.push(GL2Elem::new(f, b, f.sub(f.mul(a, b), 1), 1, a)?);
                }
            }
            (FamilyKind::S, f.clone(), e, b1.len().max(b2.len()) as u64)
        }
        FamilySpec::Srational(r1, r2, b) => {
            let f = b.field();
            let (p1, q1, p2, q2) = (&r1.num, &r1.den, &r2.num, &r2.den);
            let m = |x: &Poly, y: &Poly| x.mul(y, f);
            check_independent(
                f,
                &[("p1*p2", m(p1, p2)), ("p1*q2", m(p1, q2)), ("p2*q1", m(p2, q1)), ("q1*q2", m(q1, q2))],
            )?;
            check_independent(
                f,
                &[
                    ("p1*q1*q2", m(&m(p1, q1), q2)),
                    ("p1*p2*q1", m(&m(p1, p2), q1)),
                    ("p1^2*p2", m(&m(p1, p1), p2)),
                    ("q1^2*q2", m(&m(q1, q1), q2)),
                    ("q1^2*p2", m(&m(q1, q1), p2)),
                ],
            )?;
            let mut e = Vec::new();
            for x in b.iter() {
                match (r1.eval(f, x), r2.eval(f, x)) {
                    (Some(u), Some(v)) => e.push(GL2Elem::new(f, 1, u, v, f.add(1, f.mul(u, v)))?),
                    _ => skipped += 1,
                }
            }
            let deg = [p1, q1, p2, q2].iter().map(|p| p.degree()).max().unwrap_or(0);
            (FamilyKind::Srational, f.clone(), e, deg as u64)
        }
        FamilySpec::GL2(b1, b2, b3) => {
            let f = b1.field();
            let mut e = Vec::new();
            for x in b1.iter() {
                for y in b2.iter() {
                    for z in b3.iter() {
                        if z == f.mul(x, y) {
                            skipped += 1;
                        } else {
                            e.push(GL2Elem::new(f, 1, x, y, z)?);
                        }
                    }
                }
            }
            (FamilyKind::GL2, f.clone(), e, b1.len().max(b2.len()).max(b3.len()) as u64)
        }
    };
    let mut elems = elems;
    elems.sort_unstable();
    elems.dedup();
    Ok(MatrixFamily { kind, field, elems, skipped, m })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeReport {
    /// max over z,w of |{h : hz = w}| counted with multiplicity.
    pub borel_max: u64,
    pub borel_at: Option<(ProjPoint, ProjPoint)>,
    pub dihedral_max: u64,
    /// Whether every dihedral coset was visited.
    pub dihedral_exhaustive: bool,
    pub rows: Vec<BoundReport>,
}

/// The multiset on which coset counts are taken: the family itself, or g′⁻¹g over equal-determinant pairs.
fn coset_multiset(fam: &MatrixFamily) -> Vec<SL2Elem> {
    if let Some(s) = fam.sl2_elems() {
        return s;
    }
    let mut by_det: BTreeMap<u32, Vec<&GL2Elem>> = BTreeMap::new();
    for g in &fam.elems {
        by_det.entry(g.det).or_default().push(g);
    }
    let mut out = Vec::new();
    for group in by_det.values() {
        for g1 in group {
            for g in group {
                out.push(gl2_quotient(&fam.field, g1, g));
            }
        }
    }
    out
}

/// Largest |{h : hz = w}|; every Borel coset g₁𝔅g₂ is such a set.
fn borel_counts(field: &FieldCtx, hs: &[SL2Elem]) -> (u64, Option<(ProjPoint, ProjPoint)>) {
    let p = field.p();
    let n = p as usize + 1;
    let mut best = (0u64, None);
    let mut count = vec![0u64; n];
    for z in ProjPoint::all(p) {
        count.iter_mut().for_each(|c| *c = 0);
        for h in hs {
            count[mobius(p, h.entries(), z).index(p)] += 1;
        }
        for (i, &c) in count.iter().enumerate() {
            if c > best.0 {
                best = (c, Some((z, ProjPoint::from_index(i, p))));
            }
        }
    }
    best
}

/// Dihedral subgroups: the torus {(α εβ; β α) : α² − εβ² = 1} extended by an order-4 element,
/// for ε = 1 (split) and ε a non-residue (non-split).
pub fn dihedral_subgroups(field: &FieldCtx) -> Vec<Vec<SL2Elem>> {
    let p = field.p();
    let mut out = Vec::new();
    for eps in [1, field.nonresidue()] {
        let mut torus = Vec::new();
        for a in 0..p {
            for b in 0..p {
                if field.sub(field.mul(a, a), field.mul(eps, field.mul(b, b))) == 1 {
                    torus.push(SL2Elem::raw(a, field.mul(eps, b), b, a));
                }
            }
        }
        let w = (0..p)
            .flat_map(|a| (0..p).map(move |c| (a, c)))
            .find(|&(a, c)| field.sub(field.mul(a, a), field.mul(eps, field.mul(c, c))) == p - 1)
            .map(|(a, c)| SL2Elem::raw(a, field.neg(field.mul(eps, c)), c, field.neg(a)))
            .expect("a² − εc² = −1 is solvable");
        let mut d: Vec<SL2Elem> = torus.iter().flat_map(|t| [*t, sl2_mul(field, &w, t)]).collect();
        d.sort_unstable();
        d.dedup();
        out.push(d);
    }
    out
}

fn dihedral_exhaustive(field: &FieldCtx, hs: &[SL2Elem]) -> u64 {
    let all = all_sl2(field);
    let mut best = 0;
    for d in dihedral_subgroups(field) {
        let mut seen: HashSet<Vec<SL2Elem>> = HashSet::new();
        for t in &all {
            let ti = sl2_inv(field, t);
            let mut conj: Vec<SL2Elem> = d.iter().map(|x| sl2_mul(field, &sl2_mul(field, t, x), &ti)).collect();
            conj.sort_unstable();
            if !seen.insert(conj.clone()) {
                continue;
            }
            let mut labels: HashMap<SL2Elem, u64> = HashMap::new();
            for h in hs {
                let label = conj.iter().map(|x| sl2_mul(field, x, h)).min().expect("nonempty subgroup");
                *labels.entry(label).or_default() += 1;
            }
            best = best.max(labels.values().copied().max().unwrap_or(0));
        }
    }
    best
}

/// Cosets g₁Dg₂ anchored at a random member h₀ = g₁g₂ of the multiset.
fn dihedral_sampled(field: &FieldCtx, hs: &[SL2Elem], trials: usize, seed: u64) -> u64 {
    let mut r = rng(seed);
    let mut best = 0;
    if hs.is_empty() {
        return 0;
    }
    for d in dihedral_subgroups(field) {
        let members: HashSet<SL2Elem> = d.into_iter().collect();
        for _ in 0..trials {
            let g2 = random_sl2(field, &mut r);
            let h0 = hs[r.gen_range(0..hs.len())];
            let g1 = sl2_mul(field, &h0, &sl2_inv(field, &g2));
            let (g1i, g2i) = (sl2_inv(field, &g1), sl2_inv(field, &g2));
            let c = hs.iter().filter(|h| members.contains(&sl2_mul(field, &sl2_mul(field, &g1i, h), &g2i))).count();
            best = best.max(c as u64);
        }
    }
    best
}

/// Largest intersection of the family with cosets of Borel and dihedral subgroups, against the family's bound.
pub fn coset_escape(fam: &MatrixFamily, trials: usize, seed: u64) -> EscapeReport {
    let field = &fam.field;
    let hs = coset_multiset(fam);
    let (borel_max, borel_at) = borel_counts(field, &hs);
    let exhaustive = field.p() <= MAX_DENSE_P;
    let dihedral_max = if hs.is_empty() {
        0
    } else if exhaustive {
        dihedral_exhaustive(field, &hs)
    } else {
        dihedral_sampled(field, &hs, trials.max(1), seed)
    };
    let m = fam.m;
    let (borel_bound, dihedral_bound, claim) = match fam.kind {
        FamilyKind::S => (m, 8 * m, "family-coset-intersection"),
        FamilyKind::Srational => (2 * m, 12 * m, "rational-family-coset-intersection"),
        FamilyKind::GL2 => (100 * m.pow(4), 100 * m.pow(4), "gl2-family-coset-intersection"),
        FamilyKind::Sprime => {
            let n = fam.len() as u64;
            let r = (n as f64).sqrt().ceil() as u64;
            (r, 8 * r, "sprime-coset-intersection")
        }
    };
    let at = borel_at.map(|(z, w)| format!("z={z}, w={w}")).unwrap_or_default();
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    let rows = if fam.kind == FamilyKind::Sprime {
        let violated = borel_max > borel_bound;
        vec![
            BoundReport::new("sl2", &format!("{claim}/borel"), Kind::Ratio)
                .lhs(borel_max)
                .rhs(borel_bound)
                .with_ratio()
                .note(if violated { format!("bound violated at {at}") } else { format!("no violation; max at {at}") }),
            BoundReport::new("sl2", &format!("{claim}/dihedral"), Kind::Ratio)
                .lhs(dihedral_max)
                .rhs(dihedral_bound)
                .with_ratio()
                .note(mode),
        ]
    } else {
        vec![
            BoundReport::assert("sl2", &format!("{claim}/borel"), borel_max <= borel_bound)
                .lhs(borel_max)
                .rhs(borel_bound)
                .note(at),
            BoundReport::assert("sl2", &format!("{claim}/dihedral"), dihedral_max <= dihedral_bound)
                .lhs(dihedral_max)
                .rhs(dihedral_bound)
                .note(mode),
        ]
    };
    EscapeReport { borel_max, borel_at, dihedral_max, dihedral_exhaustive: exhaustive, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::sl2::{generated, sl2_order};

    #[test]
    fn shapes() {
        let f = make_field(13).unwrap();
        let b1 = SetFp::new(&f, [1, 2, 3]);
        let b2 = SetFp::new(&f, [4, 5, 7]);
        let s = family(&FamilySpec::S(b1.clone(), b2.clone())).unwrap();
        assert_eq!(s.len(), 9);
        assert!(s.elems.iter().all(|g| g.det == 1));
        assert_eq!(family(&FamilySpec::Sprime(b1.clone())).unwrap().len(), 3);
        let r1: Rational = "0,1".parse().unwrap();
        let r2: Rational = "0,0,1".parse().unwrap();
        let fam = family(&FamilySpec::Srational(r1, r2, SetFp::full(&f))).unwrap();
        for g in &fam.elems {
            let u = g.b as u64;
            assert_eq!(g.a, 1);
            assert_eq!(g.c as u64, f.mul(u, u));
            assert_eq!(g.d as u64, f.add(1, f.mul(u, g.c as u64)));
        }
        assert_eq!(fam.m, 2);
        let c: Rational = "3".parse().unwrap();
        let err = family(&FamilySpec::Srational(c, "0,1".parse().unwrap(), b1.clone())).unwrap_err();
        assert!(matches!(err, Error::Dependent(_)));
        let g = family(&FamilySpec::GL2(b1.clone(), b1.clone(), b1)).unwrap();
        assert_eq!(g.len() as u64 + g.skipped, 27);
    }

    #[test]
    fn dihedral_orders() {
        for p in [5u64, 7, 11, 13] {
            let f = make_field(p).unwrap();
            let ds = dihedral_subgroups(&f);
            assert_eq!(ds[0].len() as u64, 2 * (p - 1));
            assert_eq!(ds[1].len() as u64, 2 * (p + 1));
            for d in ds {
                assert_eq!(generated(&f, &d).len(), d.len());
                assert!(sl2_order(p) % d.len() as u64 == 0);
            }
        }
    }

    #[test]
    fn escape_rows() {
        let f = make_field(7).unwrap();
        let b = SetFp::new(&f, [1, 2, 3, 4]);
        let s = family(&FamilySpec::S(b.clone(), b.clone())).unwrap();
        let rep = coset_escape(&s, 10, 1);
        assert!(rep.rows.iter().all(|r| r.passed()), "{:?}", rep.rows);
        let sp = family(&FamilySpec::Sprime(b.clone())).unwrap();
        let rep = coset_escape(&sp, 10, 1);
        assert_eq!(rep.borel_max, 4);
        assert_eq!(rep.borel_at, Some((ProjPoint::Inf, ProjPoint::Fin(0))));
        let empty = family(&FamilySpec::S(SetFp::empty(&f), b)).unwrap();
        assert_eq!(coset_escape(&empty, 10, 1).borel_max, 0);
    }
}
