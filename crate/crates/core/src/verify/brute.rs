use rand::Rng;

use super::{close_row, exact_row, fold, random_fn, VerifyOpts};
use crate::chars::mul_char;
use crate::energy::{
    dprime_k, dtimes_k_set, energy, energy_k_set, n_quantity, nprime, tk_set, Op,
};
use crate::error::Result;
use crate::expsum::{multilinear_sum, special_sums, trilinear_sum_unit, Rational, SpecialKind};
use crate::field::{make_field, FieldCtx};
use crate::incidence::{collinear_quadruples, collinear_triples, q_function};
use crate::oracle;
use crate::poly::Poly;
use crate::report::BoundReport;
use crate::sets::{rng, SetFp};
use crate::sl2::{action_count, cf_count, family, gl2_image, inverse_diff_count, poly_shift_count, FamilySpec};
use crate::transform::{IntFn, ZeroPolicy};

const SUITE: &str = "oracle";

/// Tuples a single brute-force instance may enumerate.
const BUDGET: f64 = 1e6;

/// Random set whose size keeps size^exp within the budget, at most 12.
fn set(field: &FieldCtx, exp: u32, r: &mut impl Rng) -> Result<SetFp> {
    let cap = (BUDGET.powf(1.0 / exp as f64) as usize).clamp(2, 12).min(field.p() as usize);
    let n = r.gen_range(1..=cap);
    SetFp::random(field, n, r)
}

fn eq_u(claim: &str, lib: u64, brute: u64) -> BoundReport {
    BoundReport::assert(SUITE, claim, lib == brute).lhs(lib).rhs(brute)
}

fn eq_vec<T: PartialEq>(claim: &str, lib: &[T], brute: &[T], total: u64) -> BoundReport {
    let diff = lib.iter().zip(brute).filter(|(a, b)| a != b).count() + lib.len().abs_diff(brute.len());
    BoundReport::assert(SUITE, claim, diff == 0).lhs(total).note(format!("{diff} differing entries"))
}

fn random_poly(field: &FieldCtx, r: &mut impl Rng) -> Poly {
    let p = field.p() as i64;
    let deg = r.gen_range(1..=3);
    let mut c: Vec<i64> = (0..deg).map(|_| r.gen_range(0..p)).collect();
    c.push(r.gen_range(1..p));
    Poly::new(c)
}

pub fn oracle_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let primes = opts.primes(&[7, 11, 31, 101], &[7, 31]);
    let instances = opts.count(20, 3);
    let mut out = Vec::new();
    for p in primes {
        let field = make_field(p)?;
        let mut r = rng(opts.seed ^ (p << 20));
        let mut rows = Vec::new();
        for _ in 0..instances {
            rows.extend(counts(&field, &mut r)?);
            rows.extend(sl2_counts(&field, &mut r)?);
            rows.extend(sums(&field, &mut r)?);
        }
        out.extend(fold(rows, &format!("p={p}")));
    }
    Ok(out)
}

fn counts(field: &FieldCtx, r: &mut impl Rng) -> Result<Vec<BoundReport>> {
    let p = field.p();
    let mut rows = Vec::new();

    let (a, b) = (set(field, 4, r)?, set(field, 4, r)?);
    rows.push(exact_row(SUITE, "energy-add", &energy(Op::Add, &a, &b), &oracle::energy_add(a.elems(), b.elems(), p)?));
    rows.push(exact_row(SUITE, "energy-mul", &energy(Op::Mul, &a, &b), &oracle::energy_mul(a.elems(), b.elems(), p)?));

    for k in 1..=4 {
        let a = set(field, 2 * k, r)?;
        rows.push(exact_row(SUITE, &format!("energy-k/k={k}"), &energy_k_set(&a, k)?, &oracle::energy_k(a.elems(), k, p)?));
        let a = set(field, 2 * k, r)?;
        rows.push(exact_row(SUITE, &format!("tk/k={k}"), &tk_set(&a, k)?, &oracle::tk(a.elems(), k, p)?));
    }
    for k in 1..=2 {
        let a = set(field, 4 * k, r)?;
        rows.push(exact_row(
            SUITE,
            &format!("dtimes/k={k}"),
            &dtimes_k_set(&a, k, ZeroPolicy::Track)?,
            &oracle::dtimes_k(a.elems(), k, p)?,
        ));
        let a = set(field, 4 * k, r)?;
        rows.push(exact_row(SUITE, &format!("dprime/k={k}"), &dprime_k(&a, k)?, &oracle::dprime_k(a.elems(), k, p)?));
    }

    let (a, b, c) = (set(field, 6, r)?, set(field, 6, r)?, set(field, 6, r)?);
    rows.push(exact_row(SUITE, "n-quantity", &n_quantity(&a, &b, &c), &oracle::n_quantity(a.elems(), b.elems(), c.elems(), p)?));
    let a = set(field, 6, r)?;
    rows.push(exact_row(SUITE, "nprime", &nprime(&a), &oracle::nprime(a.elems(), p)?));

    let a = set(field, 6, r)?;
    rows.push(exact_row(SUITE, "collinear-triples", &collinear_triples(&a), &oracle::collinear_triples(a.elems(), p)?));

    let q: Vec<SetFp> = (0..4).map(|_| set(field, 8, r)).collect::<Result<_>>()?;
    let brute = oracle::collinear_quadruples(q[0].elems(), q[1].elems(), q[2].elems(), q[3].elems(), p)?;
    rows.push(exact_row(SUITE, "collinear-quadruples", &collinear_quadruples(&q[0], &q[1], &q[2], &q[3]), &brute));
    let table = q_function(&q[0], &q[1], &q[2], &q[3]);
    let brute_table = oracle::q_table(q[0].elems(), q[1].elems(), q[2].elems(), q[3].elems(), p)?;
    rows.push(eq_vec("q-function", &table.counts, &brute_table, table.counts.iter().sum()));
    rows.push(exact_row(SUITE, "q-function-total", &table.total(), &brute));
    Ok(rows)
}

fn sl2_counts(field: &FieldCtx, r: &mut impl Rng) -> Result<Vec<BoundReport>> {
    let p = field.p();
    let mut rows = Vec::new();

    for k in 1..=3 {
        let a = set(field, k, r)?;
        let lib = cf_count(&a, k)?;
        rows.push(eq_vec(&format!("cf-count/k={k}"), &lib.counts, &oracle::cf_count(a.elems(), k, p)?, lib.total() as u64));
    }

    let (a1, a2) = (set(field, 2, r)?, set(field, 2, r)?);
    let lambda = r.gen_range(1..p);
    let lib = inverse_diff_count(&a1, &a2, lambda, None)?;
    rows.push(exact_row(SUITE, "inverse-difference", &lib.count, &oracle::inverse_diff(a1.elems(), a2.elems(), lambda, p).into()));

    let (a, b) = (set(field, 4, r)?, set(field, 4, r)?);
    let (p1, p2) = (random_poly(field, r), random_poly(field, r));
    let lib = poly_shift_count(&a, &b, &p1, &p2)?;
    let (coll, image) = oracle::poly_shift(a.elems(), b.elems(), p1.coeffs(), p2.coeffs(), p)?;
    rows.push(exact_row(SUITE, "polynomial-shift-collisions", &lib.collisions, &coll.into()));
    rows.push(eq_u("polynomial-shift-image", lib.image as u64, image as u64));

    let g: Vec<SetFp> = (0..4).map(|_| set(field, 4, r)).collect::<Result<_>>()?;
    let lib = gl2_image(&g[0], &g[1], &g[2], &g[3]);
    let brute = oracle::gl2_image(g[0].elems(), g[1].elems(), g[2].elems(), g[3].elems(), p)?;
    rows.push(eq_u("gl2-image", lib.image as u64, brute as u64));

    let (b1, b2) = (set(field, 2, r)?, set(field, 2, r)?);
    let f1 = random_fn(field, -4, 4, r);
    let f2 = random_fn(field, -4, 4, r);
    let fam = family(&FamilySpec::S(b1.clone(), b2.clone()))?;
    let lib = action_count(&fam, &f1, &f2, None);
    let mats = oracle::s_family(b1.elems(), b2.elems(), p);
    let brute = oracle::action_count(&mats, &ints(&f1), &ints(&f2), p);
    rows.push(exact_row(SUITE, "action-count", &lib.sigma, &brute));
    Ok(rows)
}

fn ints(f: &IntFn) -> Vec<i64> {
    f.numer_i64().expect("small integer function")
}

fn sums(field: &FieldCtx, r: &mut impl Rng) -> Result<Vec<BoundReport>> {
    let p = field.p();
    let mut rows = Vec::new();

    let xyz: Vec<SetFp> = (0..3).map(|_| set(field, 3, r)).collect::<Result<_>>()?;
    let lib = trilinear_sum_unit(&xyz[0], &xyz[1], &xyz[2]).value;
    rows.push(close_row(SUITE, "trilinear-sum", lib, oracle::trilinear(xyz[0].elems(), xyz[1].elems(), xyz[2].elems(), p)));

    let sets: Vec<SetFp> = (0..4).map(|_| set(field, 4, r)).collect::<Result<_>>()?;
    let lib = multilinear_sum(&sets)?.value;
    let refs: Vec<&[u64]> = sets.iter().map(|s| s.elems()).collect();
    rows.push(close_row(SUITE, "multilinear-sum/r=4", lib, oracle::multilinear(&refs, p)?));

    let f = random_fn(field, -3, 3, r);
    let g = random_fn(field, -3, 3, r);
    let (fv, gv) = (f.to_f64(), g.to_f64());
    let b = set(field, 2, r)?;
    let chi = mul_char(field, 2)?;
    let chi_brute = oracle::character(p, 2);
    let r1 = Rational { num: random_poly(field, r), den: Poly::new(vec![1]) };
    let r2 = Rational { num: random_poly(field, r), den: random_poly(field, r) };
    let polys = [r1.num.coeffs(), r1.den.coeffs(), r2.num.coeffs(), r2.den.coeffs()];
    for kind in [SpecialKind::InvShiftE, SpecialKind::InvShiftChi, SpecialKind::RationalE, SpecialKind::RationalChi] {
        let lib = special_sums(kind, &f, &g, &b, Some(&chi), Some(&r1), Some(&r2))?.sum.value;
        let brute = match kind {
            SpecialKind::InvShiftE => oracle::inv_shift(&fv, &gv, b.elems(), None, p),
            SpecialKind::InvShiftChi => oracle::inv_shift(&fv, &gv, b.elems(), Some(&chi_brute), p),
            SpecialKind::RationalE => oracle::rational(&fv, &gv, b.elems(), polys, None, p),
            SpecialKind::RationalChi => oracle::rational(&fv, &gv, b.elems(), polys, Some(&chi_brute), p),
        };
        rows.push(close_row(SUITE, &format!("special-sum/{kind:?}"), lib, brute));
    }
    Ok(rows)
}
