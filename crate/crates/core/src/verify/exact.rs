use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{fold, random_fn, random_mean_zero, VerifyOpts};
use crate::energy::{
    change_qg_check, e_plus, energy, energy4, energy_k, energy_k_set, gamma_suite, legendre_energy,
    legendre_energy_formula, tk_set, Op,
};
use crate::error::Result;
use crate::field::make_field;
use crate::incidence::design_bound_check;
use crate::numeric::{big_pow, rat_pow};
use crate::report::BoundReport;
use crate::sets::{rng, subgroup, SetFp};
use crate::sl2::{frobenius_check, random_sl2, FrobeniusMode, GroupFn};
use crate::transform::{identity_suite, IntFn};

pub fn identities_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let primes = opts.primes(&[101, 257, 1009, 4099], &[101, 257, 1009, 4099]);
    let pairs = opts.count(50, 5);
    let mut out = Vec::new();
    for p in primes {
        let field = make_field(p)?;
        let mut r = rng(opts.seed ^ p);
        let mut rows = Vec::new();
        for _ in 0..pairs {
            let f = random_fn(&field, -1000, 1000, &mut r);
            let g = random_fn(&field, -1000, 1000, &mut r);
            rows.extend(identity_suite(&f, &g));
        }
        out.extend(fold(rows, &format!("p={p}")));
    }
    Ok(out)
}

pub fn design_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let trials = opts.count(100, 10);
    let mut out = Vec::new();
    for q in [2u64, 3, 5] {
        let mut r = rng(opts.seed ^ (q << 8));
        let n = (q * q * q + q * q + q + 1) as usize;
        let mut rows = Vec::new();
        for _ in 0..trials {
            let mut alpha: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let mean = alpha.iter().sum::<f64>() / n as f64;
            alpha.iter_mut().for_each(|x| *x -= mean);
            let beta: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            rows.extend(design_bound_check(q, &alpha, &beta)?);
        }
        out.extend(fold(rows, &format!("q={q}")));
    }
    Ok(out)
}

const SUITE: &str = "inequalities";

fn le(claim: &str, lhs: BigRational, rhs: BigRational) -> BoundReport {
    BoundReport::assert(SUITE, claim, lhs <= rhs).lhs(lhs).rhs(rhs).with_ratio()
}

fn pow_n(n: usize, e: u32) -> BigRational {
    BigRational::from(big_pow(n as u64, e))
}

pub fn inequalities_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let trials = opts.count(100, 10);
    let mut out = Vec::new();
    out.extend(set_inequalities(opts.seed, trials)?);
    out.extend(gamma_lower(opts.seed, trials)?);
    out.extend(legendre_rows()?);
    out.extend(frobenius_rows(opts.seed, opts.count(1000, 50), opts.count(10, 2))?);
    Ok(out)
}

fn set_inequalities(seed: u64, trials: usize) -> Result<Vec<BoundReport>> {
    let p = 101;
    let field = make_field(p)?;
    let mut r = rng(seed ^ 0x1e);
    let mut rows = Vec::new();
    for _ in 0..trials {
        let n = r.gen_range(2..=20);
        let m = r.gen_range(2..=20);
        let a = SetFp::random(&field, n, &mut r)?;
        let b = SetFp::random(&field, m, &mut r)?;

        let e = energy(Op::Add, &a, &b);
        let rhs = pow_n(n, 2) * pow_n(m, 1);
        rows.push(le("energy-cauchy-schwarz/a2b", e.clone(), rhs));
        rows.push(le("energy-cauchy-schwarz/ab2", e.clone(), pow_n(n, 1) * pow_n(m, 2)));
        rows.push(le("energy-cauchy-schwarz/squared", rat_pow(&e, 2), pow_n(n, 3) * pow_n(m, 3)));

        let sets: Vec<SetFp> =
            (0..4).map(|_| SetFp::random(&field, r.gen_range(1..=16), &mut r)).collect::<Result<_>>()?;
        let fs: Vec<IntFn> = sets.iter().map(IntFn::indicator).collect();
        let lhs = rat_pow(&energy4(&fs[0], &fs[1], &fs[2], &fs[3]), 4);
        let rhs = sets.iter().fold(BigRational::one(), |acc, s| acc * e_plus(s));
        rows.push(le("energy-holder", lhs, rhs));

        let mut prev = pow_n(n, 1);
        for k in 2..=4 {
            let t = tk_set(&a, k)?;
            rows.push(le(&format!("tk-recursive/k={k}"), t.clone(), pow_n(n, 2) * &prev));
            rows.push(le(&format!("tk-norm/k={k}"), t.clone(), pow_n(n, 2 * k - 1)));
            prev = t;
        }

        let ek: Vec<BigRational> = (1..=4).map(|k| energy_k_set(&a, k)).collect::<Result<_>>()?;
        for k in 1..=4u32 {
            let v = &ek[k as usize - 1];
            rows.push(
                BoundReport::assert(SUITE, &format!("energy-k-range/k={k}"), pow_n(n, k) <= *v && *v <= pow_n(n, k + 1))
                    .lhs(v.clone())
                    .rhs(pow_n(n, k + 1)),
            );
            for l in 1..k {
                rows.push(le(
                    &format!("energy-k-crude/k={k},l={l}"),
                    v.clone(),
                    pow_n(n, k - l) * &ek[l as usize - 1],
                ));
            }
        }

        let bal = IntFn::balanced(&a);
        for k in [2u32, 4, 6] {
            let v = energy_k(&bal, k)?;
            rows.push(
                BoundReport::assert(SUITE, &format!("balanced-energy-nonnegative/k={k}"), v >= BigRational::zero())
                    .lhs(v)
                    .rhs(BigRational::zero()),
            );
        }

        let f = random_fn(&field, -3, 3, &mut r);
        let pset = SetFp::random(&field, r.gen_range(1..=15), &mut r)?.without_zero();
        if !pset.is_empty() {
            for k in 1..=2 {
                let mut row = change_qg_check(&f, &pset, k)?;
                row.suite = SUITE.into();
                row.claim_ref = format!("{}/k={k}", row.claim_ref);
                rows.push(row);
            }
        }

        rows.push(norm_row(&field, &mut r)?);
    }
    Ok(fold(rows, ""))
}

/// (Σⱼ E×(Aⱼ,X)^{1/2})² ≥ E×(A₁ ∪ A₂, X) for a two-part partition, compared without square roots.
fn norm_row(field: &crate::field::FieldCtx, r: &mut impl Rng) -> Result<BoundReport> {
    let a = SetFp::random(field, r.gen_range(2..=30), r)?;
    let x = SetFp::random(field, r.gen_range(1..=30), r)?;
    let mut elems = a.elems().to_vec();
    elems.shuffle(r);
    let cut = r.gen_range(1..elems.len());
    let a1 = SetFp::new(field, elems[..cut].iter().copied());
    let a2 = SetFp::new(field, elems[cut..].iter().copied());
    let (e1, e2, e) = (energy(Op::Mul, &a1, &x), energy(Op::Mul, &a2, &x), energy(Op::Mul, &a, &x));
    let gap = &e - &e1 - &e2;
    let ok = gap <= BigRational::zero() || rat_pow(&gap, 2) <= BigRational::from(BigInt::from(4)) * &e1 * &e2;
    Ok(BoundReport::assert(SUITE, "multiplicative-energy-norm", ok).lhs(e).note("two-part partition"))
}

fn gamma_lower(seed: u64, trials: usize) -> Result<Vec<BoundReport>> {
    let primes = [13u64, 29, 31, 37, 41, 43, 61, 73, 97, 101];
    let mut r = rng(seed ^ 0x6a);
    let mut rows = Vec::new();
    for _ in 0..trials {
        let p = *primes.choose(&mut r).unwrap();
        let field = make_field(p)?;
        let divisors: Vec<u64> = (2..p - 1).filter(|t| (p - 1) % t == 0).collect();
        let t = *divisors.choose(&mut r).unwrap();
        let gamma = subgroup(&field, t)?;
        let rep = gamma_suite(&gamma, &IntFn::balanced(&gamma), 2)?;
        rows.extend(rep.rows.into_iter().filter(|row| row.claim_ref.starts_with("subgroup-additive-energy-lower")));
    }
    Ok(fold(rows, ""))
}

fn legendre_rows() -> Result<Vec<BoundReport>> {
    let mut rows = Vec::new();
    for p in [13u64, 29] {
        let field = make_field(p)?;
        for k in 1..=6 {
            let got = legendre_energy(&field, k)?;
            let want = BigRational::from(legendre_energy_formula(p, k));
            rows.push(
                BoundReport::assert(SUITE, &format!("legendre-energy/p={p},k={k}"), got == want).lhs(got).rhs(want),
            );
        }
    }
    Ok(rows)
}

fn random_group_fn(field: &crate::field::FieldCtx, r: &mut impl Rng) -> GroupFn {
    let mut w = BTreeMap::new();
    for _ in 0..r.gen_range(1..=12) {
        let v: i64 = r.gen_range(-5..=5);
        if v != 0 {
            w.insert(random_sl2(field, r), BigInt::from(v));
        }
    }
    if w.is_empty() {
        w.insert(random_sl2(field, r), BigInt::one());
    }
    GroupFn::new(field, w, BigUint::one())
}

fn frobenius_rows(seed: u64, trials: usize, power_trials: usize) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let field = make_field(p)?;
        let mut r = rng(seed ^ (p << 16));
        let mut rows = Vec::new();
        for _ in 0..trials {
            let big_f = random_group_fn(&field, &mut r);
            let f = random_mean_zero(&field, -5, 5, &mut r);
            let phi = random_fn(&field, -5, 5, &mut r);
            rows.extend(frobenius_check(&big_f, &f, &phi, FrobeniusMode::Inequality)?);
        }
        if p <= 7 {
            for _ in 0..power_trials {
                let big_f = random_group_fn(&field, &mut r);
                let f = random_mean_zero(&field, -5, 5, &mut r);
                let phi = random_fn(&field, -5, 5, &mut r);
                rows.extend(frobenius_check(&big_f, &f, &phi, FrobeniusMode::PowerIteration)?);
            }
        }
        out.extend(fold(rows, &format!("p={p}")).into_iter().map(|mut row| {
            row.suite = SUITE.into();
            row
        }));
    }
    Ok(out)
}
