//! Energy-type counts: E⁺, E×, E⁺_k, T⁺_k, four-function energy, D×_k, D′_k, N, N′, σ_P.

mod gamma;

pub use gamma::{gamma_suite, gamma_suite_with, legendre_energy, legendre_energy_formula, GammaParams, GammaReport};

use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{int, rat_pow};
use crate::report::BoundReport;
use crate::sets::SetFp;
use crate::transform::{add_conv, add_corr, mul_conv, IntFn, ZeroPolicy};

/// Exact energy value; denominators are powers of p when balanced functions are involved.
pub type EnergyValue = BigRational;

static K_CAP: AtomicU32 = AtomicU32::new(8);
static DTIMES_CAP: AtomicU32 = AtomicU32::new(4);

/// Largest k accepted by [`tk`] and [`energy_k`].
pub fn k_cap() -> u32 {
    K_CAP.load(Ordering::Relaxed)
}
/// Largest k accepted by the D×_k family.
pub fn dtimes_cap() -> u32 {
    DTIMES_CAP.load(Ordering::Relaxed)
}
pub fn set_caps(k: u32, dtimes: u32) {
    K_CAP.store(k, Ordering::Relaxed);
    DTIMES_CAP.store(dtimes, Ordering::Relaxed);
}

fn check_k(k: u32, cap: u32, what: &str) -> Result<()> {
    if k == 0 {
        return Err(Error::OutOfRange(format!("{what}: k must be at least 1")));
    }
    if k > cap {
        return Err(Error::OutOfRange(format!("{what}: k = {k} exceeds the cap {cap}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Sum,
    Diff,
    Prod,
    Quot,
    KFold(u32),
}

/// r_{A+B}.
pub fn r_sum(a: &SetFp, b: &SetFp) -> IntFn {
    add_conv(&IntFn::indicator(a), &IntFn::indicator(b))
}
/// r_{A−B}(x) = #{(a,b) : a − b = x}.
pub fn r_diff(a: &SetFp, b: &SetFp) -> IntFn {
    add_corr(&IntFn::indicator(b), &IntFn::indicator(a))
}
/// r_{AB}, zero products counted at 0.
pub fn r_prod(a: &SetFp, b: &SetFp) -> IntFn {
    mul_conv(&IntFn::indicator(a), &IntFn::indicator(b), ZeroPolicy::Track)
}
/// r_{A/B} over b ≠ 0.
pub fn r_quot(a: &SetFp, b: &SetFp) -> IntFn {
    mul_conv(&IntFn::indicator(a), &IntFn::indicator(&b.inverses()), ZeroPolicy::Track)
}
/// r_{kA}.
pub fn r_kfold(a: &SetFp, k: u32) -> IntFn {
    crate::transform::add_power(&IntFn::indicator(a), k)
}

pub fn rep_fn(kind: RepKind, a: &SetFp, b: &SetFp) -> IntFn {
    match kind {
        RepKind::Sum => r_sum(a, b),
        RepKind::Diff => r_diff(a, b),
        RepKind::Prod => r_prod(a, b),
        RepKind::Quot => r_quot(a, b),
        RepKind::KFold(k) => r_kfold(a, k),
    }
}

pub fn energy(op: Op, a: &SetFp, b: &SetFp) -> EnergyValue {
    match op {
        Op::Add => r_sum(a, b).l2_sq(),
        Op::Mul => r_prod(a, b).l2_sq(),
    }
}

pub fn e_plus(a: &SetFp) -> EnergyValue {
    energy(Op::Add, a, a)
}
pub fn e_times(a: &SetFp) -> EnergyValue {
    energy(Op::Mul, a, a)
}

/// E⁺_k(f) = Σ_x (f∘f)(x)^k.
pub fn energy_k(f: &IntFn, k: u32) -> Result<EnergyValue> {
    check_k(k, k_cap(), "energy_k")?;
    Ok(energy_k_uncapped(f, k))
}

pub(crate) fn energy_k_uncapped(f: &IntFn, k: u32) -> EnergyValue {
    add_corr(f, f).power_sum(k)
}

pub fn energy_k_set(a: &SetFp, k: u32) -> Result<EnergyValue> {
    energy_k(&IntFn::indicator(a), k)
}

/// T⁺_k(f) = Σ_x (f * … * f)(x)².
pub fn tk(f: &IntFn, k: u32) -> Result<EnergyValue> {
    check_k(k, k_cap(), "tk")?;
    Ok(tk_uncapped(f, k))
}

pub(crate) fn tk_uncapped(f: &IntFn, k: u32) -> EnergyValue {
    crate::transform::add_power(f, k).l2_sq()
}

pub fn tk_set(a: &SetFp, k: u32) -> Result<EnergyValue> {
    tk(&IntFn::indicator(a), k)
}

/// E⁺(f₁,f₂,f₃,f₄) = Σ_{x,y,z} f₁(x)f₂(y)f₃(x+z)f₄(y+z).
pub fn energy4(f1: &IntFn, f2: &IntFn, f3: &IntFn, f4: &IntFn) -> EnergyValue {
    add_corr(f1, f3).inner(&add_corr(f2, f4))
}

/// D×_k for a weight w on differences: Σ_{x≠0} R_k(x)² + Z² under `Track`.
pub fn dtimes_k(w: &IntFn, k: u32, policy: ZeroPolicy) -> Result<EnergyValue> {
    check_k(k, dtimes_cap(), "dtimes_k")?;
    let mut r = w.clone();
    for _ in 1..k {
        r = mul_conv(&r, w, ZeroPolicy::Exclude);
    }
    let d = r.denom_int();
    let d2 = &d * &d;
    let nonzero: BigInt = r.values()[1..].iter().map(|v| v * v).sum();
    let mut total = BigRational::new(nonzero, d2.clone());
    if policy == ZeroPolicy::Track {
        let mass = rat_pow(&w.sum(), k);
        let nz_mass = BigRational::new(r.values()[1..].iter().sum(), d);
        let z = mass - nz_mass;
        total += &z * &z;
    }
    Ok(total)
}

/// D×_k(A): products of k differences of elements of A.
pub fn dtimes_k_set(a: &SetFp, k: u32, policy: ZeroPolicy) -> Result<EnergyValue> {
    dtimes_k(&r_diff(a, a), k, policy)
}

/// D×_k with the difference weight x ↦ Σ_y α(y)β(y+x).
pub fn dtimes_k_weights(alpha: &IntFn, beta: &IntFn, k: u32, policy: ZeroPolicy) -> Result<EnergyValue> {
    dtimes_k(&add_corr(alpha, beta), k, policy)
}

/// D′_k(A) = T⁺_k(r_{AA}); D′₁ is the multiplicative energy.
pub fn dprime_k(a: &SetFp, k: u32) -> Result<EnergyValue> {
    tk(&r_prod(a, a), k)
}

/// N(A,B,C) = #{a(b−c) = a′(b′−c′)}.
pub fn n_quantity(a: &SetFp, b: &SetFp, c: &SetFp) -> EnergyValue {
    mul_conv(&IntFn::indicator(a), &r_diff(b, c), ZeroPolicy::Track).l2_sq()
}

/// N′(A) = #{a₁a₂ + a₃ = a′₁a′₂ + a′₃}.
pub fn nprime(a: &SetFp) -> EnergyValue {
    add_conv(&r_prod(a, a), &IntFn::indicator(a)).l2_sq()
}

/// σ_P(A) = Σ_{x∈P} r_{A−A}(x).
pub fn sigma_p(a: &SetFp, p: &SetFp) -> EnergyValue {
    let r = r_diff(a, a);
    p.iter().map(|x| r.at(x)).fold(BigRational::zero(), |s, v| s + v)
}

/// (Σ_{x∈P} r_{f−f}(x)^k)⁴ ≤ ‖f‖₂^{4k} E⁺_{2k}(f) E⁺(P), both sides exact.
pub fn change_qg_check(f: &IntFn, p: &SetFp, k: u32) -> Result<BoundReport> {
    if p.contains(0) {
        return Err(Error::OutOfRange("P must avoid 0".into()));
    }
    if k == 0 {
        return Err(Error::OutOfRange("change_qg_check: k must be at least 1".into()));
    }
    let r = add_corr(f, f);
    let s = p.iter().fold(BigRational::zero(), |acc, x| acc + rat_pow(&r.at(x), k));
    let lhs = rat_pow(&s, 4);
    let rhs = rat_pow(&f.l2_sq(), 2 * k) * r.power_sum(2 * k) * e_plus(p);
    Ok(BoundReport::assert("energy", "difference-moment-over-set", lhs <= rhs)
        .lhs(lhs)
        .rhs(rhs)
        .with_ratio())
}

/// |A|^n as an exact rational.
pub fn size_pow(a: &SetFp, n: u32) -> BigRational {
    int(num_traits::pow(BigInt::from(a.len()), n as usize))
}

pub fn one() -> BigRational {
    BigRational::one()
}
