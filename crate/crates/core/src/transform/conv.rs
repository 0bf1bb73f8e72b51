use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::intfn::IntFn;
use super::ntt;

static THRESHOLD: AtomicUsize = AtomicUsize::new(512);

/// Length from which the NTT path is used automatically.
pub fn conv_threshold() -> usize {
    THRESHOLD.load(Ordering::Relaxed)
}
pub fn set_conv_threshold(n: usize) {
    THRESHOLD.store(n, Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvPath {
    Auto,
    Direct,
    Ntt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    /// Products with a zero factor are counted at 0.
    #[default]
    Track,
    /// Position 0 of the result is forced to 0.
    Exclude,
}

fn direct_i128(a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
    let n = a.len();
    let ma = a.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
    let mb = b.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
    let bound = (n as u128).checked_mul(ma)?.checked_mul(mb)?;
    if bound >= i128::MAX as u128 {
        return None;
    }
    let mut out = vec![0i128; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[(i + j) % n] += x as i128 * y as i128;
            }
        }
    }
    Some(out)
}

fn direct_big(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % n] += x * y;
            }
        }
    }
    out
}

/// Exact cyclic convolution of integer sequences of equal length.
pub fn cyclic_conv_i64(a: &[i64], b: &[i64], path: ConvPath) -> Option<Vec<i128>> {
    let use_ntt = match path {
        ConvPath::Direct => false,
        ConvPath::Ntt => true,
        ConvPath::Auto => a.len() >= conv_threshold(),
    };
    if use_ntt && ntt::fits(a, b) {
        return Some(ntt::cyclic_conv(a, b));
    }
    direct_i128(a, b)
}

pub fn cyclic_conv(a: &[BigInt], b: &[BigInt], path: ConvPath) -> Vec<BigInt> {
    assert_eq!(a.len(), b.len());
    let small = |v: &[BigInt]| v.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>();
    if let (Some(sa), Some(sb)) = (small(a), small(b)) {
        if let Some(r) = cyclic_conv_i64(&sa, &sb, path) {
            return r.into_iter().map(BigInt::from).collect();
        }
    }
    direct_big(a, b)
}

/// (f*g)(x) = Σ_y f(y)g(x−y).
pub fn add_conv(f: &IntFn, g: &IntFn) -> IntFn {
    add_conv_with(f, g, ConvPath::Auto)
}

pub fn add_conv_with(f: &IntFn, g: &IntFn, path: ConvPath) -> IntFn {
    assert_eq!(f.field(), g.field());
    let v = cyclic_conv(f.values(), g.values(), path);
    IntFn::new(f.field(), v, f.denom() * g.denom())
}

/// (f∘g)(x) = Σ_y f(y)g(y+x); real-valued f so no conjugation.
pub fn add_corr(f: &IntFn, g: &IntFn) -> IntFn {
    add_conv(&f.reflect(), g)
}

pub fn add_corr_with(f: &IntFn, g: &IntFn, path: ConvPath) -> IntFn {
    add_conv_with(&f.reflect(), g, path)
}

/// (f·g)(x) = Σ_{uv=x} f(u)g(v) via the discrete-log change of variables.
pub fn mul_conv(f: &IntFn, g: &IntFn, policy: ZeroPolicy) -> IntFn {
    mul_conv_with(f, g, policy, ConvPath::Auto)
}

pub fn mul_conv_with(f: &IntFn, g: &IntFn, policy: ZeroPolicy, path: ConvPath) -> IntFn {
    assert_eq!(f.field(), g.field());
    let field = f.field();
    let n = field.order();
    let lift = |h: &IntFn| (0..n).map(|k| h.numer(field.pow_g(k)).clone()).collect::<Vec<_>>();
    let c = cyclic_conv(&lift(f), &lift(g), path);
    let mut out = vec![BigInt::zero(); field.p() as usize];
    for (k, v) in c.into_iter().enumerate() {
        out[field.pow_g(k as u64) as usize] = v;
    }
    if policy == ZeroPolicy::Track {
        let (f0, g0) = (f.numer(0), g.numer(0));
        let sf: BigInt = f.values().iter().sum();
        let sg: BigInt = g.values().iter().sum();
        out[0] = f0 * &sg + g0 * &sf - f0 * g0;
    }
    IntFn::new(field, out, f.denom() * g.denom())
}

/// k-fold additive convolution f * … * f.
pub fn add_power(f: &IntFn, k: u32) -> IntFn {
    assert!(k >= 1);
    let mut acc = f.clone();
    for _ in 1..k {
        acc = add_conv(&acc, f);
    }
    acc
}
