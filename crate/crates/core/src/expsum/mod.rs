//! Exponential and character sums with product phases, and explicit saving exponents.

mod exponents;
mod special;

pub use exponents::{bound_exponent, ExponentSpec, Variant};
pub use special::{special_sum_report, special_sums, Rational, SpecialKind, SpecialSum};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::chars::RootTable;
use crate::numeric::ComplexSum;
use crate::sets::SetFp;
use crate::transform::{mul_conv, IntFn, ZeroPolicy};

/// A complex sum with its trivial bound and floating-point error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CSum {
    pub value: Complex64,
    pub term_count: f64,
    pub abs_bound: f64,
    pub err_est: f64,
}

impl CSum {
    pub fn new(value: Complex64, term_count: f64) -> Self {
        CSum { value, term_count, abs_bound: term_count, err_est: 1e-12 * term_count.max(1.0) }
    }
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

/// Σ_t w(t) Σ_z γ_z e(tz), summed in parallel chunks merged in index order.
fn collapse(roots: &RootTable, w: &[Complex64], z: &SetFp, gamma: &[Complex64]) -> Complex64 {
    let p = w.len() as u64;
    let partial: Vec<Complex64> = (0..p as usize)
        .into_par_iter()
        .with_min_len(64)
        .map(|t| {
            let t = t as u64;
            let wt = w[t as usize];
            if wt == Complex64::new(0.0, 0.0) {
                return wt;
            }
            let mut inner = ComplexSum::new();
            for (zi, &gz) in z.iter().zip(gamma) {
                inner.add(gz * roots.e(t * zi % p));
            }
            wt * inner.value()
        })
        .collect();
    let mut s = ComplexSum::new();
    partial.into_iter().for_each(|x| s.add(x));
    s.value()
}

fn unit_weights(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); n]
}

/// S(X,Y,Z;α,β,γ) = Σ α_x β_y γ_z e(xyz); weights follow the sorted set order.
pub fn trilinear_sum(
    x: &SetFp,
    y: &SetFp,
    z: &SetFp,
    alpha: &[Complex64],
    beta: &[Complex64],
    gamma: &[Complex64],
) -> CSum {
    assert_eq!(alpha.len(), x.len());
    assert_eq!(beta.len(), y.len());
    assert_eq!(gamma.len(), z.len());
    let f = x.field();
    let p = f.p() as usize;
    let mut w = vec![ComplexSum::new(); p];
    for (xi, &a) in x.iter().zip(alpha) {
        for (yi, &b) in y.iter().zip(beta) {
            w[f.mul(xi, yi) as usize].add(a * b);
        }
    }
    let w: Vec<Complex64> = w.iter().map(|s| s.value()).collect();
    let roots = RootTable::new(f);
    CSum::new(collapse(&roots, &w, z, gamma), (x.len() * y.len() * z.len()) as f64)
}

pub fn trilinear_sum_unit(x: &SetFp, y: &SetFp, z: &SetFp) -> CSum {
    trilinear_sum(x, y, z, &unit_weights(x.len()), &unit_weights(y.len()), &unit_weights(z.len()))
}

/// T(X,Y,Z;ρ,σ,τ) = Σ ρ_{x,y} σ_{x,z} τ_{y,z} e(xyz), row-major weight matrices.
pub fn trilinear_bilinear_sum(
    x: &SetFp,
    y: &SetFp,
    z: &SetFp,
    rho: &[Complex64],
    sigma: &[Complex64],
    tau: &[Complex64],
) -> CSum {
    let (nx, ny, nz) = (x.len(), y.len(), z.len());
    assert_eq!(rho.len(), nx * ny);
    assert_eq!(sigma.len(), nx * nz);
    assert_eq!(tau.len(), ny * nz);
    let f = x.field();
    let roots = RootTable::new(f);
    let xs = x.elems();
    let partial: Vec<Complex64> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut s = ComplexSum::new();
            for (j, yv) in y.iter().enumerate() {
                let r = rho[i * ny + j];
                if r == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let xy = f.mul(xs[i], yv);
                for (k, zv) in z.iter().enumerate() {
                    s.add(r * sigma[i * nz + k] * tau[j * nz + k] * roots.e(f.mul(xy, zv)));
                }
            }
            s.value()
        })
        .collect();
    let mut s = ComplexSum::new();
    partial.into_iter().for_each(|v| s.add(v));
    CSum::new(s.value(), (nx * ny * nz) as f64)
}

/// Σ e(a₁⋯a_r) for 3 ≤ r ≤ 5, with the product distribution of the first r−1 sets kept exact.
pub fn multilinear_sum(sets: &[SetFp]) -> crate::error::Result<CSum> {
    let r = sets.len();
    if !(3..=5).contains(&r) {
        return Err(crate::error::Error::OutOfRange(format!("multilinear_sum needs 3..=5 sets, got {r}")));
    }
    let mut dist = IntFn::indicator(&sets[0]);
    for s in &sets[1..r - 1] {
        dist = mul_conv(&dist, &IntFn::indicator(s), ZeroPolicy::Track);
    }
    let w: Vec<Complex64> = dist
        .values()
        .iter()
        .map(|v| Complex64::new(v.to_f64().unwrap(), 0.0))
        .collect();
    let last = &sets[r - 1];
    let roots = RootTable::new(last.field());
    let terms: f64 = sets.iter().map(|s| s.len() as f64).product();
    Ok(CSum::new(collapse(&roots, &w, last, &unit_weights(last.len())), terms))
}
