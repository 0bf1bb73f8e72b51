//! Fourier transform over Z/p and exact additive and multiplicative convolutions.

mod conv;
mod dft;
mod intfn;
pub mod ntt;

pub use conv::{
    add_conv, add_conv_with, add_corr, add_corr_with, add_power, conv_threshold, cyclic_conv,
    cyclic_conv_i64, mul_conv, mul_conv_with, set_conv_threshold, ConvPath, ZeroPolicy,
};
pub use dft::{chirp_transform, dft, dft_chirp_f64, dft_f64, dft_naive, dft_naive_f64, idft, Spectrum};
pub use intfn::IntFn;

use num_complex::Complex64;

use crate::numeric::{rat_to_f64, sum_c64, sum_f64};
use crate::report::BoundReport;

/// Relative residual accepted for the spectral identities.
pub const IDENTITY_TOL: f64 = 1e-6;

fn row(claim: &str, lhs: f64, rhs: f64, scale: f64) -> BoundReport {
    let res = (lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE);
    let res = if lhs == rhs { 0.0 } else { res };
    BoundReport::assert("identities", claim, res < IDENTITY_TOL)
        .lhs(lhs)
        .rhs(rhs)
        .err(res)
        .ratio(res)
}

/// Evaluates Plancherel, the convolution-square identity, inversion, the
/// convolution theorem and the Fourier form of the energy on f and g.
pub fn identity_suite(f: &IntFn, g: &IntFn) -> Vec<BoundReport> {
    let p = f.p() as f64;
    let fh = dft(f);
    let gh = dft(g);
    let l2 = |h: &IntFn| rat_to_f64(&h.l2_sq()).sqrt();
    let l1 = |h: &IntFn| rat_to_f64(&h.l1());
    let mut rows = Vec::new();

    let lhs = p * rat_to_f64(&f.inner(g));
    let rhs = sum_f64(fh.coeffs.iter().zip(&gh.coeffs).map(|(a, b)| (a * b.conj()).re));
    rows.push(row("plancherel", lhs, rhs, p * l2(f) * l2(g)));

    let fg = add_conv(f, g);
    let lhs = rat_to_f64(&fg.l2_sq());
    let rhs = sum_f64(fh.coeffs.iter().zip(&gh.coeffs).map(|(a, b)| a.norm_sqr() * b.norm_sqr())) / p;
    rows.push(row("convolution-square", lhs, rhs, (l2(f) * l1(g)).powi(2)));

    let back = idft(&fh);
    let res = (0..f.p())
        .map(|x| (back[x as usize] - Complex64::new(f.at_f64(x), 0.0)).norm())
        .fold(0.0, f64::max);
    let scale = rat_to_f64(&f.max_abs());
    rows.push(row("inversion", res, 0.0, scale).note("max pointwise |f - inverse(transform f)|"));

    let conv_hat = dft(&fg);
    let res = conv_hat
        .coeffs
        .iter()
        .zip(fh.coeffs.iter().zip(&gh.coeffs))
        .map(|(c, (a, b))| (c - a * b).norm())
        .fold(0.0, f64::max);
    rows.push(row("transform-of-convolution", res, 0.0, l1(f) * l1(g)));
    let corr_hat = dft(&add_corr(f, g));
    let res = corr_hat
        .coeffs
        .iter()
        .zip(fh.coeffs.iter().zip(&gh.coeffs))
        .map(|(c, (a, b))| (c - a.conj() * b).norm())
        .fold(0.0, f64::max);
    rows.push(row("transform-of-correlation", res, 0.0, l1(f) * l1(g)));

    let lhs = rat_to_f64(&add_corr(f, f).inner(&add_corr(g, g)));
    let rhs = sum_c64(
        fh.coeffs
            .iter()
            .zip(&gh.coeffs)
            .map(|(a, b)| Complex64::new(a.norm_sqr() * b.norm_sqr(), 0.0)),
    )
    .re / p;
    rows.push(row("energy-fourier", lhs, rhs, (l2(f) * l1(g)).powi(2)));
    rows
}
