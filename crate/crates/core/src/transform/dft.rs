use num_complex::Complex64;
use rustfft::FftPlanner;

use super::intfn::IntFn;
use crate::chars::RootTable;
use crate::field::FieldCtx;
use crate::numeric::ComplexSum;

/// f̂(ξ) = Σ_x f(x) e(−ξx) for ξ = 0..p.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub field: FieldCtx,
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn p(&self) -> u64 {
        self.field.p()
    }
    pub fn abs_sq(&self) -> Vec<f64> {
        self.coeffs.iter().map(|z| z.norm_sqr()).collect()
    }
    /// max_{ξ≠0} |f̂(ξ)|.
    pub fn max_nonzero(&self) -> f64 {
        self.coeffs[1..].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// O(p²) reference transform of real samples.
pub fn dft_naive_f64(field: &FieldCtx, f: &[f64]) -> Vec<Complex64> {
    let p = field.p();
    let roots = RootTable::new(field);
    (0..p)
        .map(|xi| {
            let mut s = ComplexSum::new();
            for x in 0..p {
                let v = f[x as usize];
                if v != 0.0 {
                    s.add(roots.e(p - xi * x % p) * v);
                }
            }
            s.value()
        })
        .collect()
}

/// Chirp transform of a complex sequence of prime length p, with sign −1 (forward) or +1.
pub fn chirp_transform(p: u64, input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = p as usize;
    let m = (2 * n - 1).next_power_of_two();
    // w(k) = exp(iπ k²/p), with k² reduced mod 2p exactly
    let w: Vec<Complex64> = (0..p)
        .map(|k| {
            let r = (k * k) % (2 * p);
            Complex64::from_polar(1.0, sign * std::f64::consts::PI * r as f64 / p as f64)
        })
        .collect();
    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n {
        a[k] = input[k] * w[k];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = w[0].conj();
    for k in 1..n {
        b[k] = w[k].conj();
        b[m - k] = w[k].conj();
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);
    let scale = 1.0 / m as f64;
    (0..n).map(|k| a[k] * w[k] * scale).collect()
}

pub fn dft_chirp_f64(field: &FieldCtx, f: &[f64]) -> Vec<Complex64> {
    let input: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    chirp_transform(field.p(), &input, -1.0)
}

pub fn dft(f: &IntFn) -> Spectrum {
    Spectrum { field: f.field().clone(), coeffs: dft_f64(f.field(), &f.to_f64()) }
}

pub fn dft_f64(field: &FieldCtx, f: &[f64]) -> Vec<Complex64> {
    if field.p() < 64 {
        dft_naive_f64(field, f)
    } else {
        dft_chirp_f64(field, f)
    }
}

pub fn dft_naive(f: &IntFn) -> Spectrum {
    Spectrum { field: f.field().clone(), coeffs: dft_naive_f64(f.field(), &f.to_f64()) }
}

/// f(x) = (1/p) Σ_ξ f̂(ξ) e(ξx).
pub fn idft(s: &Spectrum) -> Vec<Complex64> {
    let p = s.p();
    let inv = if p < 64 {
        let roots = RootTable::new(&s.field);
        (0..p)
            .map(|x| {
                let mut acc = ComplexSum::new();
                for xi in 0..p {
                    acc.add(s.coeffs[xi as usize] * roots.e(xi * x % p));
                }
                acc.value()
            })
            .collect()
    } else {
        chirp_transform(p, &s.coeffs, 1.0)
    };
    inv.into_iter().map(|z: Complex64| z / p as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::sets::SetFp;

    #[test]
    fn delta_and_constant() {
        for p in [7u64, 101] {
            let f = make_field(p).unwrap();
            let s = dft(&IntFn::delta(&f, 0));
            assert!(s.coeffs.iter().all(|z| (z - 1.0).norm() < 1e-12));
            let s = dft(&IntFn::from_fn(&f, |_| 1));
            assert!((s.coeffs[0] - p as f64).norm() < 1e-9);
            assert!(s.coeffs[1..].iter().all(|z| z.norm() < 1e-9));
        }
    }

    #[test]
    fn balanced_has_zero_dc() {
        let f = make_field(257).unwrap();
        let a = SetFp::new(&f, [1, 5, 9, 77, 200]);
        assert!(dft(&IntFn::balanced(&a)).coeffs[0].norm() < 1e-9);
    }

    #[test]
    fn chirp_matches_naive() {
        for p in [67u64, 101, 257, 1009] {
            let f = make_field(p).unwrap();
            let g = IntFn::from_fn(&f, |x| ((x * x * 31 + 7 * x) % 23) as i64 - 11);
            let a = dft_chirp_f64(&f, &g.to_f64());
            let b = dft_naive_f64(&f, &g.to_f64());
            let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() / scale < 1e-10);
            }
        }
    }

    #[test]
    fn inversion() {
        let f = make_field(101).unwrap();
        let g = IntFn::from_fn(&f, |x| (x as i64 * 17) % 13 - 6);
        let back = idft(&dft(&g));
        for x in 0..101 {
            assert!((back[x as usize].re - g.at_f64(x)).abs() < 1e-9);
            assert!(back[x as usize].im.abs() < 1e-9);
        }
    }
}
