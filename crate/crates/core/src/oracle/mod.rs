//! Reference implementations by literal enumeration over tuples.
//!
//! Everything here works on plain residue slices with its own modular arithmetic and never calls
//! the transform, energy, incidence or sl2 code paths. Single-threaded and slow.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Largest number of tuples an oracle will enumerate.
pub const TUPLE_GUARD: f64 = 1e9;

fn guard(base: usize, exp: u32) -> Result<()> {
    let n = (base as f64).powi(exp as i32);
    if n > TUPLE_GUARD {
        return Err(Error::Guard(format!("oracle would enumerate {n:.3e} tuples")));
    }
    Ok(())
}

fn md(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn inv(x: u64, p: u64) -> u64 {
    let (mut a, mut b, mut u, mut v) = (x as i128 % p as i128, p as i128, 1i128, 0i128);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a - t * b);
        (u, v) = (v, u - t * v);
    }
    assert_eq!(a, 1, "{x} is not invertible mod {p}");
    md(u, p)
}

/// Calls `f` on every tuple in s₀ × s₁ × ⋯.
fn for_each_tuple(sets: &[&[u64]], mut f: impl FnMut(&[u64])) {
    if sets.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; sets.len()];
    let mut cur: Vec<u64> = sets.iter().map(|s| s[0]).collect();
    loop {
        f(&cur);
        let mut i = sets.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < sets[i].len() {
                cur[i] = sets[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = sets[i][0];
        }
    }
}

/// #{a₁ + b₁ = a₂ + b₂}.
pub fn energy_add(a: &[u64], b: &[u64], p: u64) -> Result<BigInt> {
    guard(a.len() * b.len(), 2)?;
    let mut n = 0u64;
    for_each_tuple(&[a, b, a, b], |t| n += ((t[0] + t[1]) % p == (t[2] + t[3]) % p) as u64);
    Ok(n.into())
}

/// #{a₁b₁ = a₂b₂}, zero products included.
pub fn energy_mul(a: &[u64], b: &[u64], p: u64) -> Result<BigInt> {
    guard(a.len() * b.len(), 2)?;
    let mut n = 0u64;
    for_each_tuple(&[a, b, a, b], |t| n += (t[0] * t[1] % p == t[2] * t[3] % p) as u64);
    Ok(n.into())
}

/// E⁺_k(A) = #{a₁ − b₁ = a₂ − b₂ = ⋯ = a_k − b_k}.
pub fn energy_k(a: &[u64], k: u32, p: u64) -> Result<BigInt> {
    guard(a.len(), 2 * k)?;
    let sets = vec![a; 2 * k as usize];
    let mut n = 0u64;
    for_each_tuple(&sets, |t| {
        let d = md(t[0] as i128 - t[1] as i128, p);
        n += t.chunks(2).all(|c| md(c[0] as i128 - c[1] as i128, p) == d) as u64;
    });
    Ok(n.into())
}

/// Σ_x (Σ_y f(y) f(y+x))^k for an integer function.
pub fn energy_k_fn(f: &[i64], k: u32) -> BigInt {
    let p = f.len();
    let mut total = BigInt::zero();
    for x in 0..p {
        let mut s = BigInt::zero();
        for y in 0..p {
            s += BigInt::from(f[y]) * f[(y + x) % p];
        }
        total += s.pow(k);
    }
    total
}

/// T⁺_k(A) = #{a₁ + ⋯ + a_k = a′₁ + ⋯ + a′_k}.
pub fn tk(a: &[u64], k: u32, p: u64) -> Result<BigInt> {
    guard(a.len(), 2 * k)?;
    let sets = vec![a; 2 * k as usize];
    let k = k as usize;
    let mut n = 0u64;
    for_each_tuple(&sets, |t| {
        let l: u64 = t[..k].iter().sum::<u64>() % p;
        let r: u64 = t[k..].iter().sum::<u64>() % p;
        n += (l == r) as u64;
    });
    Ok(n.into())
}

/// D×_k(A) = #{(a₁−a′₁)⋯(a_k−a′_k) = (b₁−b′₁)⋯(b_k−b′_k)}.
pub fn dtimes_k(a: &[u64], k: u32, p: u64) -> Result<BigInt> {
    guard(a.len(), 4 * k)?;
    let sets = vec![a; 4 * k as usize];
    let k = k as usize;
    let prod = |t: &[u64]| t.chunks(2).fold(1u64, |acc, c| acc * md(c[0] as i128 - c[1] as i128, p) % p);
    let mut n = 0u64;
    for_each_tuple(&sets, |t| n += (prod(&t[..2 * k]) == prod(&t[2 * k..])) as u64);
    Ok(n.into())
}

/// D′_k(A) = #{a₁a′₁ + ⋯ + a_ka′_k = b₁b′₁ + ⋯ + b_kb′_k}.
pub fn dprime_k(a: &[u64], k: u32, p: u64) -> Result<BigInt> {
    guard(a.len(), 4 * k)?;
    let sets = vec![a; 4 * k as usize];
    let k = k as usize;
    let s = |t: &[u64]| t.chunks(2).fold(0u64, |acc, c| (acc + c[0] * c[1]) % p);
    let mut n = 0u64;
    for_each_tuple(&sets, |t| n += (s(&t[..2 * k]) == s(&t[2 * k..])) as u64);
    Ok(n.into())
}

/// N(A,B,C) = #{a(b−c) = a′(b′−c′)}.
pub fn n_quantity(a: &[u64], b: &[u64], c: &[u64], p: u64) -> Result<BigInt> {
    guard(a.len() * b.len() * c.len(), 2)?;
    let mut n = 0u64;
    for_each_tuple(&[a, b, c, a, b, c], |t| {
        let l = t[0] * md(t[1] as i128 - t[2] as i128, p) % p;
        let r = t[3] * md(t[4] as i128 - t[5] as i128, p) % p;
        n += (l == r) as u64;
    });
    Ok(n.into())
}

/// N′(A) = #{a₁a₂ + a₃ = a′₁a′₂ + a′₃}.
pub fn nprime(a: &[u64], p: u64) -> Result<BigInt> {
    guard(a.len(), 6)?;
    let mut n = 0u64;
    for_each_tuple(&[a, a, a, a, a, a], |t| {
        n += ((t[0] * t[1] + t[2]) % p == (t[3] * t[4] + t[5]) % p) as u64;
    });
    Ok(n.into())
}

fn det3(p1: (u64, u64), p2: (u64, u64), p3: (u64, u64), p: u64) -> u64 {
    let (x1, y1) = (p1.0 as i128, p1.1 as i128);
    let (x2, y2) = (p2.0 as i128, p2.1 as i128);
    let (x3, y3) = (p3.0 as i128, p3.1 as i128);
    md((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1), p)
}

fn grid(a: &[u64]) -> Vec<(u64, u64)> {
    a.iter().flat_map(|&x| a.iter().map(move |&y| (x, y))).collect()
}

/// Ordered triples of points of A×A with vanishing determinant.
pub fn collinear_triples(a: &[u64], p: u64) -> Result<BigInt> {
    guard(a.len(), 6)?;
    let g = grid(a);
    let mut n = 0u64;
    for &u in &g {
        for &v in &g {
            for &w in &g {
                n += (det3(u, v, w, p) == 0) as u64;
            }
        }
    }
    Ok(n.into())
}

/// Ordered quadruples P₁ ∈ A², P₂ ∈ B², P₃ ∈ C², P₄ ∈ D² with all four triple determinants zero.
pub fn collinear_quadruples(a: &[u64], b: &[u64], c: &[u64], d: &[u64], p: u64) -> Result<BigInt> {
    guard(a.len() * b.len() * c.len() * d.len(), 2)?;
    let (ga, gb, gc, gd) = (grid(a), grid(b), grid(c), grid(d));
    let mut n = 0u64;
    for &u in &ga {
        for &v in &gb {
            for &w in &gc {
                if det3(u, v, w, p) != 0 {
                    continue;
                }
                for &z in &gd {
                    n += (det3(u, v, z, p) == 0 && det3(u, w, z, p) == 0 && det3(v, w, z, p) == 0) as u64;
                }
            }
        }
    }
    Ok(n.into())
}

/// q(x,y) = #{(a,b,c,d) : c ≠ a, b − a = x(c − a), d − a = y(c − a)}, row-major p×p.
pub fn q_table(a: &[u64], b: &[u64], c: &[u64], d: &[u64], p: u64) -> Result<Vec<u64>> {
    guard(a.len() * b.len() * c.len() * d.len(), 1)?;
    let mut t = vec![0u64; (p * p) as usize];
    for_each_tuple(&[a, b, c, d], |v| {
        let den = md(v[2] as i128 - v[0] as i128, p);
        if den == 0 {
            return;
        }
        for x in 0..p {
            if md(v[1] as i128 - v[0] as i128, p) != x * den % p {
                continue;
            }
            for y in 0..p {
                if md(v[3] as i128 - v[0] as i128, p) == y * den % p {
                    t[(x * p + y) as usize] += 1;
                }
            }
        }
    });
    Ok(t)
}

/// P¹ point as an index, ∞ = p.
fn recip(z: u64, p: u64) -> u64 {
    if z == p {
        0
    } else if z == 0 {
        p
    } else {
        inv(z, p)
    }
}

/// Counts of [a₁,…,a_k] = 1/(a₁ + 1/(a₂ + ⋯ + 1/(a_k + 0))) over A^k, indexed by P¹ with ∞ = p.
pub fn cf_count(a: &[u64], k: u32, p: u64) -> Result<Vec<u128>> {
    guard(a.len(), k)?;
    let mut out = vec![0u128; p as usize + 1];
    let sets = vec![a; k as usize];
    for_each_tuple(&sets, |t| {
        let mut z = 0u64;
        for &x in t.iter().rev() {
            let s = if z == p { p } else { (x + z) % p };
            z = recip(s, p);
        }
        out[z as usize] += 1;
    });
    Ok(out)
}

/// #{(a₁,a₂) : a₁,a₂ ≠ 0, 1/a₁ − 1/a₂ = λ}.
pub fn inverse_diff(a1: &[u64], a2: &[u64], lambda: u64, p: u64) -> u64 {
    let mut n = 0;
    for &x in a1.iter().filter(|&&x| x != 0) {
        for &y in a2.iter().filter(|&&y| y != 0) {
            n += (md(inv(x, p) as i128 - inv(y, p) as i128, p) == lambda % p) as u64;
        }
    }
    n
}

fn eval(poly: &[i64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    let mut pw = 1u64;
    for &c in poly {
        acc = (acc + md(c as i128, p) * pw) % p;
        pw = pw * x % p;
    }
    acc
}

/// Collisions and image of (a,b) ↦ p₁(b) + 1/(a + p₂(b)), pairs with a + p₂(b) = 0 left out.
pub fn poly_shift(a: &[u64], b: &[u64], p1: &[i64], p2: &[i64], p: u64) -> Result<(u64, usize)> {
    guard(a.len() * b.len(), 2)?;
    let val = |x: u64, y: u64| {
        let s = (x + eval(p2, y, p)) % p;
        (s != 0).then(|| (eval(p1, y, p) + inv(s, p)) % p)
    };
    let mut coll = 0u64;
    let mut image = HashSet::new();
    for_each_tuple(&[a, b, a, b], |t| {
        if let (Some(u), Some(v)) = (val(t[0], t[1]), val(t[2], t[3])) {
            coll += (u == v) as u64;
            image.insert(u);
        }
    });
    Ok((coll, image.len()))
}

/// Size of {(a + b₁)/(ab₂ + b₃)} ⊆ P¹ over b₃ ≠ b₁b₂.
pub fn gl2_image(a: &[u64], b1: &[u64], b2: &[u64], b3: &[u64], p: u64) -> Result<usize> {
    guard(a.len() * b1.len() * b2.len() * b3.len(), 1)?;
    let mut image = HashSet::new();
    for_each_tuple(&[a, b1, b2, b3], |t| {
        if t[3] == t[1] * t[2] % p {
            return;
        }
        let num = (t[0] + t[1]) % p;
        let den = (t[0] * t[2] + t[3]) % p;
        image.insert(if den == 0 { p } else { num * inv(den, p) % p });
    });
    Ok(image.len())
}

/// Σ_{s} Σ_a f₁(a) f₂(sa) over matrices (a b; c d), with sa = ∞ contributing nothing.
pub fn action_count(mats: &[[u64; 4]], f1: &[i64], f2: &[i64], p: u64) -> BigInt {
    let mut total = BigInt::zero();
    for m in mats {
        for x in 0..p {
            let den = (m[2] * x + m[3]) % p;
            if den == 0 || f1[x as usize] == 0 {
                continue;
            }
            let y = (m[0] * x + m[1]) % p * inv(den, p) % p;
            total += BigInt::from(f1[x as usize]) * f2[y as usize];
        }
    }
    total
}

/// The matrices (b, ab − 1; 1, a) for a ∈ B₁, b ∈ B₂.
pub fn s_family(b1: &[u64], b2: &[u64], p: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for &a in b1 {
        for &b in b2 {
            out.push([b, md(a as i128 * b as i128 - 1, p), 1, a]);
        }
    }
    out
}

fn e(x: u64, p: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (x % p) as f64 / p as f64)
}

/// Σ_{x,y,z} e(xyz).
pub fn trilinear(x: &[u64], y: &[u64], z: &[u64], p: u64) -> Complex64 {
    let mut s = Complex64::zero();
    for &a in x {
        for &b in y {
            for &c in z {
                s += e(a * b % p * c % p, p);
            }
        }
    }
    s
}

/// Σ over all tuples of e(a₁⋯a_r).
pub fn multilinear(sets: &[&[u64]], p: u64) -> Result<Complex64> {
    let total: f64 = sets.iter().map(|s| s.len() as f64).product();
    if total > TUPLE_GUARD {
        return Err(Error::Guard(format!("oracle would enumerate {total:.3e} tuples")));
    }
    let mut s = Complex64::zero();
    for_each_tuple(sets, |t| {
        s += e(t.iter().fold(1u64, |acc, &v| acc * v % p), p);
    });
    Ok(s)
}

/// Least primitive root mod p.
fn primitive_root(p: u64) -> u64 {
    (2..p)
        .find(|&g| {
            let mut x = 1u64;
            for i in 1..p - 1 {
                x = x * g % p;
                if x == 1 {
                    return i == p - 1;
                }
            }
            true
        })
        .unwrap_or(1)
}

/// Character of order d: χ(g^j) = e^{2πij/d} for the least primitive root g, χ(0) = 0.
pub fn character(p: u64, d: u64) -> Vec<Complex64> {
    let g = primitive_root(p);
    let mut out = vec![Complex64::zero(); p as usize];
    let mut x = 1u64;
    for j in 0..p - 1 {
        out[x as usize] = Complex64::from_polar(1.0, 2.0 * PI * (j % d) as f64 / d as f64);
        x = x * g % p;
    }
    out
}

/// Σ f(x)g(y) Σ_{b₁,b₂} e(y(1/(x+b₁) + b₂)), or χ(y + b₂ + 1/(x+b₁)) when `chi` is given.
pub fn inv_shift(f: &[f64], g: &[f64], b: &[u64], chi: Option<&[Complex64]>, p: u64) -> Complex64 {
    let mut s = Complex64::zero();
    for x in 0..p {
        for y in 0..p {
            let w = f[x as usize] * g[y as usize];
            if w == 0.0 {
                continue;
            }
            for &b1 in b {
                let t = (x + b1) % p;
                if t == 0 {
                    continue;
                }
                let u = inv(t, p);
                for &b2 in b {
                    let v = match chi {
                        None => e(y * ((u + b2) % p) % p, p),
                        Some(c) => c[((y + b2 + u) % p) as usize],
                    };
                    s += v * w;
                }
            }
        }
    }
    s
}

/// Σ f(x)g(y) Σ_b e(y·R_b(x)) (or χ(y + R_b(x))) with R_b(x) = (q₁q₂x + p₁q₂)/(p₂q₁x + q₁q₂ + p₁p₂),
/// pᵢ, qᵢ evaluated at b.
pub fn rational(
    f: &[f64],
    g: &[f64],
    b: &[u64],
    polys: [&[i64]; 4],
    chi: Option<&[Complex64]>,
    p: u64,
) -> Complex64 {
    let [pp1, qq1, pp2, qq2] = polys;
    let mut s = Complex64::zero();
    for x in 0..p {
        for y in 0..p {
            let w = f[x as usize] * g[y as usize];
            if w == 0.0 {
                continue;
            }
            for &bb in b {
                let (p1, q1, p2, q2) = (eval(pp1, bb, p), eval(qq1, bb, p), eval(pp2, bb, p), eval(qq2, bb, p));
                let num = (q1 * q2 % p * x + p1 * q2) % p;
                let den = (p2 * q1 % p * x + q1 * q2 + p1 * p2) % p;
                if den == 0 {
                    continue;
                }
                let r = num * inv(den, p) % p;
                let v = match chi {
                    None => e(y * r % p, p),
                    Some(c) => c[((y + r) % p) as usize],
                };
                s += v * w;
            }
        }
    }
    s
}

type Mat = [u64; 4];

fn mat_mul(x: &Mat, y: &Mat, p: u64) -> Mat {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

/// ‖μ^{*2^k}‖₂² − 1/(p³ − p) for k = 0..=k_max by repeated dense convolution.
pub fn flatten(mu: &[(Mat, BigRational)], k_max: u32, p: u64) -> Vec<BigRational> {
    let order = BigRational::new(BigInt::from(1), BigInt::from(p * p * p - p));
    let norm = |m: &HashMap<Mat, BigRational>| m.values().map(|v| v * v).sum::<BigRational>() - &order;
    let mut cur: HashMap<Mat, BigRational> = HashMap::new();
    for (g, w) in mu {
        *cur.entry(*g).or_insert_with(BigRational::zero) += w;
    }
    let mut out = vec![norm(&cur)];
    for _ in 0..k_max {
        let mut next: HashMap<Mat, BigRational> = HashMap::new();
        for (g, wg) in &cur {
            for (h, wh) in &cur {
                *next.entry(mat_mul(g, h, p)).or_insert_with(BigRational::zero) += wg * wh;
            }
        }
        cur = next;
        out.push(norm(&cur));
    }
    out
}
