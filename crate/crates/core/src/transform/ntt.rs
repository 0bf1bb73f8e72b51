//! Number-theoretic transform over Q = 29·2^57 + 1.

pub const Q: u64 = 4_179_340_454_199_820_289;
pub const ROOT: u64 = 3;
const MAX_LOG: u32 = 57;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % Q as u128) as u64
}

fn powm(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b);
        }
        b = mulm(b, b);
        e >>= 1;
    }
    r
}

fn transform(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two() && n.trailing_zeros() <= MAX_LOG);
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = powm(ROOT, (Q - 1) / len as u64);
        if invert {
            w = powm(w, Q - 2);
        }
        let half = len / 2;
        let mut ws = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            ws.push(cur);
            cur = mulm(cur, w);
        }
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = a[start + k];
                let v = mulm(a[start + k + half], ws[k]);
                a[start + k] = if u + v >= Q { u + v - Q } else { u + v };
                a[start + k + half] = if u >= v { u - v } else { u + Q - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = powm(n as u64, Q - 2);
        for x in a.iter_mut() {
            *x = mulm(*x, ninv);
        }
    }
}

fn to_res(x: i64) -> u64 {
    if x >= 0 {
        x as u64 % Q
    } else {
        Q - ((-(x as i128)) as u64 % Q)
    }
}

fn from_res(r: u64) -> i128 {
    if r > Q / 2 {
        r as i128 - Q as i128
    } else {
        r as i128
    }
}

/// True when every cyclic-convolution coefficient of a, b is recoverable as a centered residue.
pub fn fits(a: &[i64], b: &[i64]) -> bool {
    let ma = a.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
    let mb = b.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
    let n = a.len().min(b.len()) as u128;
    match n.checked_mul(ma).and_then(|v| v.checked_mul(mb)).and_then(|v| v.checked_mul(2)) {
        Some(bound) => bound < Q as u128,
        None => false,
    }
}

/// Cyclic convolution of equal-length sequences; caller must check `fits`.
pub fn cyclic_conv(a: &[i64], b: &[i64]) -> Vec<i128> {
    let n = a.len();
    assert_eq!(n, b.len());
    if n == 0 {
        return Vec::new();
    }
    let m = (2 * n - 1).next_power_of_two();
    let mut fa = vec![0u64; m];
    let mut fb = vec![0u64; m];
    for i in 0..n {
        fa[i] = to_res(a[i]);
        fb[i] = to_res(b[i]);
    }
    transform(&mut fa, false);
    transform(&mut fb, false);
    for i in 0..m {
        fa[i] = mulm(fa[i], fb[i]);
    }
    transform(&mut fa, true);
    let mut out = vec![0i128; n];
    for (i, &r) in fa.iter().enumerate().take(2 * n - 1) {
        out[i % n] += from_res(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn miller_rabin(n: u64) -> bool {
        let powmod = |mut b: u64, mut e: u64| {
            let mut r = 1u128;
            let mut bb = b as u128 % n as u128;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * bb % n as u128;
                }
                bb = bb * bb % n as u128;
                e >>= 1;
            }
            b = r as u64;
            b
        };
        let (mut d, mut s) = (n - 1, 0);
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = powmod(a, d);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 0..s - 1 {
                x = ((x as u128 * x as u128) % n as u128) as u64;
                if x == n - 1 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn modulus_is_prime_with_root_3() {
        assert!(miller_rabin(Q));
        assert_eq!(Q - 1, 29 << 57);
        assert_ne!(powm(ROOT, (Q - 1) / 2), 1);
        assert_ne!(powm(ROOT, (Q - 1) / 29), 1);
    }

    #[test]
    fn small_cyclic() {
        let c = cyclic_conv(&[1, 1, 0, 0, 0], &[1, 1, 0, 0, 0]);
        assert_eq!(c, vec![1, 2, 1, 0, 0]);
        let c = cyclic_conv(&[0, 0, 0, 1, 1], &[0, 0, 0, 0, -3]);
        assert_eq!(c, vec![0, 0, -3, -3, 0]);
    }
}
