use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use super::{close_row, fold, Scale, VerifyOpts};
use crate::decompose::{bw_decompose, verify_bw};
use crate::error::Result;
use crate::expsum::{bound_exponent, trilinear_sum_unit, Rational, Variant};
use crate::field::{make_field, FieldCtx};
use crate::incidence::collinear_report;
use crate::numeric::rat;
use crate::report::{BoundReport, Kind};
use crate::sets::{rng, SetFp};
use crate::sl2::{
    cf_count, cf_report, coset_escape, family, flatten_profile, flatten_report, generated, random_sl2,
    sl2_inv, sl2_order, FamilySpec, GroupFn, SL2Elem,
};

/// Envelope for measured ratios of the collinear error terms.
pub const QDESK_ENVELOPE: f64 = 10.0;
/// Envelope for the relative deviation of the continued-fraction counts.
pub const CF_ENVELOPE: f64 = 0.5;
/// Constant in front of the three-set saving.
pub const MULTILINEAR_ENVELOPE: f64 = 10.0;

fn retag(rows: Vec<BoundReport>, suite: &str, tag: &str) -> Vec<BoundReport> {
    rows.into_iter()
        .map(|mut r| {
            r.suite = suite.into();
            r.claim_ref = format!("{}/{tag}", r.claim_ref);
            r
        })
        .collect()
}

fn envelope(mut row: BoundReport, within: impl Fn(f64) -> bool) -> BoundReport {
    if row.kind == Kind::Ratio {
        if let Some(x) = row.ratio {
            row.verdict = Some(within(x));
        }
    }
    row
}

pub fn qdesk_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let field = make_field(1009)?;
    let sizes: &[usize] = match opts.scale {
        Scale::Full => &[100, 150, 200],
        Scale::Small => &[100],
    };
    let seeds = opts.count(5, 1) as u64;
    let mut out = Vec::new();
    for &n in sizes {
        for s in 0..seeds {
            let seed = opts.seed.wrapping_add(s);
            let a = SetFp::random(&field, n, &mut rng(seed ^ n as u64))?;
            let rows = collinear_report(&a).into_iter().map(|r| envelope(r, |x| x <= QDESK_ENVELOPE)).collect();
            out.extend(retag(rows, "qdesk", &format!("n={n},seed={seed}")));
        }
    }
    Ok(out)
}

fn random_generators(field: &FieldCtx, r: &mut impl Rng) -> Vec<SL2Elem> {
    let order = sl2_order(field.p()) as usize;
    loop {
        let (g, h) = (random_sl2(field, r), random_sl2(field, r));
        let mut s = vec![g, sl2_inv(field, &g), h, sl2_inv(field, &h)];
        s.sort();
        s.dedup();
        if generated(field, &s).len() == order {
            return s;
        }
    }
}

pub fn flatten_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    const K_MAX: u32 = 6;
    let mut out = Vec::new();
    for p in opts.primes(&[5, 7, 11], &[5, 7]) {
        let field = make_field(p)?;
        let tag = format!("p={p}");
        let order = sl2_order(p);

        let e = flatten_profile(&GroupFn::haar(&field)?, K_MAX)?;
        let zero = e.iter().all(|v| *v == BigRational::from(BigInt::from(0)));
        out.push(BoundReport::assert("flatten", &format!("haar-profile-zero/{tag}"), zero).lhs(e[K_MAX as usize].clone()));
        out.extend(retag(flatten_report(&e), "flatten", &format!("haar,{tag}")));

        let e = flatten_profile(&GroupFn::delta(&field, SL2Elem::identity()), K_MAX)?;
        let want = BigRational::from(BigInt::from(1)) - rat(1, order);
        let constant = e.iter().all(|v| *v == want);
        out.push(
            BoundReport::assert("flatten", &format!("identity-profile-constant/{tag}"), constant)
                .lhs(e[K_MAX as usize].clone())
                .rhs(want),
        );
        out.extend(retag(flatten_report(&e), "flatten", &format!("identity,{tag}")));

        let mut r = rng(opts.seed ^ (p << 24));
        let s = random_generators(&field, &mut r);
        let e = flatten_profile(&GroupFn::uniform(&field, &s), K_MAX)?;
        out.extend(retag(flatten_report(&e), "flatten", &format!("random,{tag}")));
        let last = e[K_MAX as usize].clone();
        let bound = rat(10, order);
        let row = if p == 5 {
            BoundReport::assert("flatten", &format!("random-walk-flat/k={K_MAX},{tag}"), last < bound)
        } else {
            BoundReport::ratio_row("flatten", &format!("random-walk-flat/k={K_MAX},{tag}"))
        };
        out.push(row.lhs(last).rhs(bound).with_ratio().note(format!("|S|={}", s.len())));
    }
    Ok(out)
}

pub fn escape_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    const TRIALS: usize = 200;
    let mut out = Vec::new();
    for p in opts.primes(&[7, 11, 13], &[7]) {
        let field = make_field(p)?;
        let mut r = rng(opts.seed ^ (p << 28));
        let half = (p as usize / 2).max(3);
        let tag = format!("p={p}");

        let (b1, b2) = (SetFp::random(&field, half, &mut r)?, SetFp::random(&field, half, &mut r)?);
        let fam = family(&FamilySpec::S(b1, b2))?;
        out.extend(retag(coset_escape(&fam, TRIALS, opts.seed).rows, "escape", &tag));

        let r1: Rational = "0,1".parse()?;
        let r2: Rational = "0,0,1".parse()?;
        let b = SetFp::random(&field, half, &mut r)?;
        let fam = family(&FamilySpec::Srational(r1, r2, b))?;
        out.extend(retag(coset_escape(&fam, TRIALS, opts.seed).rows, "escape", &tag));

        let b = SetFp::random(&field, half, &mut r)?;
        let fam = family(&FamilySpec::Sprime(b))?;
        out.extend(retag(coset_escape(&fam, TRIALS, opts.seed).rows, "escape", &tag));
    }
    Ok(out)
}

pub fn cf_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let field = make_field(1009)?;
    let (n, k) = match opts.scale {
        Scale::Full => (200, 6),
        Scale::Small => (60, 4),
    };
    let mut out = Vec::new();
    for s in 0..opts.count(3, 1) as u64 {
        let seed = opts.seed.wrapping_add(s);
        let a = SetFp::random(&field, n, &mut rng(seed ^ 0xcf))?;
        let d = cf_count(&a, k)?;
        let rows = cf_report(&d).into_iter().map(|r| envelope(r, |x| x < CF_ENVELOPE)).collect();
        out.extend(retag(rows, "cf", &format!("seed={seed}")));
    }
    Ok(out)
}

pub fn multilinear_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for p in [7u64, 101] {
        let field = make_field(p)?;
        let full = SetFp::full(&field);
        let s = trilinear_sum_unit(&full, &full, &full).value;
        let want = Complex64::new((p * (2 * p - 1)) as f64, 0.0);
        out.push(close_row("multilinear", &format!("trilinear-full-set/p={p}"), s, want));
    }

    let p = 257u64;
    let field = make_field(p)?;
    let mut r = rng(opts.seed ^ 0x257);
    let floor = (p as f64).powf(1.2);
    let mut rows = Vec::new();
    for _ in 0..opts.count(10, 3) {
        let (x, y, z) = loop {
            let sets: Vec<SetFp> = (0..3)
                .map(|_| SetFp::random(&field, r.gen_range(4..=64), &mut r).map(|s| s.without_zero()))
                .collect::<Result<_>>()?;
            let n: f64 = sets.iter().map(|s| s.len() as f64).product();
            if n >= floor {
                break (sets[0].clone(), sets[1].clone(), sets[2].clone());
            }
        };
        let n = (x.len() * y.len() * z.len()) as f64;
        let delta = n.ln() / (p as f64).ln() - 1.0;
        let spec = bound_exponent(delta, 3, Variant::ThreeSet)?;
        let lhs = trilinear_sum_unit(&x, &y, &z).abs() / n;
        let rhs = MULTILINEAR_ENVELOPE * (p as f64).powf(-spec.exponent);
        rows.push(
            BoundReport::ratio_row("multilinear", "trilinear-saving/p=257")
                .lhs(lhs)
                .rhs(rhs)
                .with_ratio()
                .verdict(lhs <= rhs)
                .note(format!("|X|={},|Y|={},|Z|={},delta={:.4}", x.len(), y.len(), z.len(), delta)),
        );
    }
    out.extend(fold(rows, ""));
    Ok(out)
}

/// A run of consecutive powers inside a coset of the subgroup of order 143.
fn coset_piece(field: &FieldCtx, n: usize) -> SetFp {
    let gamma = field.pow_g((field.p() - 1) / 143);
    let mut x = 3u64;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x = field.mul(x, gamma);
    }
    SetFp::new(field, out)
}

pub fn decompose_suite(opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    let field = make_field(2003)?;
    let n = 120;
    let m = BigRational::from(BigInt::from(4));
    let inputs = [
        ("interval", SetFp::interval(&field, 1, n as u64)),
        ("coset", coset_piece(&field, n)),
        ("random", SetFp::random(&field, n, &mut rng(opts.seed ^ 0xd3c))?),
    ];
    let mut out = Vec::new();
    for (name, a) in inputs {
        let cert = bw_decompose(&a, &m)?;
        let tag = format!("{name},|A|={}", a.len());
        let its = cert.iterations.len();
        let mut rows = vec![
            BoundReport::assert("decompose", "decomposition-iterations", its <= a.len())
                .lhs(its as u64)
                .rhs(a.len() as u64),
            BoundReport::assert("decompose", "decomposition-partition", cert.is_partition())
                .note(format!("|B|={}, |C|={}", cert.b.len(), cert.c.len())),
            BoundReport::assert("decompose", "pigeonhole-sandwich", cert.iterations.iter().all(|it| it.sandwich))
                .note(format!("{its} iterations")),
        ];
        let again = bw_decompose(&cert.b, &m)?;
        rows.push(
            BoundReport::assert("decompose", "decomposition-idempotent", again.iterations.is_empty())
                .lhs(again.iterations.len() as u64)
                .rhs(0u64)
                .note(format!("re-run on B leaves {} of {}", again.b.len(), cert.b.len())),
        );
        rows.extend(verify_bw(&cert, &a));
        out.extend(retag(rows, "decompose", &tag));
    }
    Ok(out)
}
