use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use sumprod::decompose::{bw_decompose, verify_bw};
use sumprod::energy::{
    dprime_k, dtimes_k_set, energy, energy_k_set, n_quantity, nprime, size_pow, tk_set, EnergyValue, Op,
};
use sumprod::expsum::{
    bound_exponent, multilinear_sum, special_sum_report, special_sums, trilinear_sum_unit, Rational, SpecialKind,
    Variant,
};
use sumprod::incidence::{
    collinear_quadruples, collinear_report, design_bound_check, misha_report, point_line_incidences, q_function,
    DesignMatrix, Line, Plane, PlaneSet, PointSet3,
};
use sumprod::numeric::{fmt_f64, rat, rat_to_f64};
use sumprod::poly::Poly;
use sumprod::sets::{gen_set_in, rng};
use sumprod::sl2::{
    action_count, cf_count, cf_report, coset_escape, family, flatten_profile, flatten_report, flattening_depth,
    frobenius_check, gl2_image, inverse_diff_count, measured_depth, poly_shift_count, random_sl2, sl2_inv,
    sl2_order, tripling, FamilySpec, FrobeniusMode, GroupFn, SL2Elem, MAX_DENSE_P,
};
use sumprod::verify::{fold, run_suite, Scale, VerifyOpts};
use sumprod::{make_field, mul_char, BoundReport, FieldCtx, IntFn, SetFp, SetSpec, ZeroPolicy};

use crate::{
    Cli, Cmd, ExpsumCmd, FamilyArg, FamilyArgs, IncidenceCmd, MeasureArg, ModeArg, OpArg, SpecialArg, Sl2Cmd,
    VariantArg,
};

/// Inserts `p=` into a spec that lacks one, using the global `--p`.
fn normalize(spec: &str, p: Option<u64>) -> Result<String> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let head = rest.split('{').next().unwrap_or("");
    if head.split(',').any(|t| t.trim().starts_with("p=")) {
        return Ok(spec.to_string());
    }
    let p = p.with_context(|| format!("set spec `{spec}` has no p=; pass --p"))?;
    Ok(if rest.is_empty() { format!("{kind}:p={p}") } else { format!("{kind}:p={p},{rest}") })
}

struct Ctx {
    p: Option<u64>,
    seed: u64,
}

impl Ctx {
    /// Builds every set over one field; all specs must agree on p.
    fn sets(&self, specs: &[&str]) -> Result<(FieldCtx, Vec<SetFp>)> {
        let parsed = specs
            .iter()
            .map(|s| {
                let n = normalize(s, self.p)?;
                n.parse::<SetSpec>().with_context(|| format!("parsing set spec `{n}`"))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = parsed.first().map(SetSpec::p).or(self.p).context("no set given")?;
        if let Some(s) = parsed.iter().find(|s| s.p() != p) {
            bail!("set specs disagree on p: {} and {}", p, s.p());
        }
        let field = make_field(p)?;
        let sets = parsed.iter().map(|s| gen_set_in(&field, s)).collect::<sumprod::Result<Vec<_>>>()?;
        Ok((field, sets))
    }

    fn one(&self, spec: &str) -> Result<SetFp> {
        Ok(self.sets(&[spec])?.1.remove(0))
    }

    fn field(&self) -> Result<FieldCtx> {
        Ok(make_field(self.p.context("this command needs --p")?)?)
    }
}

/// A value with its heuristic main term: error = lhs − main and ratio = lhs/main.
fn value_row(suite: &str, claim: &str, v: EnergyValue, main: Option<BigRational>) -> BoundReport {
    let row = BoundReport::ratio_row(suite, claim).lhs(v.clone());
    match main {
        Some(m) => {
            let ratio = if m == BigRational::from(BigInt::from(0)) { f64::NAN } else { rat_to_f64(&(&v / &m)) };
            row.err(&v - &m).main(m).ratio(ratio)
        }
        None => row,
    }
}

fn size_product(sets: &[&SetFp], e: u32) -> BigRational {
    sets.iter().map(|s| size_pow(s, e)).product()
}

pub fn run(cli: &Cli) -> Result<Vec<BoundReport>> {
    let ctx = Ctx { p: cli.p, seed: cli.seed };
    let rows = match &cli.command {
        Cmd::Energy { a, b, op } => {
            let (_, s) = ctx.sets(&[a, b.as_deref().unwrap_or(a)])?;
            let (op, name) = match op {
                OpArg::Add => (Op::Add, "additive-energy"),
                OpArg::Mul => (Op::Mul, "multiplicative-energy"),
            };
            let main = size_product(&[&s[0], &s[1]], 2) / BigRational::from(BigInt::from(s[0].p()));
            vec![value_row("energy", name, energy(op, &s[0], &s[1]), Some(main))]
        }
        Cmd::Tk { set, k } => {
            let a = ctx.one(set)?;
            let main = size_pow(&a, 2 * k) / BigRational::from(BigInt::from(a.p()));
            vec![value_row("energy", &format!("tk/k={k}"), tk_set(&a, *k)?, Some(main))]
        }
        Cmd::Ek { set, k } => {
            let a = ctx.one(set)?;
            let main = size_pow(&a, 2 * k) / BigRational::from(BigInt::from(a.p()).pow(k.saturating_sub(1)));
            vec![value_row("energy", &format!("energy-k/k={k}"), energy_k_set(&a, *k)?, Some(main))]
        }
        Cmd::Dtimes { set, k, exclude_zero } => {
            let a = ctx.one(set)?;
            let policy = if *exclude_zero { ZeroPolicy::Exclude } else { ZeroPolicy::Track };
            let main = size_pow(&a, 4 * k) / BigRational::from(BigInt::from(a.p()));
            vec![value_row("energy", &format!("dtimes/k={k}"), dtimes_k_set(&a, *k, policy)?, Some(main))]
        }
        Cmd::Dprime { set, k } => {
            let a = ctx.one(set)?;
            let main = size_pow(&a, 4 * k) / BigRational::from(BigInt::from(a.p()));
            vec![value_row("energy", &format!("dprime/k={k}"), dprime_k(&a, *k)?, Some(main))]
        }
        Cmd::Nq { a, b, c, prime } => {
            if *prime {
                let a = ctx.one(a)?;
                let main = size_pow(&a, 6) / BigRational::from(BigInt::from(a.p()));
                vec![value_row("energy", "nprime", nprime(&a), Some(main))]
            } else {
                let (_, s) = ctx.sets(&[a, b.as_deref().unwrap_or(a), c.as_deref().unwrap_or(a)])?;
                let main = size_product(&[&s[0], &s[1], &s[2]], 2) / BigRational::from(BigInt::from(s[0].p()));
                vec![value_row("energy", "n-quantity", n_quantity(&s[0], &s[1], &s[2]), Some(main))]
            }
        }
        Cmd::Collinear { set } => collinear_report(&ctx.one(set)?),
        Cmd::Quadruples { a, b, c, d } => {
            let or_a = |x: &Option<String>| x.clone().unwrap_or_else(|| a.clone());
            let (b, c, d) = (or_a(b), or_a(c), or_a(d));
            let (field, s) = ctx.sets(&[a, &b, &c, &d])?;
            let p = BigInt::from(field.p());
            let main = size_product(&[&s[0], &s[1], &s[2], &s[3]], 2) / BigRational::from(&p * &p);
            let q = collinear_quadruples(&s[0], &s[1], &s[2], &s[3]);
            let table = q_function(&s[0], &s[1], &s[2], &s[3]);
            vec![
                value_row("incidence", "collinear-quadruples", q.clone(), Some(main)),
                BoundReport::assert("incidence", "q-function-total", table.total() == q).lhs(table.total()).rhs(q),
            ]
        }
        Cmd::Incidence { which } => incidence(&ctx, which)?,
        Cmd::Design { q, trials } => {
            let n = DesignMatrix::new(*q)?.size();
            let mut r = rng(ctx.seed);
            let mut rows = Vec::new();
            for _ in 0..*trials {
                let mut alpha: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
                let mean = alpha.iter().sum::<f64>() / n as f64;
                alpha.iter_mut().for_each(|x| *x -= mean);
                let beta: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
                rows.extend(design_bound_check(*q, &alpha, &beta)?);
            }
            fold(rows, &format!("q={q}"))
        }
        Cmd::Expsum { which } => expsum(&ctx, which)?,
        Cmd::BoundExp { delta, r, variant } => {
            let v = match variant {
                VariantArg::ThreeSet => Variant::ThreeSet,
                VariantArg::FourSet => Variant::FourSet,
                VariantArg::KFree => Variant::KFree,
            };
            let spec = bound_exponent(*delta, *r, v)?;
            let mut row = BoundReport::ratio_row("expsum", &format!("saving-exponent/{variant:?}")).lhs(spec.exponent);
            if let Some(k) = spec.k {
                row = row.note(format!("k={k}"));
            }
            vec![row]
        }
        Cmd::Sl2 { which } => sl2(&ctx, which)?,
        Cmd::InverseDiff { a1, a2, lambda, b } => {
            let mut specs = vec![a1.as_str(), a2.as_str()];
            specs.extend(b.as_deref());
            let (_, s) = ctx.sets(&specs)?;
            inverse_diff_count(&s[0], &s[1], *lambda, s.get(2))?.rows
        }
        Cmd::PolyShift { a, b, p1, p2 } => {
            let (_, s) = ctx.sets(&[a, b])?;
            let (p1, p2): (Poly, Poly) = (p1.parse()?, p2.parse()?);
            poly_shift_count(&s[0], &s[1], &p1, &p2)?.rows
        }
        Cmd::Gl2Image { a, b1, b2, b3 } => {
            let (_, s) = ctx.sets(&[a, b1, b2, b3])?;
            gl2_image(&s[0], &s[1], &s[2], &s[3]).rows
        }
        Cmd::Decompose { set, m, x } => {
            let (_, s) = ctx.sets(&[set, x.as_deref().unwrap_or(set)])?;
            let m = parse_rat(m)?;
            let cert = bw_decompose(&s[0], &m)?;
            let mut rows: Vec<BoundReport> = cert
                .iterations
                .iter()
                .enumerate()
                .map(|(i, it)| {
                    BoundReport::ratio_row("decompose", &format!("iteration/{}", i + 1)).lhs(it.energy.clone()).note(
                        format!(
                            "|B|={}, |P|={}, extracted {}, q={}, levels {}, sandwich {}",
                            it.b_size, it.p_size, it.extracted, it.q, it.levels, it.sandwich
                        ),
                    )
                })
                .collect();
            rows.extend(verify_bw(&cert, &s[1]));
            rows
        }
        Cmd::Verify { suite, small } => {
            let opts = VerifyOpts {
                seed: ctx.seed,
                scale: if *small { Scale::Small } else { Scale::Full },
                primes: ctx.p.map(|p| vec![p]),
            };
            run_suite(suite, &opts)?
        }
    };
    Ok(rows)
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().with_context(|| format!("bad numerator in `{s}`"))?;
    let d: BigInt = d.trim().parse().with_context(|| format!("bad denominator in `{s}`"))?;
    if d == BigInt::from(0) {
        bail!("zero denominator in `{s}`");
    }
    Ok(BigRational::new(n, d))
}

fn incidence(ctx: &Ctx, which: &IncidenceCmd) -> Result<Vec<BoundReport>> {
    let mut r = rng(ctx.seed);
    Ok(match which {
        IncidenceCmd::Lines { a, b, count } => {
            let (field, s) = ctx.sets(&[a, b])?;
            let p = field.p();
            let lines: Vec<Line> = (0..*count)
                .map(|_| {
                    let m = r.gen_range(0..=p);
                    if m == p {
                        Line::Vertical { c: r.gen_range(0..p) }
                    } else {
                        Line::Slope { m, b: r.gen_range(0..p) }
                    }
                })
                .collect();
            vec![point_line_incidences(&s[0], &s[1], &lines)]
        }
        IncidenceCmd::Planes { points, planes } => {
            let field = ctx.field()?;
            let p = field.p();
            let pts = PointSet3::new(&field, (0..*points).map(|_| [r.gen_range(0..p), r.gen_range(0..p), r.gen_range(0..p)]));
            let mut pl = Vec::with_capacity(*planes);
            while pl.len() < *planes {
                let c = [r.gen_range(0..p), r.gen_range(0..p), r.gen_range(0..p), r.gen_range(0..p)];
                pl.extend(Plane::new(&field, c[0], c[1], c[2], c[3]));
            }
            vec![misha_report(&pts, &PlaneSet::new(&field, pl))]
        }
    })
}

fn expsum(ctx: &Ctx, which: &ExpsumCmd) -> Result<Vec<BoundReport>> {
    Ok(match which {
        ExpsumCmd::Tri { x, y, z } => {
            let (_, s) = ctx.sets(&[x, y, z])?;
            let v = trilinear_sum_unit(&s[0], &s[1], &s[2]).value;
            let n = (s[0].len() * s[1].len() * s[2].len()) as u64;
            vec![complex_row("trilinear-sum", v, n)]
        }
        ExpsumCmd::Multi { sets } => {
            let specs: Vec<&str> = sets.iter().map(String::as_str).collect();
            let (_, s) = ctx.sets(&specs)?;
            let v = multilinear_sum(&s)?.value;
            let n = s.iter().map(|x| x.len() as u64).product();
            vec![complex_row(&format!("multilinear-sum/r={}", s.len()), v, n)]
        }
        ExpsumCmd::Special { kind, f, g, b, r1, r2, order, delta } => {
            let (field, s) = ctx.sets(&[f, g, b])?;
            let kind = match kind {
                SpecialArg::InvShiftE => SpecialKind::InvShiftE,
                SpecialArg::InvShiftChi => SpecialKind::InvShiftChi,
                SpecialArg::RationalE => SpecialKind::RationalE,
                SpecialArg::RationalChi => SpecialKind::RationalChi,
            };
            let chi = match kind {
                SpecialKind::InvShiftChi | SpecialKind::RationalChi => Some(mul_char(&field, *order)?),
                _ => None,
            };
            let r1: Option<Rational> = r1.as_deref().map(str::parse).transpose()?;
            let r2: Option<Rational> = r2.as_deref().map(str::parse).transpose()?;
            let (fi, gi) = (IntFn::indicator(&s[0]), IntFn::indicator(&s[1]));
            let sum = special_sums(kind, &fi, &gi, &s[2], chi.as_ref(), r1.as_ref(), r2.as_ref())?;
            vec![special_sum_report(kind, &sum, &fi, &gi, s[2].len(), *delta)]
        }
    })
}

/// Real part as lhs, imaginary part as error, trivial bound as rhs, |S|/bound as ratio.
fn complex_row(claim: &str, v: Complex64, terms: u64) -> BoundReport {
    let bound = terms as f64;
    BoundReport::ratio_row("expsum", claim)
        .lhs(v.re)
        .err(v.im)
        .rhs(terms)
        .ratio(if bound > 0.0 { v.norm() / bound } else { 0.0 })
        .note(format!("|S|={}", fmt_f64(v.norm())))
}

fn family_spec(ctx: &Ctx, a: &FamilyArgs) -> Result<FamilySpec> {
    let need = |x: &Option<String>, name: &str| x.clone().with_context(|| format!("--{name} is required for this family"));
    Ok(match a.family {
        FamilyArg::S => {
            let (_, s) = ctx.sets(&[&need(&a.b1, "B1")?, &need(&a.b2, "B2")?])?;
            FamilySpec::S(s[0].clone(), s[1].clone())
        }
        FamilyArg::Sprime => FamilySpec::Sprime(ctx.one(&need(&a.b, "B")?)?),
        FamilyArg::Srational => {
            let r1: Rational = need(&a.r1, "r1")?.parse()?;
            let r2: Rational = need(&a.r2, "r2")?.parse()?;
            FamilySpec::Srational(r1, r2, ctx.one(&need(&a.b, "B")?)?)
        }
        FamilyArg::Gl2 => {
            let (_, s) = ctx.sets(&[&need(&a.b1, "B1")?, &need(&a.b2, "B2")?, &need(&a.b3, "B3")?])?;
            FamilySpec::GL2(s[0].clone(), s[1].clone(), s[2].clone())
        }
    })
}

fn random_group_fn(field: &FieldCtx, r: &mut impl Rng) -> GroupFn {
    let mut w = BTreeMap::new();
    for _ in 0..r.gen_range(1..=12) {
        let v: i64 = r.gen_range(-5..=5);
        if v != 0 {
            w.insert(random_sl2(field, r), BigInt::from(v));
        }
    }
    if w.is_empty() {
        w.insert(random_sl2(field, r), BigInt::from(1));
    }
    GroupFn::new(field, w, BigUint::from(1u32))
}

fn random_ints(field: &FieldCtx, r: &mut impl Rng, mean_zero: bool) -> IntFn {
    let mut v: Vec<i64> = (0..field.p()).map(|_| r.gen_range(-5..=5)).collect();
    if mean_zero {
        let s: i64 = v.iter().sum();
        v[0] -= s;
    }
    IntFn::from_i64(field, &v)
}

fn sl2(ctx: &Ctx, which: &Sl2Cmd) -> Result<Vec<BoundReport>> {
    let mut r = rng(ctx.seed);
    Ok(match which {
        Sl2Cmd::Flatten { measure, gens, k_max } => {
            let field = ctx.field()?;
            let p = field.p();
            let mu = match measure {
                MeasureArg::Haar => GroupFn::haar(&field)?,
                MeasureArg::Identity => GroupFn::delta(&field, SL2Elem::identity()),
                MeasureArg::Random => {
                    let mut s = Vec::new();
                    for _ in 0..*gens {
                        let g = random_sl2(&field, &mut r);
                        s.push(g);
                        s.push(sl2_inv(&field, &g));
                    }
                    s.sort();
                    s.dedup();
                    GroupFn::uniform(&field, &s)
                }
            };
            let e = flatten_profile(&mu, *k_max)?;
            let mut rows = flatten_report(&e);
            let depth = flattening_depth(&e, p);
            rows.push(
                BoundReport::ratio_row("sl2", "flattening-depth")
                    .lhs(depth.map_or(sumprod::Num::Empty, |k| u64::from(k).into()))
                    .rhs(rat(1, sl2_order(p)))
                    .note(if depth.is_none() { "not reached".into() } else { String::new() }),
            );
            rows
        }
        Sl2Cmd::Tripling { size } => {
            let field = ctx.field()?;
            let a: Vec<SL2Elem> = (0..*size).map(|_| random_sl2(&field, &mut r)).collect();
            let t = tripling(&field, &a)?;
            vec![BoundReport::ratio_row("sl2", "tripling")
                .lhs(t.triple as u64)
                .rhs(t.size as u64)
                .ratio(t.ratio)
                .note(format!("exponent {}", fmt_f64(t.exponent)))]
        }
        Sl2Cmd::Cf { set, k } => cf_report(&cf_count(&ctx.one(set)?, *k)?),
        Sl2Cmd::Count { family: fa, f1, f2 } => {
            let fam = family(&family_spec(ctx, fa)?)?;
            let (_, s) = ctx.sets(&[f1, f2])?;
            let depth = match fam.sl2_elems() {
                Some(elems) if fam.field.p() <= MAX_DENSE_P => measured_depth(&fam.field, &elems, 6),
                _ => None,
            };
            action_count(&fam, &IntFn::indicator(&s[0]), &IntFn::indicator(&s[1]), depth).rows
        }
        Sl2Cmd::Escape { family: fa, trials } => coset_escape(&family(&family_spec(ctx, fa)?)?, *trials, ctx.seed).rows,
        Sl2Cmd::Frobenius { mode, trials } => {
            let field = ctx.field()?;
            let mode = match mode {
                ModeArg::Inequality => FrobeniusMode::Inequality,
                ModeArg::Power => FrobeniusMode::PowerIteration,
            };
            let mut rows = Vec::new();
            for _ in 0..*trials {
                let big_f = random_group_fn(&field, &mut r);
                let f = random_ints(&field, &mut r, true);
                let phi = random_ints(&field, &mut r, false);
                rows.extend(frobenius_check(&big_f, &f, &phi, mode)?);
            }
            fold(rows, &format!("p={}", field.p()))
        }
    })
}
