use num_complex::Complex64;

use super::CSum;
use crate::chars::{CharTable, RootTable};
use crate::error::{Error, Result};
use crate::numeric::{rat_to_f64, ComplexSum};
use crate::report::BoundReport;
use crate::sets::SetFp;
use crate::transform::IntFn;

pub use crate::poly::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    /// Σ f(x)g(y) Σ_{b₁,b₂} e(y(1/(x+b₁) + b₂)).
    InvShiftE,
    /// Σ f(x)g(y) Σ_{b₁,b₂} χ(y + b₂ + 1/(x+b₁)).
    InvShiftChi,
    /// Σ f(x)g(y) Σ_b e(y·R_b(x)).
    RationalE,
    /// Σ f(x)g(y) Σ_b χ(y + R_b(x)).
    RationalChi,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialSum {
    pub sum: CSum,
    /// (x, b) or (x, b₁) combinations with f(x) ≠ 0 dropped for a zero denominator.
    pub skipped: u64,
}

/// R_b(x) = (q₁q₂x + p₁q₂)/(p₂q₁x + q₁q₂ + p₁p₂) for r₁ = p₁/q₁, r₂ = p₂/q₂ at b.
fn mobius_at(field: &crate::field::FieldCtx, r1: &Rational, r2: &Rational, b: u64, x: u64) -> Option<u64> {
    let (p1, q1) = (r1.num.eval(field, b), r1.den.eval(field, b));
    let (p2, q2) = (r2.num.eval(field, b), r2.den.eval(field, b));
    let m = |a, c| field.mul(a, c);
    let num = field.add(m(m(q1, q2), x), m(p1, q2));
    let den = field.add(field.add(m(m(p2, q1), x), m(q1, q2)), m(p1, p2));
    (den != 0).then(|| field.div(num, den))
}

/// Phase values for the inner sum over y: either Σ_y g(y)e(yt) or Σ_y g(y)χ(y+t).
fn inner_table(g: &IntFn, chi: Option<&CharTable>) -> Vec<Complex64> {
    let field = g.field();
    let p = field.p();
    let gv = g.to_f64();
    let support: Vec<u64> = g.support().collect();
    let roots = RootTable::new(field);
    (0..p)
        .map(|t| {
            let mut s = ComplexSum::new();
            for &y in &support {
                let v = match chi {
                    None => roots.e(field.mul(y, t)),
                    Some(c) => c.value(field.add(y, t)),
                };
                s.add(v * gv[y as usize]);
            }
            s.value()
        })
        .collect()
}

pub fn special_sums(
    kind: SpecialKind,
    f: &IntFn,
    g: &IntFn,
    b: &SetFp,
    chi: Option<&CharTable>,
    r1: Option<&Rational>,
    r2: Option<&Rational>,
) -> Result<SpecialSum> {
    let field = f.field();
    let needs_chi = matches!(kind, SpecialKind::InvShiftChi | SpecialKind::RationalChi);
    if needs_chi && chi.is_none() {
        return Err(Error::BadSpec("a multiplicative character is required".into()));
    }
    let chi = if needs_chi { chi } else { None };
    let table = inner_table(g, chi);
    let fv = f.to_f64();
    let support: Vec<u64> = f.support().collect();
    let mut acc = ComplexSum::new();
    let mut skipped = 0u64;
    let terms;
    match kind {
        SpecialKind::InvShiftE | SpecialKind::InvShiftChi => {
            terms = (support.len() * g.support().count() * b.len() * b.len()) as f64;
            for &x in &support {
                for b1 in b.iter() {
                    let s = field.add(x, b1);
                    if s == 0 {
                        skipped += 1;
                        continue;
                    }
                    let u = field.inv(s);
                    for b2 in b.iter() {
                        acc.add(table[field.add(u, b2) as usize] * fv[x as usize]);
                    }
                }
            }
        }
        SpecialKind::RationalE | SpecialKind::RationalChi => {
            let (r1, r2) = match (r1, r2) {
                (Some(a), Some(c)) => (a, c),
                _ => return Err(Error::BadSpec("two rational functions are required".into())),
            };
            terms = (support.len() * g.support().count() * b.len()) as f64;
            for &x in &support {
                for bb in b.iter() {
                    match mobius_at(field, r1, r2, bb, x) {
                        None => skipped += 1,
                        Some(t) => acc.add(table[t as usize] * fv[x as usize]),
                    }
                }
            }
        }
    }
    Ok(SpecialSum { sum: CSum::new(acc.value(), terms), skipped })
}

/// Compares |sum| with ‖f‖₂‖g‖₂√p·|B|^m·p^{−δ}, m = 2 for the shifted-inverse kinds.
pub fn special_sum_report(kind: SpecialKind, s: &SpecialSum, f: &IntFn, g: &IntFn, nb: usize, delta: f64) -> BoundReport {
    let p = f.p() as f64;
    let m = match kind {
        SpecialKind::InvShiftE | SpecialKind::InvShiftChi => 2,
        _ => 1,
    };
    let shape = rat_to_f64(&f.l2_sq()).sqrt() * rat_to_f64(&g.l2_sq()).sqrt() * p.sqrt() * (nb as f64).powi(m)
        * p.powf(-delta);
    BoundReport::ratio_row("expsum", &format!("special-sum/{kind:?}"))
        .lhs(s.sum.abs())
        .rhs(shape)
        .with_ratio()
        .note(format!("skipped {}, delta {}", s.skipped, crate::numeric::fmt_f64(delta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::mul_char;
    use crate::field::make_field;

    #[test]
    fn empty_b() {
        let f = make_field(31).unwrap();
        let a = IntFn::indicator(&SetFp::new(&f, [1, 2]));
        let s = special_sums(SpecialKind::InvShiftE, &a, &a, &SetFp::empty(&f), None, None, None).unwrap();
        assert_eq!(s.sum.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_terms_have_modulus_one() {
        let f = make_field(31).unwrap();
        let dx = IntFn::delta(&f, 3);
        let dy = IntFn::delta(&f, 7);
        let b = SetFp::new(&f, [5]);
        let s = special_sums(SpecialKind::InvShiftE, &dx, &dy, &b, None, None, None).unwrap();
        assert!((s.sum.abs() - 1.0).abs() < 1e-12);
        let chi = mul_char(&f, 3).unwrap();
        let s = special_sums(SpecialKind::InvShiftChi, &dx, &dy, &b, Some(&chi), None, None).unwrap();
        assert!((s.sum.abs() - 1.0).abs() < 1e-12 || s.sum.abs() < 1e-12);
    }

    #[test]
    fn skip_tally() {
        let f = make_field(11).unwrap();
        let a = IntFn::indicator(&SetFp::new(&f, [1, 2]));
        let b = SetFp::new(&f, [9, 10]);
        let s = special_sums(SpecialKind::InvShiftE, &a, &a, &b, None, None, None).unwrap();
        assert_eq!(s.skipped, 2);
        assert!(special_sums(SpecialKind::RationalChi, &a, &a, &b, None, None, None).is_err());
    }
}
