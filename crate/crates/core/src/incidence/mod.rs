//! Collinear configurations in A×A, the q-function, and incidence counts.

mod design;
mod space;

pub use design::{design_bound_check, projective_points, DesignMatrix};
pub use space::{
    max_collinear, misha_report, point_plane_incidences, point_plane_weighted, Plane, PlaneSet, PointSet3,
};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::energy::EnergyValue;
use crate::numeric::{int, rat, rat_to_f64};
use crate::report::BoundReport;
use crate::sets::SetFp;

/// r_{A−mA}(b) for every b, as a dense count table.
fn line_counts(a: &SetFp, m: u64) -> Vec<u32> {
    let f = a.field();
    let mut r = vec![0u32; a.p() as usize];
    for y in a.iter() {
        for x in a.iter() {
            r[f.sub(y, f.mul(m, x)) as usize] += 1;
        }
    }
    r
}

fn sum_over_slopes(slopes: std::ops::Range<u64>, per: impl Fn(u64) -> u128 + Sync + Send) -> u128 {
    slopes.into_par_iter().map(per).sum()
}

/// Ordered triples of points of A×A on a common line; a repeated point counts once.
pub fn collinear_triples(a: &SetFp) -> EnergyValue {
    let p = a.p();
    let n = a.len() as u128;
    let slopes = sum_over_slopes(0..p, |m| {
        line_counts(a, m).iter().map(|&r| (r as u128).pow(3)).sum()
    });
    let total = BigInt::from(slopes) + BigInt::from(n.pow(4)) - BigInt::from(p as u128 * n * n);
    int(total)
}

/// Ordered collinear quadruples from A×A, B×B, C×C, D×D.
pub fn collinear_quadruples(a: &SetFp, b: &SetFp, c: &SetFp, d: &SetFp) -> EnergyValue {
    let p = a.p();
    let all = a.intersect(b).intersect(c).intersect(d).len() as u128;
    let slopes = sum_over_slopes(0..p, |m| {
        let (ra, rb, rc, rd) = (line_counts(a, m), line_counts(b, m), line_counts(c, m), line_counts(d, m));
        (0..p as usize)
            .map(|i| ra[i] as u128 * rb[i] as u128 * rc[i] as u128 * rd[i] as u128)
            .sum()
    });
    let vertical = all * (a.len() * b.len() * c.len() * d.len()) as u128;
    let total = BigInt::from(slopes) + BigInt::from(vertical) - BigInt::from(p as u128 * all * all);
    int(total)
}

pub fn collinear_quadruples_sym(a: &SetFp) -> EnergyValue {
    collinear_quadruples(a, a, a, a)
}

/// q(x,y) = #{(a,b,c,d) : c ≠ a, (b−a)/(c−a) = x, (d−a)/(c−a) = y}.
#[derive(Clone, Debug)]
pub struct QTable {
    pub p: u64,
    /// Row-major p×p table indexed by (x, y).
    pub counts: Vec<u64>,
    /// Tuples with c = a, excluded from the finite table.
    pub infinity: u64,
    pub sum_sq: EnergyValue,
    /// Collinear quadruples not seen by Σq²: vertical and horizontal lines plus
    /// coincident first and third points, minus the repeated-point correction.
    pub correction: EnergyValue,
}

impl QTable {
    pub fn at(&self, x: u64, y: u64) -> u64 {
        self.counts[(x * self.p + y) as usize]
    }
    pub fn total(&self) -> EnergyValue {
        &self.sum_sq + &self.correction
    }
}

pub fn q_function(a: &SetFp, b: &SetFp, c: &SetFp, d: &SetFp) -> QTable {
    let f = a.field();
    let p = a.p();
    let mut counts = vec![0u64; (p * p) as usize];
    let mut infinity = 0u64;
    for x in a.iter() {
        for z in c.iter() {
            if z == x {
                infinity += (b.len() * d.len()) as u64;
                continue;
            }
            let inv = f.inv(f.sub(z, x));
            for y in b.iter() {
                let u = f.mul(f.sub(y, x), inv);
                let row = (u * p) as usize;
                for w in d.iter() {
                    counts[row + f.mul(f.sub(w, x), inv) as usize] += 1;
                }
            }
        }
    }
    let sum_sq: u128 = counts.iter().map(|&v| v as u128 * v as u128).sum();

    let j = a.intersect(c);
    let all = j.intersect(b).intersect(d).len() as u128;
    let axis = 2 * all * (a.len() * b.len() * c.len() * d.len()) as u128;
    let coincident = sum_over_slopes(1..p, |m| {
        let (rj, rb, rd) = (line_counts(&j, m), line_counts(b, m), line_counts(d, m));
        (0..p as usize).map(|i| rj[i] as u128 * rb[i] as u128 * rd[i] as u128).sum()
    });
    let corr = BigInt::from(axis) + BigInt::from(coincident) - BigInt::from(p as u128 * all * all);
    QTable { p, counts, infinity, sum_sq: int(BigInt::from(sum_sq)), correction: int(corr) }
}

/// Asymptotic checks for Q(A) and T(A) against |A|⁸/p² and |A|⁶/p.
pub fn collinear_report(a: &SetFp) -> Vec<BoundReport> {
    let p = a.p();
    let n = a.len() as u64;
    let q = collinear_quadruples_sym(a);
    let t = collinear_triples(a);
    let main_q = rat(BigInt::from(n).pow(8), BigInt::from(p).pow(2));
    let main_t = rat(BigInt::from(n).pow(6), BigInt::from(p));
    let nf = n as f64;
    let err_q = &q - &main_q;
    let err_t = &t - &main_t;
    let scale_q = nf.powi(5) * nf.log2().max(1.0);
    let scale_t = (p as f64).sqrt() * nf.powf(3.5);
    vec![
        BoundReport::assert("incidence", "collinear-quadruples-lower", q >= main_q)
            .lhs(q.clone())
            .rhs(main_q.clone()),
        BoundReport::assert("incidence", "collinear-triples-lower", t >= main_t)
            .lhs(t.clone())
            .rhs(main_t.clone()),
        BoundReport::ratio_row("incidence", "collinear-quadruples-error")
            .lhs(q)
            .main(main_q)
            .err(err_q.clone())
            .rhs(scale_q)
            .ratio(rat_to_f64(&err_q).abs() / scale_q),
        BoundReport::ratio_row("incidence", "collinear-triples-error")
            .lhs(t)
            .main(main_t)
            .err(err_t.clone())
            .rhs(scale_t)
            .ratio(rat_to_f64(&err_t).abs() / scale_t),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Line {
    /// y = m·x + b.
    Slope { m: u64, b: u64 },
    /// x = c.
    Vertical { c: u64 },
}

/// Exact incidences between A×B and the lines, with the main-term report.
pub fn point_line_incidences(a: &SetFp, b: &SetFp, lines: &[Line]) -> BoundReport {
    let f = a.field();
    let bm = b.mask();
    let mut lines = lines.to_vec();
    lines.sort();
    lines.dedup();
    let mut count: u64 = 0;
    for l in &lines {
        count += match *l {
            Line::Slope { m, b: c } => a.iter().filter(|&x| bm[f.add(f.mul(m, x), c) as usize]).count() as u64,
            Line::Vertical { c } => {
                if a.contains(c) {
                    b.len() as u64
                } else {
                    0
                }
            }
        };
    }
    let (s, t) = if a.len() <= b.len() { (a.len(), b.len()) } else { (b.len(), a.len()) };
    let nl = lines.len();
    let main = rat(BigInt::from(a.len() * b.len() * nl), BigInt::from(a.p()));
    let err = int(count) - &main;
    let rhs = (s as f64).powf(0.75) * (t as f64).sqrt() * (nl as f64).powf(0.75) + nl as f64 + (s * t) as f64;
    let ratio = if rhs > 0.0 { rat_to_f64(&err).abs() / rhs } else { 0.0 };
    BoundReport::ratio_row("incidence", "point-line-grid")
        .lhs(int(count))
        .main(main)
        .err(err)
        .rhs(rhs)
        .ratio(ratio)
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::sets::rng;

    #[test]
    fn full_field_triples() {
        let f = make_field(5).unwrap();
        assert_eq!(collinear_triples(&SetFp::full(&f)), int(3625));
        let f = make_field(7).unwrap();
        assert_eq!(collinear_triples(&SetFp::full(&f)), int(7i64.pow(5) + 7i64.pow(4) - 7i64.pow(3)));
    }

    #[test]
    fn singletons() {
        let f = make_field(11).unwrap();
        let s = SetFp::new(&f, [4]);
        assert_eq!(collinear_triples(&s), int(1));
        assert_eq!(collinear_quadruples_sym(&s), int(1));
        let z = SetFp::new(&f, [0]);
        let q = q_function(&z, &z, &z, &z);
        assert_eq!(q.infinity, 1);
        assert_eq!(q.total(), int(1));
    }

    #[test]
    fn q_table_matches_line_moments() {
        let f = make_field(31).unwrap();
        let mut r = rng(5);
        for _ in 0..5 {
            let sets: Vec<SetFp> = (0..4).map(|_| SetFp::random(&f, 6, &mut r).unwrap()).collect();
            let q = q_function(&sets[0], &sets[1], &sets[2], &sets[3]);
            assert_eq!(q.total(), collinear_quadruples(&sets[0], &sets[1], &sets[2], &sets[3]));
        }
    }

    #[test]
    fn q_table_swap_symmetry() {
        let f = make_field(31).unwrap();
        let a = SetFp::new(&f, [1, 3, 4, 9, 17]);
        let q = q_function(&a, &a, &a, &a);
        for x in 0..31 {
            for y in 0..31 {
                assert_eq!(q.at(x, y), q.at(y, x));
            }
        }
    }

    #[test]
    fn lines_through_a_point() {
        let f = make_field(5).unwrap();
        let full = SetFp::full(&f);
        let mut lines: Vec<Line> = (0..5).map(|m| Line::Slope { m, b: 0 }).collect();
        lines.push(Line::Vertical { c: 0 });
        let rep = point_line_incidences(&full, &full, &lines);
        assert_eq!(rep.lhs, int(30).into());
        let rep = point_line_incidences(&full, &full, &[]);
        assert_eq!(rep.lhs, int(0).into());
    }
}
