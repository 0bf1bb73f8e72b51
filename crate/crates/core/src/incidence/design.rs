//! Points versus hyperplanes of projective 3-space over F_q.

use crate::error::{Error, Result};
use crate::numeric::sum_f64;
use crate::report::BoundReport;

/// Normalized representatives of the points of PG(3, q): first nonzero coordinate 1.
pub fn projective_points(q: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for i in 0..q.pow(4) {
        let v = [i / q.pow(3), (i / q.pow(2)) % q, (i / q) % q, i % q];
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

/// Plane-by-point incidence matrix of PG(3, q).
pub struct DesignMatrix {
    pub q: u64,
    pub points: Vec<[u64; 4]>,
    /// rows are planes, columns points
    pub inc: Vec<Vec<bool>>,
}

impl DesignMatrix {
    pub fn new(q: u64) -> Result<Self> {
        if !crate::field::is_prime(q) || q > 7 {
            return Err(Error::OutOfRange(format!("design check needs a prime q <= 7, got {q}")));
        }
        let points = projective_points(q);
        // planes are dual points
        let inc = points
            .iter()
            .map(|h| points.iter().map(|x| (0..4).map(|i| h[i] * x[i]).sum::<u64>() % q == 0).collect())
            .collect();
        Ok(DesignMatrix { q, points, inc })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// True when IᵀI = q²·Id + (q+1)·J entry by entry.
    pub fn gram_identity_holds(&self) -> bool {
        let n = self.size();
        let q = self.q as i64;
        for a in 0..n {
            for b in a..n {
                let g = (0..n).filter(|&h| self.inc[h][a] && self.inc[h][b]).count() as i64;
                let want = if a == b { q * q + q + 1 } else { q + 1 };
                if g != want {
                    return false;
                }
            }
        }
        true
    }

    /// Diagonal and off-diagonal values of IᵀI at (0,0) and (0,1).
    pub fn gram_sample(&self) -> (usize, usize) {
        let d = (0..self.size()).filter(|&h| self.inc[h][0]).count();
        let o = (0..self.size()).filter(|&h| self.inc[h][0] && self.inc[h][1]).count();
        (d, o)
    }

    /// Σ I(π, x) α(x) β(π).
    pub fn bilinear(&self, alpha: &[f64], beta: &[f64]) -> f64 {
        sum_f64(self.inc.iter().zip(beta).map(|(row, &b)| {
            b * sum_f64(row.iter().zip(alpha).filter(|(&i, _)| i).map(|(_, &a)| a))
        }))
    }
}

fn l2(v: &[f64]) -> f64 {
    sum_f64(v.iter().map(|x| x * x)).sqrt()
}

/// Relative slack allowed on the float side of the spectral bound.
pub const DESIGN_TOL: f64 = 1e-9;

/// Checks IᵀI = q²I + (q+1)J and |Σ I α β| ≤ q‖α‖‖β‖ for mean-zero α or β.
pub fn design_bound_check(q: u64, alpha: &[f64], beta: &[f64]) -> Result<Vec<BoundReport>> {
    let m = DesignMatrix::new(q)?;
    let n = m.size();
    if alpha.len() != n || beta.len() != n {
        return Err(Error::OutOfRange(format!("weights must have length {n}")));
    }
    let zero_mean = |v: &[f64]| sum_f64(v.iter().copied()).abs() <= 1e-9 * sum_f64(v.iter().map(|x| x.abs())).max(1.0);
    if !zero_mean(alpha) && !zero_mean(beta) {
        return Err(Error::NonZeroMean);
    }
    let (d, o) = m.gram_sample();
    let gram = BoundReport::assert("design", "design-gram-identity", m.gram_identity_holds())
        .lhs(crate::numeric::int(d as u64))
        .rhs(crate::numeric::int(q * q + q + 1))
        .note(format!("off-diagonal {o}, expected {}", q + 1));
    let lhs = m.bilinear(alpha, beta).abs();
    let rhs = q as f64 * l2(alpha) * l2(beta);
    let bound = BoundReport::assert("design", "design-spectral-bound", lhs <= rhs * (1.0 + DESIGN_TOL) + 1e-12)
        .lhs(lhs)
        .rhs(rhs)
        .with_ratio();
    Ok(vec![gram, bound])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_q3() {
        let m = DesignMatrix::new(3).unwrap();
        assert_eq!(m.size(), 40);
        assert_eq!(m.gram_sample(), (13, 4));
        assert!(m.gram_identity_holds());
    }

    #[test]
    fn zero_weights() {
        let n = projective_points(5).len();
        let rows = design_bound_check(5, &vec![0.0; n], &vec![0.0; n]).unwrap();
        assert!(rows.iter().all(|r| r.passed()));
        assert_eq!(rows[1].lhs.to_f64(), Some(0.0));
    }

    #[test]
    fn rejects_nonzero_mean() {
        let n = projective_points(2).len();
        assert!(design_bound_check(2, &vec![1.0; n], &vec![1.0; n]).is_err());
        assert!(design_bound_check(4, &[], &[]).is_err());
    }
}
