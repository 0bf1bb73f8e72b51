use std::collections::HashMap;

use num_bigint::BigInt;

use crate::field::FieldCtx;
use crate::numeric::{int, rat};
use crate::report::BoundReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet3 {
    field: FieldCtx,
    points: Vec<[u64; 3]>,
}

impl PointSet3 {
    pub fn new(field: &FieldCtx, pts: impl IntoIterator<Item = [u64; 3]>) -> Self {
        let p = field.p();
        let mut points: Vec<[u64; 3]> = pts.into_iter().map(|q| [q[0] % p, q[1] % p, q[2] % p]).collect();
        points.sort_unstable();
        points.dedup();
        PointSet3 { field: field.clone(), points }
    }
    pub fn all(field: &FieldCtx) -> Self {
        let p = field.p();
        Self::new(field, (0..p * p * p).map(|i| [i / (p * p), (i / p) % p, i % p]))
    }
    pub fn points(&self) -> &[[u64; 3]] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Plane u·x + v·y + w·z = c with the first nonzero of (u, v, w) equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    pub u: u64,
    pub v: u64,
    pub w: u64,
    pub c: u64,
}

impl Plane {
    pub fn new(field: &FieldCtx, u: u64, v: u64, w: u64, c: u64) -> Option<Self> {
        let p = field.p();
        let (u, v, w, c) = (u % p, v % p, w % p, c % p);
        let lead = [u, v, w].into_iter().find(|&x| x != 0)?;
        let s = field.inv(lead);
        Some(Plane { u: field.mul(u, s), v: field.mul(v, s), w: field.mul(w, s), c: field.mul(c, s) })
    }
    pub fn contains(&self, field: &FieldCtx, q: &[u64; 3]) -> bool {
        let lhs = field.add(field.add(field.mul(self.u, q[0]), field.mul(self.v, q[1])), field.mul(self.w, q[2]));
        lhs == self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSet {
    field: FieldCtx,
    planes: Vec<Plane>,
}

impl PlaneSet {
    pub fn new(field: &FieldCtx, planes: impl IntoIterator<Item = Plane>) -> Self {
        let mut planes: Vec<Plane> = planes.into_iter().collect();
        planes.sort_unstable();
        planes.dedup();
        PlaneSet { field: field.clone(), planes }
    }
    pub fn all(field: &FieldCtx) -> Self {
        let p = field.p();
        let mut out = Vec::new();
        for u in 0..p {
            for v in 0..p {
                for w in 0..p {
                    for c in 0..p {
                        if let Some(pl) = Plane::new(field, u, v, w, c) {
                            out.push(pl);
                        }
                    }
                }
            }
        }
        Self::new(field, out)
    }
    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }
    pub fn len(&self) -> usize {
        self.planes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }
}

pub fn point_plane_incidences(pts: &PointSet3, planes: &PlaneSet) -> u64 {
    let f = &pts.field;
    planes
        .planes
        .iter()
        .map(|pl| pts.points.iter().filter(|q| pl.contains(f, q)).count() as u64)
        .sum()
}

/// Σ_{q ∈ π} α(q)β(π) with weights aligned to the stored (sorted) order.
pub fn point_plane_weighted(pts: &PointSet3, planes: &PlaneSet, alpha: &[i64], beta: &[i64]) -> BigInt {
    assert_eq!(alpha.len(), pts.len());
    assert_eq!(beta.len(), planes.len());
    let f = &pts.field;
    let mut s = BigInt::from(0);
    for (pl, &b) in planes.planes.iter().zip(beta) {
        let inner: i128 = pts
            .points
            .iter()
            .zip(alpha)
            .filter(|(q, _)| pl.contains(f, q))
            .map(|(_, &a)| a as i128)
            .sum();
        s += BigInt::from(inner) * b;
    }
    s
}

/// Largest number of points of the set on one line.
pub fn max_collinear(pts: &PointSet3) -> usize {
    let f = &pts.field;
    let n = pts.len();
    if n <= 2 {
        return n;
    }
    let mut best = 2;
    for i in 0..n {
        let mut dirs: HashMap<[u64; 3], usize> = HashMap::new();
        let a = pts.points[i];
        for b in &pts.points[i + 1..] {
            let d = [f.sub(b[0], a[0]), f.sub(b[1], a[1]), f.sub(b[2], a[2])];
            let lead = d.iter().copied().find(|&x| x != 0).unwrap();
            let s = f.inv(lead);
            let key = [f.mul(d[0], s), f.mul(d[1], s), f.mul(d[2], s)];
            let e = dirs.entry(key).or_insert(1);
            *e += 1;
            best = best.max(*e);
        }
    }
    best
}

/// Incidence count against |P||Π|/p + |P|^{1/2}|Π| + k|P|.
pub fn misha_report(pts: &PointSet3, planes: &PlaneSet) -> BoundReport {
    let p = pts.field.p();
    let i = point_plane_incidences(pts, planes);
    let k = max_collinear(pts);
    let (np, npl) = (pts.len() as f64, planes.len() as f64);
    let main = rat(BigInt::from(pts.len() * planes.len()), BigInt::from(p));
    let rhs = np * npl / p as f64 + np.sqrt() * npl + k as f64 * np;
    let err = int(i) - &main;
    BoundReport::ratio_row("incidence", "point-plane")
        .lhs(int(i))
        .main(main)
        .err(err)
        .rhs(rhs)
        .with_ratio()
        .note(format!("max collinear = {k}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn one_point_one_plane() {
        let f = make_field(7).unwrap();
        let pts = PointSet3::new(&f, [[1, 2, 3]]);
        let pl = PlaneSet::new(&f, Plane::new(&f, 1, 1, 1, 6));
        assert_eq!(point_plane_incidences(&pts, &pl), 1);
    }

    #[test]
    fn full_space_p3() {
        let f = make_field(3).unwrap();
        let pts = PointSet3::all(&f);
        let pl = PlaneSet::all(&f);
        // 13 directions × 3 offsets, each plane has 9 points
        assert_eq!(pl.len(), 39);
        assert_eq!(point_plane_incidences(&pts, &pl), 39 * 9);
        assert_eq!(max_collinear(&pts), 3);
    }

    #[test]
    fn normalization_is_canonical() {
        let f = make_field(7).unwrap();
        assert_eq!(Plane::new(&f, 2, 4, 6, 1), Plane::new(&f, 1, 2, 3, 4));
        assert_eq!(Plane::new(&f, 0, 0, 0, 1), None);
    }
}
