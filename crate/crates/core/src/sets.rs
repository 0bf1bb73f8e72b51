//! Finite subsets of F_p and their textual specs.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{make_field, FieldCtx};

/// Identifier of the generator behind `random:` specs, echoed in report metadata.
pub const PRNG_ID: &str = "chacha8";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFp {
    field: FieldCtx,
    elems: Vec<u64>,
}

impl SetFp {
    /// Reduces, sorts and deduplicates.
    pub fn new(field: &FieldCtx, elems: impl IntoIterator<Item = u64>) -> Self {
        let p = field.p();
        let mut v: Vec<u64> = elems.into_iter().map(|x| x % p).collect();
        v.sort_unstable();
        v.dedup();
        SetFp { field: field.clone(), elems: v }
    }

    /// Rejects unreduced residues instead of reducing them.
    pub fn try_new(field: &FieldCtx, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        let p = field.p();
        let v: Vec<u64> = elems.into_iter().collect();
        if let Some(&x) = v.iter().find(|&&x| x >= p) {
            return Err(Error::NotReduced { x, p });
        }
        Ok(Self::new(field, v))
    }

    pub fn empty(field: &FieldCtx) -> Self {
        Self::new(field, [])
    }
    pub fn full(field: &FieldCtx) -> Self {
        Self::new(field, 0..field.p())
    }
    pub fn nonzero(field: &FieldCtx) -> Self {
        Self::new(field, 1..field.p())
    }
    pub fn interval(field: &FieldCtx, lo: u64, hi: u64) -> Self {
        Self::new(field, lo..=hi)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    pub fn p(&self) -> u64 {
        self.field.p()
    }
    pub fn elems(&self) -> &[u64] {
        &self.elems
    }
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }
    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&(x % self.p())).is_ok()
    }
    /// Dense membership table of length p.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.p() as usize];
        for &x in &self.elems {
            m[x as usize] = true;
        }
        m
    }

    pub fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        Self::new(&self.field, self.iter().map(f))
    }
    pub fn neg(&self) -> Self {
        self.map(|x| self.field.neg(x))
    }
    pub fn shift(&self, t: u64) -> Self {
        self.map(|x| self.field.add(x, t))
    }
    pub fn dilate(&self, l: u64) -> Self {
        self.map(|x| self.field.mul(x, l))
    }
    /// {1/a : a ∈ A, a ≠ 0}.
    pub fn inverses(&self) -> Self {
        Self::new(&self.field, self.iter().filter(|&x| x != 0).map(|x| self.field.inv(x)))
    }
    pub fn union(&self, o: &Self) -> Self {
        Self::new(&self.field, self.iter().chain(o.iter()))
    }
    pub fn intersect(&self, o: &Self) -> Self {
        Self::new(&self.field, self.iter().filter(|&x| o.contains(x)))
    }
    pub fn minus(&self, o: &Self) -> Self {
        Self::new(&self.field, self.iter().filter(|&x| !o.contains(x)))
    }
    pub fn without_zero(&self) -> Self {
        Self::new(&self.field, self.iter().filter(|&x| x != 0))
    }
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|x| self.contains(self.field.neg(x)))
    }
    pub fn sumset(&self, o: &Self) -> Self {
        let f = &self.field;
        let mut m = vec![false; self.p() as usize];
        for a in self.iter() {
            for b in o.iter() {
                m[f.add(a, b) as usize] = true;
            }
        }
        Self::from_mask(f, &m)
    }
    pub fn productset(&self, o: &Self) -> Self {
        let f = &self.field;
        let mut m = vec![false; self.p() as usize];
        for a in self.iter() {
            for b in o.iter() {
                m[f.mul(a, b) as usize] = true;
            }
        }
        Self::from_mask(f, &m)
    }
    pub fn from_mask(field: &FieldCtx, m: &[bool]) -> Self {
        SetFp {
            field: field.clone(),
            elems: (0..m.len() as u64).filter(|&x| m[x as usize]).collect(),
        }
    }

    pub fn random(field: &FieldCtx, n: usize, r: &mut impl Rng) -> Result<Self> {
        let p = field.p() as usize;
        if n > p {
            return Err(Error::SetTooLarge { n, p: p as u64 });
        }
        Ok(Self::new(field, sample(r, p, n).into_iter().map(|x| x as u64)))
    }
}

pub fn subgroup(field: &FieldCtx, t: u64) -> Result<SetFp> {
    let pm1 = field.order();
    if t == 0 || pm1 % t != 0 {
        return Err(Error::NotDivisor { t, pm1 });
    }
    let step = pm1 / t;
    Ok(SetFp::new(field, (0..t).map(|j| field.pow_g(j * step))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    Full { p: u64 },
    Random { p: u64, n: usize, seed: u64 },
    Interval { p: u64, lo: u64, hi: u64 },
    Subgroup { p: u64, t: u64 },
    ShiftedSubgroup { p: u64, t: u64, shift: u64 },
    Explicit { p: u64, elems: Vec<u64> },
    File { p: u64, path: PathBuf },
}

impl SetSpec {
    pub fn p(&self) -> u64 {
        match self {
            SetSpec::Full { p }
            | SetSpec::Random { p, .. }
            | SetSpec::Interval { p, .. }
            | SetSpec::Subgroup { p, .. }
            | SetSpec::ShiftedSubgroup { p, .. }
            | SetSpec::Explicit { p, .. }
            | SetSpec::File { p, .. } => *p,
        }
    }
}

fn bad(s: &str) -> Error {
    Error::BadSpec(s.to_string())
}

fn kv<'a>(params: &'a [(&'a str, &'a str)], key: &str, whole: &str) -> Result<&'a str> {
    params
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::BadSpec(format!("{whole}: missing `{key}`")))
}

fn num<T: FromStr>(params: &[(&str, &str)], key: &str, whole: &str) -> Result<T> {
    kv(params, key, whole)?
        .trim()
        .parse()
        .map_err(|_| Error::BadSpec(format!("{whole}: bad value for `{key}`")))
}

impl FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad(s))?;
        if kind == "explicit" {
            let (head, body) = rest.split_once('{').ok_or_else(|| bad(s))?;
            let body = body.strip_suffix('}').ok_or_else(|| bad(s))?;
            let head: Vec<(&str, &str)> = head
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.split_once('=').ok_or_else(|| bad(s)))
                .collect::<Result<_>>()?;
            let p = num(&head, "p", s)?;
            let elems = body
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad(s)))
                .collect::<Result<_>>()?;
            return Ok(SetSpec::Explicit { p, elems });
        }
        let params: Vec<(&str, &str)> = rest
            .split(',')
            .map(|t| t.split_once('=').map(|(a, b)| (a.trim(), b.trim())).ok_or_else(|| bad(s)))
            .collect::<Result<_>>()?;
        let p = num(&params, "p", s)?;
        Ok(match kind {
            "full" => SetSpec::Full { p },
            "random" => SetSpec::Random { p, n: num(&params, "n", s)?, seed: num(&params, "seed", s)? },
            "interval" => SetSpec::Interval { p, lo: num(&params, "lo", s)?, hi: num(&params, "hi", s)? },
            "subgroup" => SetSpec::Subgroup { p, t: num(&params, "t", s)? },
            "shifted-subgroup" => SetSpec::ShiftedSubgroup {
                p,
                t: num(&params, "t", s)?,
                shift: num(&params, "shift", s)?,
            },
            "file" => SetSpec::File { p, path: PathBuf::from(kv(&params, "path", s)?) },
            _ => return Err(Error::BadSpec(format!("{s}: unknown kind `{kind}`"))),
        })
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Full { p } => write!(f, "full:p={p}"),
            SetSpec::Random { p, n, seed } => write!(f, "random:p={p},n={n},seed={seed}"),
            SetSpec::Interval { p, lo, hi } => write!(f, "interval:p={p},lo={lo},hi={hi}"),
            SetSpec::Subgroup { p, t } => write!(f, "subgroup:p={p},t={t}"),
            SetSpec::ShiftedSubgroup { p, t, shift } => {
                write!(f, "shifted-subgroup:p={p},t={t},shift={shift}")
            }
            SetSpec::Explicit { p, elems } => {
                let body: Vec<String> = elems.iter().map(|x| x.to_string()).collect();
                write!(f, "explicit:p={p},{{{}}}", body.join(","))
            }
            SetSpec::File { p, path } => write!(f, "file:p={p},path={}", path.display()),
        }
    }
}

/// Parses the set file format: one residue per line, `#` starts a comment.
pub fn parse_set_file(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        out.push(
            line.parse()
                .map_err(|_| Error::BadSpec(format!("line {}: `{line}` is not a residue", i + 1)))?,
        );
    }
    Ok(out)
}

pub fn gen_set_in(field: &FieldCtx, spec: &SetSpec) -> Result<SetFp> {
    if field.p() != spec.p() {
        return Err(Error::FieldMismatch(field.p(), spec.p()));
    }
    let p = field.p();
    match spec {
        SetSpec::Full { .. } => Ok(SetFp::full(field)),
        SetSpec::Random { n, seed, .. } => SetFp::random(field, *n, &mut rng(*seed)),
        SetSpec::Interval { lo, hi, .. } => {
            if *lo > *hi || *hi >= p {
                return Err(Error::BadSpec(spec.to_string()));
            }
            Ok(SetFp::interval(field, *lo, *hi))
        }
        SetSpec::Subgroup { t, .. } => subgroup(field, *t),
        SetSpec::ShiftedSubgroup { t, shift, .. } => Ok(subgroup(field, *t)?.shift(*shift % p)),
        SetSpec::Explicit { elems, .. } => SetFp::try_new(field, elems.iter().copied()),
        SetSpec::File { path, .. } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            SetFp::try_new(field, parse_set_file(&text)?)
        }
    }
}

pub fn gen_set(spec: &SetSpec) -> Result<SetFp> {
    gen_set_in(&make_field(spec.p())?, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroups() {
        let f = make_field(7).unwrap();
        assert_eq!(subgroup(&f, 1).unwrap().elems(), &[1]);
        assert_eq!(subgroup(&f, 3).unwrap().elems(), &[1, 2, 4]);
        assert!(subgroup(&f, 4).is_err());
        let f5 = make_field(5).unwrap();
        assert_eq!(subgroup(&f5, 4).unwrap().elems(), &[1, 2, 3, 4]);
    }

    #[test]
    fn subgroup_closure() {
        let f = make_field(1009).unwrap();
        for t in [1u64, 2, 3, 4, 6, 8, 12, 16, 18, 24, 36, 48, 63, 72, 112, 144, 252, 336, 504, 1008] {
            let g = subgroup(&f, t).unwrap();
            assert_eq!(g.len() as u64, t);
            for a in g.iter() {
                assert!(g.contains(f.inv(a)));
                for b in g.iter() {
                    assert!(g.contains(f.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn spec_examples() {
        let s: SetSpec = "interval:p=11,lo=0,hi=3".parse().unwrap();
        assert_eq!(gen_set(&s).unwrap().elems(), &[0, 1, 2, 3]);
        let s: SetSpec = "explicit:p=11,{3,3,7}".parse().unwrap();
        assert_eq!(gen_set(&s).unwrap().elems(), &[3, 7]);
        let s: SetSpec = "random:p=11,n=4,seed=1".parse().unwrap();
        let a = gen_set(&s).unwrap();
        assert_eq!(a, gen_set(&s).unwrap());
        assert_eq!(a.len(), 4);
        let s: SetSpec = "random:p=11,n=12,seed=1".parse().unwrap();
        assert!(matches!(gen_set(&s), Err(Error::SetTooLarge { .. })));
        assert!("explicit:p=11,{3,12}".parse::<SetSpec>().map(|s| gen_set(&s)).unwrap().is_err());
    }

    #[test]
    fn spec_display_roundtrip() {
        for t in [
            "random:p=1009,n=64,seed=7",
            "interval:p=1009,lo=0,hi=63",
            "subgroup:p=1009,t=144",
            "shifted-subgroup:p=1009,t=144,shift=3",
            "explicit:p=11,{1,2,5}",
            "file:p=1009,path=/tmp/x.txt",
            "full:p=7",
        ] {
            let s: SetSpec = t.parse().unwrap();
            assert_eq!(s.to_string(), t);
        }
        assert!("bogus:p=7".parse::<SetSpec>().is_err());
        assert!("random:p=7,n=2".parse::<SetSpec>().is_err());
    }

    #[test]
    fn set_file_parsing() {
        let v = parse_set_file("# header\n1\n 5 # five\n\n7\n").unwrap();
        assert_eq!(v, vec![1, 5, 7]);
        assert!(parse_set_file("1\nx\n").is_err());
    }
}
