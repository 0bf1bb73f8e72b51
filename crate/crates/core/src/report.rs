//! Uniform result rows for verification suites.

use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::numeric::{fmt_f64, fmt_rat, rat_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Kind {
    /// Exact or constant-free claim; a false verdict is a failure.
    Assert,
    /// Claim with an unspecified constant; only the measured ratio is reported.
    Ratio,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Assert => "ASSERT",
            Kind::Ratio => "RATIO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum Num {
    #[default]
    Empty,
    Exact(BigRational),
    Float(f64),
}

impl Num {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Num::Empty => None,
            Num::Exact(r) => Some(rat_to_f64(r)),
            Num::Float(x) => Some(*x),
        }
    }
}

impl From<BigRational> for Num {
    fn from(r: BigRational) -> Self {
        Num::Exact(r)
    }
}
impl From<num_bigint::BigInt> for Num {
    fn from(n: num_bigint::BigInt) -> Self {
        Num::Exact(BigRational::from(n))
    }
}
impl From<u64> for Num {
    fn from(n: u64) -> Self {
        Num::Exact(BigRational::from(num_bigint::BigInt::from(n)))
    }
}
impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num::Float(x)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Empty => Ok(()),
            Num::Exact(r) => f.write_str(&fmt_rat(r)),
            Num::Float(x) => f.write_str(&fmt_f64(*x)),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Empty => s.serialize_none(),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub suite: String,
    pub claim_ref: String,
    pub kind: Kind,
    pub lhs: Num,
    pub main_term: Num,
    pub error: Num,
    pub rhs: Num,
    pub ratio: Option<f64>,
    /// Always set for ASSERT rows; for RATIO rows it records a supplied envelope check, if any.
    pub verdict: Option<bool>,
    pub note: String,
}

impl BoundReport {
    pub fn new(suite: &str, claim: &str, kind: Kind) -> Self {
        BoundReport {
            suite: suite.into(),
            claim_ref: claim.into(),
            kind,
            lhs: Num::Empty,
            main_term: Num::Empty,
            error: Num::Empty,
            rhs: Num::Empty,
            ratio: None,
            verdict: None,
            note: String::new(),
        }
    }

    pub fn assert(suite: &str, claim: &str, ok: bool) -> Self {
        Self::new(suite, claim, Kind::Assert).verdict(ok)
    }

    pub fn ratio_row(suite: &str, claim: &str) -> Self {
        Self::new(suite, claim, Kind::Ratio)
    }

    pub fn lhs(mut self, v: impl Into<Num>) -> Self {
        self.lhs = v.into();
        self
    }
    pub fn main(mut self, v: impl Into<Num>) -> Self {
        self.main_term = v.into();
        self
    }
    pub fn err(mut self, v: impl Into<Num>) -> Self {
        self.error = v.into();
        self
    }
    pub fn rhs(mut self, v: impl Into<Num>) -> Self {
        self.rhs = v.into();
        self
    }
    pub fn ratio(mut self, r: f64) -> Self {
        self.ratio = Some(r);
        self
    }
    pub fn verdict(mut self, ok: bool) -> Self {
        self.verdict = Some(ok);
        self
    }
    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = n.into();
        self
    }

    /// True unless this is an ASSERT row with a false verdict.
    pub fn passed(&self) -> bool {
        self.kind == Kind::Ratio || self.verdict == Some(true)
    }

    /// Sets the ratio to lhs/rhs when both are available.
    pub fn with_ratio(mut self) -> Self {
        if let (Some(l), Some(r)) = (self.lhs.to_f64(), self.rhs.to_f64()) {
            self.ratio = Some(if r == 0.0 { if l == 0.0 { 0.0 } else { f64::INFINITY } } else { l / r });
        }
        self
    }
}

pub fn all_passed(rows: &[BoundReport]) -> bool {
    rows.iter().all(BoundReport::passed)
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Some(true) => "true",
            Some(false) => "false",
            None => "-",
        };
        let ratio = self.ratio.map(fmt_f64).unwrap_or_default();
        write!(
            f,
            "{} {} {} lhs={} main={} err={} rhs={} ratio={} verdict={}",
            self.suite, self.claim_ref, self.kind, self.lhs, self.main_term, self.error, self.rhs, ratio, verdict
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}
