//! Verification suites shared by the command line and the acceptance tests.
//!
//! Every suite is deterministic in its seed and returns [`BoundReport`] rows;
//! repeated instances of one claim are folded into a single worst-case row.

mod brute;
mod desk;
mod exact;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::report::BoundReport;
use crate::transform::IntFn;

pub use brute::oracle_suite;
pub use desk::{cf_suite, decompose_suite, escape_suite, flatten_suite, multilinear_suite, qdesk_suite};
pub use exact::{design_suite, identities_suite, inequalities_suite};

/// Relative tolerance for floating-point sums compared against brute force.
pub const EXPSUM_TOL: f64 = 1e-6;

pub const SUITES: [&str; 10] = [
    "identities",
    "oracle",
    "design",
    "inequalities",
    "qdesk",
    "flatten",
    "escape",
    "cf",
    "multilinear",
    "decompose",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scale {
    Small,
    #[default]
    Full,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOpts {
    pub seed: u64,
    pub scale: Scale,
    /// Replaces the suite's default primes when set.
    pub primes: Option<Vec<u64>>,
}

impl VerifyOpts {
    pub fn new(seed: u64, scale: Scale) -> Self {
        VerifyOpts { seed, scale, primes: None }
    }
    fn primes(&self, full: &[u64], small: &[u64]) -> Vec<u64> {
        match (&self.primes, self.scale) {
            (Some(p), _) => p.clone(),
            (None, Scale::Full) => full.to_vec(),
            (None, Scale::Small) => small.to_vec(),
        }
    }
    fn count(&self, full: usize, small: usize) -> usize {
        match self.scale {
            Scale::Full => full,
            Scale::Small => small,
        }
    }
}

pub fn run_suite(name: &str, opts: &VerifyOpts) -> Result<Vec<BoundReport>> {
    match name {
        "identities" => identities_suite(opts),
        "oracle" => oracle_suite(opts),
        "design" => design_suite(opts),
        "inequalities" => inequalities_suite(opts),
        "qdesk" => qdesk_suite(opts),
        "flatten" => flatten_suite(opts),
        "escape" => escape_suite(opts),
        "cf" => cf_suite(opts),
        "multilinear" => multilinear_suite(opts),
        "decompose" => decompose_suite(opts),
        "all" => {
            let mut rows = Vec::new();
            for s in SUITES {
                rows.extend(run_suite(s, opts)?);
            }
            Ok(rows)
        }
        _ => Err(Error::BadSpec(format!("unknown suite `{name}`; expected one of {} or all", SUITES.join(", ")))),
    }
}

/// Per-claim worst case: the first failing row, otherwise the row with the largest ratio.
pub fn fold(rows: Vec<BoundReport>, tag: &str) -> Vec<BoundReport> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: std::collections::HashMap<String, Vec<BoundReport>> = Default::default();
    for r in rows {
        if !groups.contains_key(&r.claim_ref) {
            order.push(r.claim_ref.clone());
        }
        groups.entry(r.claim_ref.clone()).or_default().push(r);
    }
    order
        .into_iter()
        .map(|claim| {
            let group = groups.remove(&claim).unwrap();
            let n = group.len();
            let fails = group.iter().filter(|r| r.verdict == Some(false)).count();
            let mut worst = match group.iter().position(|r| r.verdict == Some(false)) {
                Some(i) => group[i].clone(),
                None => group
                    .iter()
                    .max_by(|a, b| a.ratio.unwrap_or(f64::NEG_INFINITY).total_cmp(&b.ratio.unwrap_or(f64::NEG_INFINITY)))
                    .unwrap()
                    .clone(),
            };
            if !tag.is_empty() {
                worst.claim_ref = format!("{claim}/{tag}");
            }
            let summary = format!("worst of {n}, {fails} failing");
            worst.note = if worst.note.is_empty() { summary } else { format!("{summary}; {}", worst.note) };
            worst
        })
        .collect()
}

fn exact_row(suite: &str, claim: &str, lib: &BigRational, brute: &BigInt) -> BoundReport {
    let want = BigRational::from(brute.clone());
    BoundReport::assert(suite, claim, *lib == want).lhs(lib.clone()).rhs(want)
}

fn close_row(suite: &str, claim: &str, lib: Complex64, brute: Complex64) -> BoundReport {
    let rel = (lib - brute).norm() / brute.norm().max(1.0);
    BoundReport::assert(suite, claim, rel < EXPSUM_TOL)
        .lhs(lib.norm())
        .rhs(brute.norm())
        .err(rel)
        .ratio(rel)
}

fn random_fn(field: &FieldCtx, lo: i64, hi: i64, rng: &mut impl Rng) -> IntFn {
    let vals: Vec<i64> = (0..field.p()).map(|_| rng.gen_range(lo..=hi)).collect();
    IntFn::from_i64(field, &vals)
}

/// Random integer function with Σf = 0.
fn random_mean_zero(field: &FieldCtx, lo: i64, hi: i64, rng: &mut impl Rng) -> IntFn {
    let mut vals: Vec<i64> = (0..field.p()).map(|_| rng.gen_range(lo..=hi)).collect();
    let s: i64 = vals.iter().sum();
    vals[0] -= s;
    IntFn::from_i64(field, &vals)
}
