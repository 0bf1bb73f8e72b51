use std::time::{Duration, Instant};

use sumprod::report::{BoundReport, Kind};
use sumprod::verify::{run_suite, Scale, VerifyOpts};

const SEED: u64 = 20240601;

fn run(name: &str) -> (Vec<BoundReport>, Duration) {
    let t = Instant::now();
    let rows = run_suite(name, &VerifyOpts::new(SEED, Scale::Full)).unwrap_or_else(|e| panic!("{name}: {e}"));
    (rows, t.elapsed())
}

fn failing_asserts(rows: &[BoundReport]) -> Vec<&BoundReport> {
    rows.iter().filter(|r| r.kind == Kind::Assert && r.verdict != Some(true)).collect()
}

fn verdict(n: u32, what: &str, elapsed: Duration, limit: Option<Duration>, problems: Vec<String>) {
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = problems.is_empty() && !slow;
    let limit_txt = limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {n:>2} {what}: {} in {:.1}s{limit_txt}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    for p in &problems {
        println!("    {p}");
    }
    assert!(!slow, "criterion {n}: runtime {:.1}s over limit", elapsed.as_secs_f64());
    assert!(problems.is_empty(), "criterion {n}: {} problems", problems.len());
}

fn describe(r: &BoundReport) -> String {
    format!("{}: lhs={} rhs={} ratio={:?} {}", r.claim_ref, r.lhs, r.rhs, r.ratio, r.note)
}

fn assert_problems(rows: &[BoundReport]) -> Vec<String> {
    failing_asserts(rows).into_iter().map(describe).collect()
}

fn require(rows: &[BoundReport], prefix: &str, problems: &mut Vec<String>) {
    if !rows.iter().any(|r| r.claim_ref.starts_with(prefix)) {
        problems.push(format!("no rows for {prefix}"));
    }
}

#[test]
fn criterion_01_identities() {
    let (rows, t) = run("identities");
    let mut problems = assert_problems(&rows);
    for claim in ["plancherel", "convolution-square", "inversion", "transform-of-convolution", "energy-fourier"] {
        for p in [101, 257, 1009, 4099] {
            if !rows.iter().any(|r| r.claim_ref.starts_with(claim) && r.claim_ref.ends_with(&format!("p={p}"))) {
                problems.push(format!("{claim} missing at p={p}"));
            }
        }
    }
    for r in &rows {
        if r.ratio.is_some_and(|x| x >= 1e-6) {
            problems.push(format!("residual {} too large", describe(r)));
        }
    }
    verdict(1, "spectral identities, residual < 1e-6", t, Some(Duration::from_secs(60)), problems);
}

#[test]
fn criterion_02_oracle_equivalence() {
    let (rows, t) = run("oracle");
    let mut problems = assert_problems(&rows);
    for claim in [
        "energy-add", "energy-mul", "energy-k/k=4", "tk/k=4", "dtimes/k=2", "dprime/k=2", "n-quantity", "nprime",
        "collinear-triples", "collinear-quadruples", "q-function", "cf-count/k=3", "inverse-difference",
        "polynomial-shift-collisions", "gl2-image", "action-count", "trilinear-sum", "multilinear-sum", "special-sum",
    ] {
        require(&rows, claim, &mut problems);
    }
    verdict(2, "library equals brute force", t, Some(Duration::from_secs(300)), problems);
}

#[test]
fn criterion_03_design() {
    let (rows, t) = run("design");
    let mut problems = assert_problems(&rows);
    for q in [2, 3, 5] {
        for claim in ["design-gram-identity", "design-spectral-bound"] {
            if !rows.iter().any(|r| r.claim_ref == format!("{claim}/q={q}")) {
                problems.push(format!("{claim} missing at q={q}"));
            }
        }
    }
    verdict(3, "point-plane design Gram identity and spectral bound", t, None, problems);
}

#[test]
fn criterion_04_inequalities() {
    let (rows, t) = run("inequalities");
    let mut problems = assert_problems(&rows);
    for claim in [
        "energy-cauchy-schwarz", "energy-holder", "tk-recursive", "tk-norm", "energy-k-crude", "energy-k-range",
        "balanced-energy-nonnegative", "difference-moment-over-set", "subgroup-additive-energy-lower",
        "legendre-energy/p=13", "legendre-energy/p=29", "frobenius-inequality", "frobenius-top-singular",
        "frobenius-gram-trace", "multiplicative-energy-norm",
    ] {
        require(&rows, claim, &mut problems);
    }
    verdict(4, "constant-free inequalities", t, None, problems);
}

#[test]
fn criterion_05_collinear_desk_check() {
    let (rows, t) = run("qdesk");
    let mut problems = assert_problems(&rows);
    let errors: Vec<&BoundReport> = rows.iter().filter(|r| r.claim_ref.contains("-error/")).collect();
    if errors.len() != 30 {
        problems.push(format!("expected 30 error rows, found {}", errors.len()));
    }
    let worst = errors.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    for r in errors {
        if r.verdict != Some(true) {
            problems.push(format!("ratio above 10: {}", describe(r)));
        }
    }
    println!("    worst collinear error ratio {worst:.4}");
    verdict(5, "collinear quadruples and triples, ratio <= 10", t, Some(Duration::from_secs(180)), problems);
}

#[test]
fn criterion_06_flattening() {
    let (rows, t) = run("flatten");
    let mut problems = assert_problems(&rows);
    for p in [5, 7, 11] {
        for claim in ["haar-profile-zero", "identity-profile-constant"] {
            if !rows.iter().any(|r| r.claim_ref == format!("{claim}/p={p}")) {
                problems.push(format!("{claim} missing at p={p}"));
            }
        }
        require(&rows, &format!("flattening-monotone/k=0/random,p={p}"), &mut problems);
    }
    require(&rows, "random-walk-flat/k=6,p=5", &mut problems);
    verdict(6, "flattening profiles", t, None, problems);
}

#[test]
fn criterion_07_coset_escape() {
    let (rows, t) = run("escape");
    let mut problems = assert_problems(&rows);
    for p in [7, 11, 13] {
        for claim in ["family-coset-intersection/borel", "rational-family-coset-intersection/borel"] {
            let found = rows.iter().any(|r| r.kind == Kind::Assert && r.claim_ref == format!("{claim}/p={p}"));
            if !found {
                problems.push(format!("{claim} not asserted at p={p}"));
            }
        }
    }
    let violations: Vec<&BoundReport> = rows
        .iter()
        .filter(|r| r.claim_ref.starts_with("sprime-coset-intersection/borel"))
        .filter(|r| matches!((r.lhs.to_f64(), r.rhs.to_f64()), (Some(l), Some(b)) if l > b))
        .collect();
    if violations.is_empty() {
        problems.push("no recorded violation for the S' family".into());
    } else {
        println!("    S' violation: {}", describe(violations[0]));
    }
    verdict(7, "coset intersection bounds", t, None, problems);
}

#[test]
fn criterion_08_continued_fractions() {
    let (rows, t) = run("cf");
    let mut problems = assert_problems(&rows);
    let dev: Vec<&BoundReport> =
        rows.iter().filter(|r| r.claim_ref.starts_with("continued-fraction-equidistribution")).collect();
    if dev.len() != 3 {
        problems.push(format!("expected 3 seeds, found {}", dev.len()));
    }
    for r in dev {
        println!("    {}", describe(r));
        if r.verdict != Some(true) {
            problems.push(format!("deviation not below 0.5: {}", describe(r)));
        }
    }
    verdict(8, "continued-fraction mass and equidistribution", t, Some(Duration::from_secs(60)), problems);
}

#[test]
fn criterion_09_multilinear() {
    let (rows, t) = run("multilinear");
    let mut problems = assert_problems(&rows);
    require(&rows, "trilinear-full-set/p=7", &mut problems);
    require(&rows, "trilinear-full-set/p=101", &mut problems);
    let saving: Vec<&BoundReport> = rows.iter().filter(|r| r.claim_ref.starts_with("trilinear-saving")).collect();
    if saving.is_empty() {
        problems.push("no saving rows".into());
    }
    for r in saving {
        println!("    {}", describe(r));
        if r.verdict != Some(true) {
            problems.push(format!("envelope exceeded: {}", describe(r)));
        }
    }
    verdict(9, "trilinear sums", t, None, problems);
}

#[test]
fn criterion_10_decomposition() {
    let (rows, t) = run("decompose");
    let mut problems = assert_problems(&rows);
    for family in ["interval", "coset", "random"] {
        for claim in [
            "decomposition-iterations",
            "decomposition-additive-part",
            "decomposition-idempotent",
            "pigeonhole-sandwich",
        ] {
            if !rows.iter().any(|r| r.claim_ref == format!("{claim}/{family},|A|=120")) {
                problems.push(format!("{claim} missing for {family}"));
            }
        }
        let branch = rows.iter().find(|r| {
            r.claim_ref.starts_with("sum-product-") && r.claim_ref.ends_with(&format!("{family},|A|=120"))
        });
        match branch {
            Some(r) => println!("    {}", describe(r)),
            None => problems.push(format!("no sum-product branch recorded for {family}")),
        }
    }
    verdict(10, "sum-product decomposition", t, None, problems);
}
