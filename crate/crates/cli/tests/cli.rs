use std::process::{Command, Output};

fn sumprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod")).args(args).env_remove("SUMPROD_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data lines of a CSV report, header included.
fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    let mut out = vec![header];
    out.extend(r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()));
    out
}

#[test]
fn subgroup_tk_is_fifteen() {
    let o = sumprod(&["tk", "--set", "subgroup:p=13,t=3", "--k", "2", "--no-timestamp"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(rows[0].len(), 9);
    assert_eq!(rows[1][1], "tk/k=2");
    assert_eq!(rows[1][3], "15");
    assert_eq!(rows[1][4], "81/13");
}

#[test]
fn identities_suite_exits_zero() {
    let o = sumprod(&["verify", "identities", "--p", "101", "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&o);
    assert!(rows.len() > 1);
    assert!(rows[1..].iter().all(|r| r[8] == "true"));
}

#[test]
fn full_trilinear_sum_at_seven() {
    let o = sumprod(&["expsum", "tri", "--X", "full", "--Y", "full", "--Z", "full", "--p", "7"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(rows[1][1], "trilinear-sum");
    assert_eq!(rows[1][3], "91");
}

#[test]
fn reports_are_reproducible_without_timestamp() {
    let args = ["collinear", "--set", "random:p=101,n=20,seed=4", "--no-timestamp"];
    let (a, b) = (sumprod(&args), sumprod(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("# timestamp="));
    assert!(stdout(&sumprod(&args[..3])).contains("# timestamp="));
}

#[test]
fn metadata_leads_the_csv() {
    let o = sumprod(&["energy", "--A", "interval:lo=1,hi=10", "--p", "31", "--no-timestamp"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# version="));
    assert_eq!(lines.next().unwrap(), "# prng=chacha8");
    assert!(lines.next().unwrap().starts_with("# config={"));
    assert_eq!(lines.next().unwrap(), "suite,claim_ref,kind,lhs,main_term,error,rhs,ratio,verdict");
}

#[test]
fn json_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = sumprod(&[
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "ek",
        "--set",
        "interval:p=31,lo=1,hi=10",
        "--k",
        "2",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["metadata"]["prng"], "chacha8");
    assert_eq!(v["rows"][0]["claim_ref"], "energy-k/k=2");
    assert_eq!(v["rows"][0]["kind"], "RATIO");
}

#[test]
fn unknown_subcommand_fails() {
    let o = sumprod(&["frobnicate"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn set_without_prime_fails() {
    let o = sumprod(&["tk", "--set", "full", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--p"));
}

#[test]
fn unknown_suite_fails() {
    let o = sumprod(&["verify", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_assert_sets_exit_code() {
    // Re-running the decomposition on an interval's additive part extracts again.
    let o = sumprod(&["verify", "decompose", "--small"]);
    assert_eq!(o.status.code(), Some(1));
    let rows = csv_rows(&o);
    assert!(rows.iter().any(|r| r[2] == "ASSERT" && r[8] == "false"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["cf", "--set", "random:p=101,n=30,seed=2", "--k", "3", "--no-timestamp"];
    let one = Command::new(env!("CARGO_BIN_EXE_sumprod")).arg("sl2").args(args).args(["--threads", "1"]).output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_sumprod")).arg("sl2").args(args).args(["--threads", "4"]).output().unwrap();
    assert!(one.status.success() && four.status.success());
    let strip = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("# config=")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&one), strip(&four));
}
