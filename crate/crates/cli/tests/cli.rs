//! End-to-end smoke tests for the `groupgeom` binary: real subprocess
//! invocations checking output fields and the exit-code contract.

use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests");
    path.push("fixtures");
    path.push(name);
    path.to_str().expect("utf8 path").to_string()
}

fn run(args: &[&str]) -> (String, String, i32) {
    let output = Command::new(env!("CARGO_BIN_EXE_groupgeom"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(output.stdout).expect("utf8 stdout"),
        String::from_utf8(output.stderr).expect("utf8 stderr"),
        output.status.code().expect("exit code"),
    )
}

fn field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|line| line.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        .unwrap_or_else(|| panic!("missing field {key} in:\n{stdout}"))
}

#[test]
fn solve_counts_square_roots_of_the_identity() {
    let (out, _, code) = run(&[
        "solve",
        "--group",
        "cyclic(2)",
        "--eq",
        "x1^2",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "solution_count"), "2");
    assert_eq!(field(&out, "space_size"), "2");
}

#[test]
fn structured_output_opens_with_the_schema_line() {
    let (out, _, code) = run(&[
        "solve",
        "--group",
        "cyclic(4)",
        "--eq",
        "x1^2",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("schema=groupgeom.v1\ncommand=solve\n"));
}

#[test]
fn solve_accepts_a_raw_multiplication_table() {
    let table = fixture("cyclic3.table");
    let (out, _, code) = run(&[
        "solve",
        "--table",
        &table,
        "--eq",
        "x1^3",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "solution_count"), "3");
    assert_eq!(field(&out, "group.names"), "e, r, r2");
}

#[test]
fn closure_grows_a_transposition_to_its_conjugacy_closure() {
    let (out, _, code) = run(&[
        "closure",
        "--group",
        "symmetric(3)",
        "--point",
        "1",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "was_algebraic"), "false");
    assert_eq!(field(&out, "closed_count"), "4");
}

#[test]
fn decompose_reports_the_family_for_commuting_pairs() {
    let (out, _, code) = run(&[
        "decompose",
        "--group",
        "symmetric(3)",
        "--vars",
        "2",
        "--eq",
        "[x1,x2]",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "solution_count"), "18");
    assert_eq!(field(&out, "decompose"), "yes");
    assert_eq!(field(&out, "decompose.family.size"), "4");
}

#[test]
fn analyze_flags_the_mixed_system_with_a_replayable_witness() {
    let system = fixture("comm_sq_cube.eqs");
    let (out, _, code) = run(&[
        "analyze",
        "--group",
        "symmetric(3)",
        "--system",
        &system,
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0, "analyze must exit clean when oracles agree:\n{out}");
    assert_eq!(field(&out, "verdict"), "not fully characteristic");
    assert_eq!(field(&out, "consistency"), "ok");
    assert_eq!(field(&out, "exact_oracle"), "no");
    assert_eq!(field(&out, "exact_oracle.witness.point"), "1 0");
    assert_eq!(field(&out, "exact_oracle.witness.result"), "0 1");
}

#[test]
fn identities_agree_between_the_radical_and_the_family() {
    let (out, _, code) = run(&[
        "identities",
        "--group",
        "cyclic(6)",
        "--eq",
        "x1^2",
        "--maxlen",
        "5",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "decomposable"), "true");
    assert_eq!(
        field(&out, "agreement"),
        "radical membership matches the identity oracle"
    );
}

#[test]
fn gcheck_confirms_the_exponent_word_is_verbal() {
    let (out, _, code) = run(&[
        "gcheck",
        "--group",
        "symmetric(3)",
        "--eq",
        "x1^6",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verbal.whole_space"), "true");
    assert_eq!(field(&out, "verbal.identities_verified"), "true");
    assert_eq!(field(&out, "freeness.marked_iso"), "true");
}

#[test]
fn gcheck_produces_a_witness_for_the_centralizer_system() {
    let system = fixture("centralizer.eqs");
    let (out, _, code) = run(&[
        "gcheck",
        "--group",
        "symmetric(3)",
        "--system",
        &system,
        "--format",
        "structured",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verbal.whole_space"), "false");
    assert_eq!(field(&out, "verbal.oracle"), "no");
    assert!(out.contains("verbal.witness.point="), "witness missing:\n{out}");
}

#[test]
fn scan_with_an_empty_catalog_completes_cleanly() {
    let (out, _, code) = run(&["scan", "--format", "structured"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "catalog.size"), "0");
    assert_eq!(field(&out, "status"), "complete");
}

#[test]
fn unknown_builders_are_input_errors() {
    let (_, err, code) = run(&["solve", "--group", "sporadic(1)", "--eq", "x1"]);
    assert_eq!(code, 1);
    assert!(err.contains("error:"), "stderr should explain: {err}");
}

#[test]
fn coefficient_systems_are_rejected_by_the_plain_analyses() {
    let system = fixture("centralizer.eqs");
    let (_, err, code) = run(&[
        "decompose",
        "--group",
        "symmetric(3)",
        "--system",
        &system,
    ]);
    assert_eq!(code, 1);
    assert!(
        err.contains("coefficient"),
        "error should point at the coefficient layer: {err}"
    );
}

#[test]
fn tight_budgets_exit_with_the_budget_code() {
    let system = fixture("comm_sq_cube.eqs");
    let (out, _, code) = run(&[
        "analyze",
        "--group",
        "symmetric(3)",
        "--system",
        &system,
        "--budget",
        "5",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 3);
    assert_eq!(field(&out, "exact_oracle"), "budget-exceeded");
}

#[test]
fn truncated_scans_keep_the_partial_table() {
    let (out, _, code) = run(&[
        "scan",
        "--group",
        "symmetric(3)",
        "--vars",
        "2",
        "--budget",
        "5",
        "--format",
        "structured",
    ]);
    assert_eq!(code, 3);
    assert_eq!(field(&out, "status"), "truncated");
    assert_eq!(field(&out, "group.0.truncated"), "true");
}

#[test]
fn help_is_not_an_error() {
    let (_, _, code) = run(&["--help"]);
    assert_eq!(code, 0);
}
