use std::process::{Command, Output};

fn bicover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicover"))
        .args(args)
        .output()
        .expect("binary runs")
}

const FIGURE: &[&str] = &[
    "verify", "--n", "6", "--m", "4", "--A", "", "--B", "2", "--matrix", "2,1,1,1", "--K", "10",
];

#[test]
fn verify_passes_on_the_figure_instance() {
    let out = bicover(FIGURE);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("H1 = Z/12"));
    assert!(text.contains("H2 = Z/2 x Z/6"));
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("NOT-CERTIFIED"));
}

#[test]
fn verify_json_is_byte_identical_across_runs() {
    let first = bicover(&[
        "verify", "--n", "6", "--m", "4", "--B", "2", "--matrix", "2,1,1,1", "--json",
    ]);
    let second = bicover(&[
        "verify", "--n", "6", "--m", "4", "--B", "2", "--matrix", "2,1,1,1", "--json",
    ]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["verdict"], "PASS");
    assert_eq!(parsed["construction"]["h1"]["invariant_factors"][0], "12");
}

#[test]
fn verify_fails_on_bad_support() {
    let out = bicover(&[
        "verify", "--n", "6", "--m", "4", "--B", "3", "--matrix", "2,1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: FAIL"));
    assert!(text.contains("does not divide both"));
}

#[test]
fn verify_fails_on_non_anosov_matrix() {
    let out = bicover(&[
        "verify", "--n", "6", "--m", "4", "--B", "2", "--matrix", "1,0,0,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_is_exit_two_with_error_object() {
    // n below 2
    let out = bicover(&[
        "verify", "--n", "1", "--m", "4", "--B", "2", "--matrix", "2,1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "malformed-input");

    // composite entry in a prime set
    let out = bicover(&[
        "verify", "--n", "6", "--m", "4", "--A", "4", "--matrix", "2,1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // matrix with the wrong arity
    let out = bicover(&[
        "verify", "--n", "6", "--m", "4", "--B", "2", "--matrix", "2,1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // unknown flag goes through the same channel
    let out = bicover(&["verify", "--nope", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "malformed-input");
}

#[test]
fn enumerate_lists_splittings() {
    let out = bicover(&["enumerate", "--n", "36", "--m", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(": 3"));

    let out = bicover(&["enumerate", "--n", "5", "--m", "7", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["count"], 0);

    let out = bicover(&["enumerate", "--n", "6", "--m", "4", "--json"]);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["splittings"][0]["B"][0], 2);
}

#[test]
fn family_command_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("traces.csv");
    let out = bicover(&[
        "family",
        "--primes",
        "2,3",
        "--matrices",
        "2,1,1,1;3,1,2,1",
        "--K",
        "10",
        "--trace-csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("k,trace_map_1,trace_map_2\n1,3,4\n2,7,14\n"));

    // duplicated matrix: power independence is inconclusive, family fails
    let out = bicover(&["family", "--primes", "2,3", "--matrices", "2,1,1,1;2,1,1,1"]);
    assert_eq!(out.status.code(), Some(1));

    // single-prime, single-matrix degenerate report passes
    let out = bicover(&["family", "--primes", "2", "--matrices", "2,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));

    // non-Anosov family member is malformed input
    let out = bicover(&["family", "--primes", "2", "--matrices", "1,0,0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let mut args: Vec<&str> = FIGURE.to_vec();
    let path_str = path.to_str().unwrap().to_string();
    args.extend(["--json", "--out", &path_str]);
    let out = bicover(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(parsed["verdict"], "PASS");
}
