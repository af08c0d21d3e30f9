use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use ffdm::cli::{self, EXIT_BAD_INPUT, EXIT_IO, EXIT_NOT_CODEWORD, EXIT_OK};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Outcome {
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ffdm").chain(args.iter().copied());
    let code = cli::run(argv, &mut input, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in:\n{report}"))
}

fn real(report: &str, key: &str) -> f64 {
    value(report, key).parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ffdm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_examples() {
    let o = run(
        &[
            "analyze",
            "--n",
            "8",
            "--p",
            "0.25",
            "--codebook",
            "optimal",
        ],
        "",
    );
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(value(&o.stdout, "k_hat"), "3");
    assert!((real(&o.stdout, "total") - 0.7355).abs() < 1e-3);

    let o = run(
        &["analyze", "--n", "4", "--p", "0.25", "--codebook", "cc:1:4"],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert!((real(&o.stdout, "total") - 1.245_112_497_836).abs() < 1e-9);

    let o = run(
        &["analyze", "--n", "2", "--p", "1/4", "--codebook", "union:1"],
        "",
    );
    assert!((real(&o.stdout, "total") - 0.301_754_164_984).abs() < 1e-9);
}

#[test]
fn analyze_rejects_bad_selectors() {
    for sel in ["best", "union:9", "cc:1:5", "greedy:0"] {
        let o = run(
            &["analyze", "--n", "2", "--p", "0.25", "--codebook", sel],
            "",
        );
        assert_eq!(o.code, EXIT_BAD_INPUT, "{sel}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["analyze", "--n", "8", "--p", "0.5"], "");
    assert_eq!(o.code, EXIT_BAD_INPUT);
}

#[test]
fn analyze_csv_row() {
    let o = run(
        &[
            "analyze",
            "--n",
            "8",
            "--p",
            "0.25",
            "--codebook",
            "union:3",
            "--csv",
        ],
        "",
    );
    let lines: Vec<&str> = o.stdout.lines().collect();
    let header = lines[lines.len() - 2];
    let row = lines[lines.len() - 1];
    assert_eq!(header.split(',').count(), row.split(',').count());
    assert!(row.starts_with("8,union:3,"));
}

#[test]
fn match_and_dematch_examples() {
    let o = run(
        &["match", "--scheme", "ccdm", "--n", "4", "--p", "0.25"],
        "11\n00\n",
    );
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout, "1000\n0001\n");

    let o = run(
        &["dematch", "--scheme", "ccdm", "--n", "4", "--p", "0.25"],
        "1000\n0001\n",
    );
    assert_eq!(o.stdout, "11\n00\n");

    let o = run(
        &["dematch", "--scheme", "ccdm", "--n", "4", "--p", "0.25"],
        "0011\n",
    );
    assert_eq!(o.code, EXIT_NOT_CODEWORD);
}

#[test]
fn match_rejects_malformed_lines() {
    for input in ["111\n", "1\n", "12\n", "ab\n"] {
        let o = run(&["match", "--n", "4", "--p", "0.25"], input);
        assert_eq!(o.code, EXIT_BAD_INPUT, "{input:?}");
    }
    let o = run(&["dematch", "--n", "4", "--p", "0.25"], "100\n");
    assert_eq!(o.code, EXIT_BAD_INPUT);
    let o = run(&["match", "--n", "4", "--p", "0.25"], "11\r\n");
    assert_eq!(o.stdout, "1000\n");
}

#[test]
fn optimal_scheme_round_trip() {
    let args = ["--scheme", "optimal", "--n", "10", "--p", "0.1"];
    let width = ffdm::Matcher::optimal(10, &"0.1".parse().unwrap(), 2)
        .unwrap()
        .input_len();
    assert!(width >= 3);
    let inputs: String = (0..1u32 << width)
        .map(|x| format!("{x:0width$b}\n"))
        .collect();
    let m = run(&[&["match"][..], &args].concat(), &inputs);
    assert_eq!(m.code, EXIT_OK, "{}", m.stderr);
    let d = run(&[&["dematch"][..], &args].concat(), &m.stdout);
    assert_eq!(d.stdout, inputs);
}

#[test]
fn radix_three_round_trip() {
    let args = ["--n", "8", "--p", "0.25", "--B", "3"];
    let m = run(&[&["match"][..], &args].concat(), "012\n222\n");
    assert_eq!(m.code, EXIT_OK, "{}", m.stderr);
    let d = run(&[&["dematch"][..], &args].concat(), &m.stdout);
    assert_eq!(d.stdout, "012\n222\n");
}

#[test]
fn sweep_examples() {
    let o = run(&["sweep", "--p", "0.25", "--n", "pow2:4..10"], "");
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "# schema=1");
    assert_eq!(lines.len(), 2 + 7);
    for row in &lines[2..] {
        let gap: f64 = row.split(',').nth(11).unwrap().parse().unwrap();
        assert!(gap >= -2.8441);
    }

    let o = run(&["sweep", "--p", "0.25", "--n", ""], "");
    assert_eq!(o.stdout.lines().count(), 2);
}

#[test]
fn sweep_agrees_with_analyze() {
    let s = run(&["sweep", "--p", "0.25", "--n", "8"], "");
    let a = run(&["analyze", "--n", "8", "--p", "0.25"], "");
    let row: Vec<&str> = s.stdout.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[1], value(&a.stdout, "k_hat"));
    assert_eq!(row[2], value(&a.stdout, "log2_size"));
    assert_eq!(row[3], value(&a.stdout, "p_letter"));
    assert_eq!(row[4], value(&a.stdout, "total"));
    assert_eq!(row[5], value(&a.stdout, "codebook_term"));
    assert_eq!(row[6], value(&a.stdout, "letter_term"));
    assert_eq!(row[11], value(&a.stdout, "gap"));
}

#[test]
fn sweep_writes_files_and_reports_io_errors() {
    let path = scratch("sweep.csv");
    let o = run(
        &[
            "sweep",
            "--p",
            "1/4",
            "--n",
            "16,32",
            "--out",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);

    let bad = scratch("missing-dir").join("nested").join("sweep.csv");
    let o = run(
        &[
            "sweep",
            "--p",
            "1/4",
            "--n",
            "16",
            "--out",
            bad.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(o.code, EXIT_IO);
}

#[test]
fn bounds_examples() {
    let o = run(
        &["bounds", "--kind", "stirling", "--n", "4", "--p", "0.5"],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert!((real(&o.stdout, "lower") - 5.6569).abs() < 1e-4);
    assert_eq!(value(&o.stdout, "exact"), "6");
    assert!((real(&o.stdout, "upper") - 6.3831).abs() < 1e-4);
    assert_eq!(value(&o.stdout, "result"), "PASS");

    let o = run(&["bounds", "--kind", "eq18", "--p", "0.25"], "");
    assert!((real(&o.stdout, "value") + 2.8441).abs() < 1e-4);

    let o = run(
        &["bounds", "--kind", "center-weight", "--n", "10", "--k", "4"],
        "",
    );
    assert_eq!(value(&o.stdout, "doubled_sum"), "1260");
    assert_eq!(value(&o.stdout, "result"), "PASS");

    for args in [
        &[
            "bounds",
            "--kind",
            "partial-sum",
            "--n",
            "200",
            "--p",
            "1/4",
        ][..],
        &["bounds", "--kind", "pletter-gap", "--n", "100", "--k", "25"],
        &["bounds", "--kind", "eq17", "--n", "4096", "--p", "0.25"],
        &["bounds", "--kind", "ccdm", "--n", "8", "--p", "0.25"],
        &["bounds", "--kind", "stirling", "--n", "2000", "--p", "0.5"],
    ] {
        let o = run(args, "");
        assert_eq!(o.code, EXIT_OK, "{args:?}: {}{}", o.stdout, o.stderr);
        assert_eq!(value(&o.stdout, "result"), "PASS");
    }
}

#[test]
fn bounds_usage_errors() {
    // At n = 8 the lower bound of the optimum is vacuous but still valid.
    let o = run(
        &[
            "bounds", "--kind", "eq17", "--n", "8", "--p", "0.25", "--k", "3",
        ],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(value(&o.stdout, "lower"), "-inf");

    let o = run(&["bounds", "--kind", "frobnicate"], "");
    assert_eq!(o.code, EXIT_BAD_INPUT);
    let o = run(&["bounds", "--kind", "stirling", "--n", "4"], "");
    assert_eq!(o.code, EXIT_BAD_INPUT);
    let o = run(
        &["bounds", "--kind", "stirling", "--n", "5", "--p", "1/4"],
        "",
    );
    assert_eq!(o.code, EXIT_BAD_INPUT);
}

#[test]
fn binary_uses_the_same_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ffdm");
    let mut child = Command::new(bin)
        .args(["match", "--n", "4", "--p", "0.25"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"11\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, b"1000\n");

    let mut child = Command::new(bin)
        .args(["dematch", "--n", "4", "--p", "0.25"])
        .stdin(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"0011\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NOT_CODEWORD));

    let out = Command::new(bin).arg("--help").output().unwrap();
    assert!(out.status.success());
    let out = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BAD_INPUT));
}
