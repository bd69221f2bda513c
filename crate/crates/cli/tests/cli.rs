use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ancillary_core::rational::ratio;
use ancillary_core::{example1_model, example2_model, render_model, FiniteModel};

fn ancillary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ancillary"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, model: &FiniteModel) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, render_model(model)).unwrap();
    path
}

fn write_text(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn section<'a>(text: &'a str, title: &str) -> Vec<&'a str> {
    text.split(&format!("== {title} ==\n"))
        .nth(1)
        .unwrap()
        .lines()
        .take_while(|l| !l.is_empty())
        .collect()
}

#[test]
fn analyze_lists_minimal_ancillaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "ex1.txt",
        &example1_model(&ratio(1, 100)).unwrap(),
    );
    let out = ancillary(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut minimal = section(&text, "minimal ancillaries");
    minimal.sort_unstable();
    assert_eq!(
        minimal,
        [
            "1,2,3,4,5,6,7",
            "1,2,3,4,5,6|7",
            "1,2,3,4,7|5,6",
            "1,2,3,4|5,6,7",
            "1,2,3,4|5,6|7"
        ]
    );
    assert_eq!(section(&text, "laminal ancillary"), ["1,2,3,4|5,6|7"]);
    assert!(text.contains("1,3,5,6|2,4|7  1,2|3,4|5,6|7  (7/100, 13/100, 27/100, 53/100)"));
}

#[test]
fn analyze_one_parameter_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_text(
        dir.path(),
        "one.txt",
        "model one\nthetas a\nsamples x y z\na 1/2 1/3 1/6\n",
    );
    let out = ancillary(&["analyze", "--within-mss", "false", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all partitions ancillary; laminal = singletons"));
}

#[test]
fn analyze_respects_cap() {
    let dir = tempfile::tempdir().unwrap();
    let samples: Vec<String> = (1..=14).map(|i| i.to_string()).collect();
    let row1: Vec<String> = (1..=14).map(|i| format!("{i}/105")).collect();
    let row2: Vec<String> = (1..=14).map(|i| format!("{}/105", 15 - i)).collect();
    let text = format!(
        "model big\nthetas a b\nsamples {}\na {}\nb {}\n",
        samples.join(" "),
        row1.join(" "),
        row2.join(" ")
    );
    let path = write_text(dir.path(), "big.txt", &text);
    let out = ancillary(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_text(
        dir.path(),
        "bad.txt",
        "model m\nthetas a\nsamples 1 2\na 1/2 1/3\n",
    );
    assert_eq!(
        ancillary(&["analyze", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ancillary(&["analyze", "/nonexistent/model.txt"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn evidence_sc_conditions_on_contour() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "ex1.txt",
        &example1_model(&ratio(1, 100)).unwrap(),
    );
    let p = path.to_str().unwrap();
    let out = ancillary(&["evidence", p, "--observed", "5", "--function", "sc"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("laminal contour: {5,6}"));
    assert!(text.contains("  theta   5    6\n"));
    assert!(text.contains("  theta1  1/3  2/3\n"));
    assert!(text.contains("  theta2  2/3  1/3\n"));
    assert!(text.contains("PASS "));

    assert_eq!(
        ancillary(&["evidence", p, "--observed", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn evidence_ms_keeps_all_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex2.txt", &example2_model());
    let out = ancillary(&[
        "evidence",
        path.to_str().unwrap(),
        "--observed",
        "1",
        "--function",
        "ms",
    ]);
    let text = stdout(&out);
    assert!(text.contains("minimal sufficient blocks: 1|2|3|4"));
    assert!(text.contains("  theta1  1/6   1/6  1/3   1/3\n"));
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = write(
        dir.path(),
        "ex1.txt",
        &example1_model(&ratio(1, 100)).unwrap(),
    );
    let ex1 = ex1.to_str().unwrap();
    let out = ancillary(&[
        "compare",
        ex1,
        "--observed1",
        "5",
        ex1,
        "--observed2",
        "5",
        "--relation",
        "sc",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\nEQUIVALENT\n"));

    let out = ancillary(&[
        "compare",
        ex1,
        "--observed1",
        "5",
        ex1,
        "--observed2",
        "6",
        "--relation",
        "s",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NOT-EQUIVALENT"));

    let other = write_text(
        dir.path(),
        "other.txt",
        "model other\nthetas a b\nsamples 1 2\na 1/2 1/2\nb 1/4 3/4\n",
    );
    let out = ancillary(&[
        "compare",
        ex1,
        "--observed1",
        "5",
        other.to_str().unwrap(),
        "--observed2",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audit_exit_codes() {
    for relation in ["s", "sc", "c"] {
        let out = ancillary(&[
            "audit",
            "--corpus-seed",
            "5",
            "--corpus-size",
            "6",
            "--relation",
            relation,
        ]);
        assert_eq!(out.status.code(), Some(0), "{relation}: {}", stdout(&out));
    }
    let out = ancillary(&["audit", "--corpus-size", "6", "--relation", "c"]);
    assert!(stdout(&out).contains("violation found"));
    let out = ancillary(&["audit", "--corpus-size", "0", "--relation", "s"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_writes_figure_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = ancillary(&[
        "--out",
        dir.path().to_str().unwrap(),
        "reproduce",
        "example3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "statistic,block,scenario,p_theta1,p_theta2,likelihood_ratio,decimal_lr"
    );
    assert_eq!(lines.len(), 13);
    assert!(lines.contains(&"L,1+2+3+4,original,1/2,1/2,1,1.0000000000000000000"));
    assert!(lines.contains(&"L,1+2+3+4,reweighted,1/5,1/5,1,1.0000000000000000000"));
    assert!(lines.contains(&"C2,7,reweighted,53/100,53/100,1,1.0000000000000000000"));
    assert_eq!(
        fs::read_to_string(dir.path().join("report.txt")).unwrap(),
        stdout(&out)
    );

    let out = ancillary(&["reproduce", "example1", "--epsilon", "1/64"]);
    assert_eq!(out.status.code(), Some(2));
}
