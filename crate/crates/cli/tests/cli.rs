//! End-to-end checks of the `covseq` binary: pipes, files, exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covseq"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn covseq");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_line(output: &Output) -> String {
    String::from_utf8(output.stdout.clone())
        .unwrap()
        .trim_end()
        .to_string()
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("covseq-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn gen_debruijn_prints_canonical_sequence() {
    let out = run_with_stdin(&["gen-debruijn", "--ell", "3"], "");
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), "0001011100");
}

#[test]
fn check_cover_reports_missing_tuple() {
    let out = run_with_stdin(&["check-cover", "--ell", "3"], "1001001110101\n");
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_line(&out);
    assert!(text.contains("000"), "missing tuple not reported: {text}");

    let out = run_with_stdin(&["check-cover", "--ell", "3"], "0001001110101\n");
    assert!(out.status.success());
    assert!(stdout_line(&out).starts_with("covering"));
}

#[test]
fn count_covering_emits_exact_json() {
    let out = run_with_stdin(
        &["count", "covering", "--n", "6", "--ell", "2", "--q", "2"],
        "",
    );
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(value["exact"], "18");
    assert_eq!(value["n"], 6);
    assert_eq!(value["ell"], 2);
    assert_eq!(value["q"], 2);
    assert_eq!(value["logDomain"], false);
}

#[test]
fn count_avoiding_emits_exact_json() {
    let out = run_with_stdin(&["count", "avoiding", "--n", "4", "--v", "00"], "");
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(value["exact"], "8");
}

#[test]
fn bounds_sandwich_json() {
    let out = run_with_stdin(&["bounds", "--n", "6", "--ell", "2"], "");
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(value["lower"], "8");
    assert_eq!(value["upper"], "32");
    assert_eq!(value["exact"], "18");
}

#[test]
fn rate_alpha_zero() {
    let out = run_with_stdin(&["rate", "--alpha", "0"], "");
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(value["lower"], 0.5);
    assert_eq!(value["upper"], 0.5);
}

#[test]
fn sample_avoiding_is_deterministic_and_valid() {
    let args = &[
        "sample-avoiding",
        "--v",
        "000000",
        "--n",
        "64",
        "--seed",
        "9",
    ];
    let first = run_with_stdin(args, "");
    let second = run_with_stdin(args, "");
    assert!(first.status.success());
    let line = stdout_line(&first);
    assert_eq!(line, stdout_line(&second));
    assert_eq!(line.len(), 64);
    assert!(!line.contains("000000"));
}

#[test]
fn encode_decode_pipe_roundtrip() {
    let n = 1 << 16;
    let word: String = (0..n - 1)
        .map(|i| if (i / 3) % 2 == 0 { '1' } else { '0' })
        .collect();
    let encoded = run_with_stdin(&["encode", "--n", "65536", "--ell", "6"], &word);
    assert!(encoded.status.success());
    let sequence = stdout_line(&encoded);
    assert_eq!(sequence.len(), n);

    let decoded = run_with_stdin(&["decode", "--n", "65536", "--ell", "6"], &sequence);
    assert!(decoded.status.success());
    assert_eq!(stdout_line(&decoded), word);
}

#[test]
fn compress_decompress_roundtrip_via_files() {
    let input = temp_path("stream-in");
    let compressed = temp_path("stream-mid");
    let restored = temp_path("stream-out");
    // 5000 symbols avoiding 010101: long runs break the pattern.
    let data: String = "0011".repeat(1250).chars().collect();
    std::fs::write(&input, format!("{data}\n")).unwrap();

    let out = bin()
        .args(["compress", "--v", "010101"])
        .arg("--input")
        .arg(&input)
        .arg("--output")
        .arg(&compressed)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mid = std::fs::read_to_string(&compressed).unwrap();
    assert_eq!(mid.trim_end().len(), 4999); // one full block, one symbol saved

    let out = bin()
        .args(["decompress", "--v", "010101"])
        .arg("--input")
        .arg(&compressed)
        .arg("--output")
        .arg(&restored)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&restored).unwrap().trim_end(), data);

    cleanup(&[&input, &compressed, &restored]);
}

#[test]
fn invalid_parameters_leave_no_partial_output() {
    let output = temp_path("should-not-exist");
    let out = bin()
        .args(["gen-debruijn", "--ell", "99"])
        .arg("--output")
        .arg(&output)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!output.exists(), "failed run created an output file");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("validation"), "diagnostic missing: {err}");
}

#[test]
fn usage_errors_exit_one() {
    let out = run_with_stdin(&["count", "covering", "--n", "notanumber"], "");
    assert_eq!(out.status.code(), Some(1));
}

fn cleanup(paths: &[&Path]) {
    for path in paths {
        let _ = std::fs::remove_file(path);
    }
}
