//! End-to-end tests of the command-line binary: stream contracts, exit
//! codes, and output purity.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bangla-ipa"))
}

fn run_with_stdin(mut cmd: Command, input: &str) -> Output {
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn transcribe_preserves_line_count() {
    let input = "মুসক\n\nজল পড়ে\n";
    let out = run_with_stdin(bin_args(&["transcribe"]), input);
    assert!(out.status.success());
    let stdout = stdout_str(&out);
    assert_eq!(stdout, "mʊʃɔk\n\nɟɔl pɔɽe\n");
}

fn bin_args(args: &[&str]) -> Command {
    let mut c = bin();
    c.args(args);
    c
}

#[test]
fn transcribe_diagnostics_stay_off_stdout() {
    // A Latin letter inside a word warns on stderr; stdout carries only IPA.
    let out = run_with_stdin(bin_args(&["transcribe"]), "Qক\n");
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "Qkɔ\n");
    assert!(stderr_str(&out).contains("unmappable"));
}

#[test]
fn transcribe_strict_exits_one_on_warning() {
    let out = run_with_stdin(bin_args(&["transcribe", "--strict"]), "Qক\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn transcribe_trace_appends_annex_column() {
    let out = run_with_stdin(bin_args(&["transcribe", "--trace"]), "জল\n");
    let stdout = stdout_str(&out);
    let line = stdout.lines().next().unwrap();
    let (ipa, trace) = line.split_once('\t').expect("annex column");
    assert_eq!(ipa, "ɟɔl");
    assert!(trace.contains("base-map"));
}

#[test]
fn transcribe_output_is_deterministic() {
    let input = "মো. করিম ১৯টা চাঁদ দেখলেন।\nগরুগুলোও ২০৫০\n";
    let a = run_with_stdin(bin_args(&["transcribe"]), input);
    let b = run_with_stdin(bin_args(&["transcribe"]), input);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn evaluate_self_consistent_corpus_reports_zero() {
    let dir = TempDir::new().unwrap();
    let corpus_path = dir.path().join("self.tsv");
    let report_path = dir.path().join("report.txt");

    // Build references with the binary itself.
    let texts = ["জল পড়ে", "মুসক চাই", "২০৬ টাকা"];
    let out = run_with_stdin(bin_args(&["transcribe"]), &(texts.join("\n") + "\n"));
    let refs: Vec<String> = stdout_str(&out).lines().map(str::to_string).collect();
    let mut tsv = String::new();
    for (i, (text, ipa)) in texts.iter().zip(&refs).enumerate() {
        tsv.push_str(&format!("s{i}\t{text}\t{ipa}\n"));
    }
    std::fs::write(&corpus_path, tsv).unwrap();

    let out = bin_args(&[
        "evaluate",
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--report",
        report_path.to_str().unwrap(),
    ])
    .output()
    .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("WER 0.000000\n"), "got {stdout}");

    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.contains("wer\t0.000000"));
    assert!(report.contains("n_sentences\t3"));
}

#[test]
fn ipa_normalize_stream() {
    let out = run_with_stdin(bin_args(&["ipa", "normalize"]), "goruguloo:\næ\n");
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "goɾʊgʊlooː\nɛ\n");
}

#[test]
fn ipa_normalize_strict_surfaces_errors() {
    let out = run_with_stdin(bin_args(&["ipa", "normalize", "--strict"]), "ə\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("unknown IPA symbol"));
}

#[test]
fn ipa_validate_passes_lines_through() {
    let out = run_with_stdin(bin_args(&["ipa", "validate"]), "bʱɔ\nbʰɔ\n");
    assert!(out.status.success(), "non-strict validate always exits 0");
    assert_eq!(stdout_str(&out), "bʱɔ\nbʰɔ\n");
    assert!(stderr_str(&out).contains("BadAspiration"));

    let out = run_with_stdin(bin_args(&["ipa", "validate", "--strict"]), "bʰɔ\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lexicon_check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = dir.path().join("good.tsv");
    std::fs::write(&good, "ফেইক\tfeik\tloan\n").unwrap();
    let out = bin_args(&["lexicon", "check", good.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_str(&out).starts_with("ok: 1 entries"));

    let bad = dir.path().join("bad.tsv");
    std::fs::write(&bad, "ফেইক\tfeik\tloan\nভ\tqə\tloan\n").unwrap();
    let out = bin_args(&["lexicon", "check", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("line 2"));
}

#[test]
fn usage_error_exits_two() {
    let out = bin_args(&["no-such-subcommand"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_error_exits_three() {
    let out = bin_args(&["transcribe", "--input", "/nonexistent/path.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lexicon_overlay_overrides_builtin() {
    let dir = TempDir::new().unwrap();
    let overlay = dir.path().join("overlay.tsv");
    std::fs::write(&overlay, "ফেইক\tpʰeɪk\toverride\n").unwrap();
    let out = run_with_stdin(
        bin_args(&["transcribe", "--lexicon", overlay.to_str().unwrap()]),
        "ফেইক\n",
    );
    assert_eq!(stdout_str(&out), "pʰeɪk\n");
}

#[test]
fn lexicon_dir_env_var_applies() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("a.tsv"), "ফেইক\tvvv\toverride\n").unwrap();
    let mut cmd = bin_args(&["transcribe"]);
    cmd.env("BANGLA_IPA_LEXICON_DIR", dir.path());
    let out = run_with_stdin(cmd, "ফেইক\n");
    assert_eq!(stdout_str(&out), "vvv\n");
}

#[test]
fn numbers_flag_selects_policy() {
    let out = run_with_stdin(bin_args(&["transcribe", "--numbers", "digits"]), "২০৬\n");
    let line = stdout_str(&out);
    assert_eq!(line.split_whitespace().count(), 3, "got {line}");

    let out = run_with_stdin(bin_args(&["transcribe", "--numbers", "cardinal"]), "২০৬\n");
    let line = stdout_str(&out);
    assert_eq!(line.split_whitespace().count(), 2, "got {line}");
}
