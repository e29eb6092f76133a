use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_skewscope"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parity_samples() -> Vec<u8> {
    let o = run(&["gen", "parity", "--n", "12", "--s", "0,3,7", "--eta", "0.1", "--samples", "20000", "--seed", "7"], b"");
    assert_eq!(o.status.code(), Some(0));
    o.stdout
}

#[test]
fn parity_pipeline_finds_the_planted_cubes() {
    let samples = parity_samples();
    let o = run(&["enumerate", "fsr", "--k", "4", "--gamma", "0.5", "--eps", "1"], &samples);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    for line in lines {
        let cube = line.split_whitespace().next().unwrap();
        let fixed: Vec<usize> = cube.char_indices().filter(|(_, c)| *c != '*').map(|(i, _)| i).collect();
        assert_eq!(fixed, [0, 3, 7, 12], "{line}");
        assert!(line.contains("codim=4") && line.contains("minimal=true"));
    }
    let manifest: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn runs_are_reproducible() {
    let samples = parity_samples();
    assert_eq!(samples, parity_samples());
    let args = ["enumerate", "fsn", "--k", "4", "--gamma", "0.5", "--eps", "1"];
    let a = run(&args, &samples);
    let b = run(&["--workers", "1"].iter().chain(&args).copied().collect::<Vec<_>>(), &samples);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn uniform_measure_has_no_skewed_cubes() {
    let m = run(&["gen", "subcube", "--cube", "********"], b"");
    for cmd in ["fsr", "fsn", "oracle"] {
        let o = run(&["enumerate", cmd, "--k", "3", "--gamma", "0.5", "--eps", "0.5"], &m.stdout);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn exact_and_oracle_commands_agree() {
    let m = run(&["gen", "tribes", "--k", "3", "--t", "3"], b"");
    let args = ["--k", "3", "--gamma", "1", "--eps", "0.3333333333333333"];
    let fast = run(&[&["enumerate", "fsn"][..], &args].concat(), &m.stdout);
    let slow = run(&[&["enumerate", "oracle", "--sign", "negative"][..], &args].concat(), &m.stdout);
    let cubes = |o: &Output| -> Vec<String> {
        stdout(o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect()
    };
    assert_eq!(cubes(&fast).len(), 27);
    assert_eq!(cubes(&fast), cubes(&slow));
}

#[test]
fn bch_counts_and_spectrum() {
    let o = run(&["gen", "bch", "--l", "4", "--e", "1", "--count-min-weight"], b"");
    assert_eq!(stdout(&o).trim(), "105");
    let m = run(&["gen", "bch", "--l", "4", "--e", "1", "--format", "sparse"], b"");
    let dump = run(&["fourier", "dump", "--min-abs", "0.5"], &m.stdout);
    assert_eq!(dump.status.code(), Some(0));
    assert_eq!(stdout(&dump).lines().count(), 1 << 10);
}

#[test]
fn writes_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let measure = dir.path().join("tribes.txt");
    let summary = dir.path().join("run.json");
    let o = run(&["gen", "tribes", "--k", "2", "--t", "3", "-o", measure.to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        &["--summary", summary.to_str().unwrap(), "heavy", "exact", "--k", "2", "--rho", "0.3", "--measure", measure.to_str().unwrap()],
        b"",
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(!o.stdout.is_empty());
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(manifest.is_object());
}

#[test]
fn errors_exit_with_two() {
    let bad = run(&["enumerate", "fsr", "--k", "2", "--gamma", "0.5", "--eps", "1"], b"n=3\n1 2 3\n");
    assert_eq!(bad.status.code(), Some(2));
    let m = run(&["gen", "subcube", "--cube", "+***"], b"");
    let bad_gamma = run(&["enumerate", "fsn", "--k", "2", "--gamma", "1.5", "--eps", "1"], &m.stdout);
    assert_eq!(bad_gamma.status.code(), Some(2));
    let missing = run(&["heavy", "exact", "--k", "2", "--rho", "0.3", "--measure", "/nonexistent"], b"");
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["identities", "generators", "oracle-equivalence", "level-k"] {
        let o = run(&["verify", suite, "--trials", "3"], b"");
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        let out = stdout(&o);
        assert!(out.lines().filter(|l| !l.starts_with(suite)).all(|l| l.starts_with("PASS")));
        assert!(out.contains(", 0 failed"));
    }
}
