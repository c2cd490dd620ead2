//! Replays the transcripts stored next to each fixture.

use std::path::{Path, PathBuf};
use std::process::Command;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

struct Case {
    args: Vec<String>,
    stdout: String,
    exit: i32,
}

fn parse_transcript(text: &str) -> Vec<Case> {
    let mut cases = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next() {
        let Some(cmd) = line.strip_prefix("$ sill ") else { continue };
        let args = shlex::split(cmd).expect("command splits");
        let mut stdout = String::new();
        let exit = loop {
            let l = lines.next().expect("transcript ends with an exit line");
            if let Some(code) = l.strip_prefix("[exit ").and_then(|r| r.strip_suffix(']')) {
                break code.parse().expect("exit code");
            }
            stdout.push_str(l);
            stdout.push('\n');
        };
        cases.push(Case { args, stdout, exit });
    }
    cases
}

fn expected_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            expected_files(&p, out);
        } else if p.extension().is_some_and(|e| e == "expected") {
            out.push(p);
        }
    }
}

#[test]
fn every_fixture_matches_its_transcript() {
    let mut files = Vec::new();
    expected_files(&fixtures_dir(), &mut files);
    files.sort();
    assert!(files.len() >= 15, "found {} transcripts", files.len());
    let mut checked = 0;
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        let cases = parse_transcript(&text);
        assert!(!cases.is_empty(), "{} has no commands", f.display());
        for c in cases {
            let out = Command::new(env!("CARGO_BIN_EXE_sill"))
                .args(&c.args)
                .current_dir(f.parent().unwrap())
                .output()
                .unwrap();
            let stdout = String::from_utf8(out.stdout).unwrap();
            assert_eq!(stdout, c.stdout, "{}: sill {}", f.display(), c.args.join(" "));
            assert_eq!(out.status.code(), Some(c.exit), "{}: sill {}", f.display(), c.args.join(" "));
            checked += 1;
        }
    }
    assert!(checked >= 30);
}

#[test]
fn every_sill_file_has_a_transcript() {
    let mut files = Vec::new();
    expected_files(&fixtures_dir(), &mut files);
    let mut stack = vec![fixtures_dir()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|e| e == "sill") {
                assert!(files.contains(&p.with_extension("expected")), "{} lacks a transcript", p.display());
            }
        }
    }
}
