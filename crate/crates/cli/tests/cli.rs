use std::process::{Command, Output};

fn sill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sill"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(sill(&["bogus"]).status.code(), Some(3));
    assert_eq!(sill(&["laws"]).status.code(), Some(3));
    assert_eq!(sill(&["eval", "flip.sill", "--proc", "nothere"]).status.code(), Some(3));
    assert_eq!(sill(&["check", "no_such_file.sill"]).status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    let o = sill(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("demo-flip"));
}

#[test]
fn nonconforming_input_names_the_expected_shape() {
    let o = sill(&["eval", "wait_pair.sill", "--proc", "wait_pair", "--in", "b+ = *"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("expected"), "{err}");
}

#[test]
fn exhausted_fuel_is_approximate() {
    let o = sill(&["eval", "flip.sill", "--proc", "flip", "--in", "b+ = 0·1·0·1·_", "--fuel", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    let o = sill(&["equiv", "flip.sill", "--left", "flipflip", "--right", "copy", "--depth", "4", "--fuel", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("approximate"));
}

#[test]
fn demo_flip_reports_stabilization() {
    let o = sill(&["demo-flip", "--depth", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("equivalent; chain stabilized at n = 2 on every input")
    );
}

#[test]
fn laws_suites_pass() {
    for suite in ["trace", "structural"] {
        let o = sill(&["laws", "--suite", suite, "--seed", "0"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn json_is_byte_stable() {
    let args = ["laws", "--suite", "trace", "--seed", "5", "--json"];
    let a = sill(&args);
    let b = sill(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 12);
}

#[test]
fn sequential_and_parallel_agree() {
    let a = sill(&["equiv", "flip.sill", "--left", "flip", "--right", "copy", "--depth", "3", "--json"]);
    let b = sill(&["equiv", "flip.sill", "--left", "flip", "--right", "copy", "--depth", "3", "--json", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(1));
}
