use std::process::{Command, Output};

use numsg::report::{read_json, Results};

fn numsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numsg")).args(args).output().unwrap()
}

fn json_run(args: &[&str]) -> String {
    let out = numsg(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(numsg(&["analyze", "3", "4", "5"]).status.code(), Some(0));
    let out = numsg(&["analyze", "4", "6", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not coprime"));
    assert_eq!(numsg(&["relations", "2", "3", "4"]).status.code(), Some(1));
    assert_eq!(numsg(&["analyze"]).status.code(), Some(2));
    assert_eq!(
        numsg(&["density", "--m", "3", "--samples", "10000"]).status.code(),
        Some(2)
    );
    assert_eq!(numsg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn analyze_record() {
    let text = json_run(&["analyze", "3", "4", "5"]);
    let rec = read_json(text.as_bytes()).unwrap();
    let Results::Profile(p) = rec.results else {
        panic!("wrong kind")
    };
    assert_eq!(
        (p.frobenius, p.conductor, p.genus, p.type_, p.symmetric),
        (2, 3, 2, 2, false)
    );
    assert!(rec.timestamp.is_some());
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "sweep-d",
        "--base",
        "3,5,7",
        "--N",
        "50",
        "--r",
        "3",
        "--sample",
        "2000",
        "--seed",
        "9",
        "--no-timestamp",
    ];
    assert_eq!(json_run(&args), json_run(&args));
    let args = [
        "density",
        "--m",
        "2",
        "--samples",
        "20000",
        "--seed",
        "3",
        "--no-timestamp",
    ];
    assert_eq!(json_run(&args), json_run(&args));
}

#[test]
fn thread_count_does_not_change_results() {
    let base = [
        "sweep-d",
        "--base",
        "3,4,5",
        "--series",
        "20,40",
        "--r",
        "3",
        "--no-timestamp",
    ];
    let results = |threads: &str| {
        let mut args = base.to_vec();
        args.extend(["--threads", threads]);
        read_json(json_run(&args).as_bytes()).unwrap().results
    };
    assert_eq!(results("1"), results("8"));

    let uw = [
        "sweep-uw", "--u", "2,1,1", "--w", "1,1,1", "--N", "30", "--r", "2", "--sample", "5000", "--seed", "4",
    ];
    let run = |threads: &str| {
        let mut args = uw.to_vec();
        args.extend(["--threads", threads, "--no-timestamp"]);
        read_json(json_run(&args).as_bytes()).unwrap().results
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let out = numsg(&[
        "analyze",
        "4",
        "5",
        "11",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("C=8"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().next().unwrap().contains("frobenius"));
}
