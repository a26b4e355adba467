//! End-to-end checks of the command-line surface: exact output lines, exit
//! codes, and run-to-run determinism.

use std::io::Write;
use std::path::PathBuf;

use circlet::cli::run;

fn run_args(args: &[&str]) -> (i32, String) {
    let mut full = vec!["circlet"];
    full.extend_from_slice(args);
    run(full)
}

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

fn half_one_file(dir: &tempfile::TempDir) -> PathBuf {
    let mut text = String::from("n 8\n");
    for v in 1..=8usize {
        let w = v % 8 + 1;
        let (a, b) = (v.min(w), v.max(w));
        text.push_str(&format!("e {a} {b} 1/2\n"));
    }
    for v in 1..=4usize {
        text.push_str(&format!("e {v} {} 1/1\n", v + 4));
    }
    write_file(dir, "half_one.txt", &text)
}

#[test]
fn coeffs_output() {
    let (code, out) = run_args(&["coeffs", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out, "c: 1 4 3 2 5 0\nrhs: 10\nf: 5 8 7 6 9 4\ntt_rhs: 58\n");

    let (code, out) = run_args(&["coeffs", "10"]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn check_tour_and_point() {
    let dir = tempfile::tempdir().unwrap();
    let tour = write_file(&dir, "tour.txt", "n 8\ntour 1 2 3 4 8 7 6 5\n");
    let (code, out) = run_args(&["check", tour.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "check value=6 rhs=6 satisfied=true slack=0\n");

    let point = half_one_file(&dir);
    let (code, out) = run_args(&["check", point.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out, "check value=4 rhs=6 satisfied=false slack=-2\n");
}

#[test]
fn verify_small_and_budget() {
    let (code, out) = run_args(&["verify", "8"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "min=6 rhs=6 valid=true\nexhaustive_min=6 tight_tours=36\n"
    );

    let (code, out) = run_args(&["verify", "16"]);
    assert_eq!(code, 0);
    assert_eq!(out, "min=14 rhs=14 valid=true\n");

    let (code, out) = run_args(&["verify", "24"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.starts_with("error:"));
}

#[test]
fn facet_certificate_line() {
    let (code, out) = run_args(&["facet", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out, "facet n=8 family=20 rank=20 tight=true valid=true\n");

    let (code, _) = run_args(&["facet", "20"]);
    assert_eq!(code, 3);
}

#[test]
fn strength_lines() {
    let (code, out) = run_args(&["strength", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out, "strength n=8 circlet=11/10 crown=11/10\n");

    let (code, out) = run_args(&["strength", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "strength n=4 circlet=1\n");

    let (code, out) = run_args(&["strength", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out, "strength n=12 circlet=29/27 crown=35/33\n");
}

#[test]
fn contract_reports() {
    let dir = tempfile::tempdir().unwrap();
    let tour = write_file(&dir, "b2ref.txt", "n 12\ntour 1 2 8 7 11 5 6 12 9 10 3 4\n");
    let (code, out) = run_args(&["contract", tour.to_str().unwrap()]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "contract B2 u=1 j=4 k=11 delta=6");

    let (_, verbose) = run_args(&["contract", tour.to_str().unwrap(), "--verbose"]);
    assert!(verbose.contains("  edge {3,10} old=5 new=3"));

    // At n=4 the window is the whole vertex set, so hits cannot contract.
    let small = write_file(&dir, "small.txt", "n 4\ntour 1 2 4 3\n");
    let (code, out) = run_args(&["contract", small.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(
        out.lines().all(|l| l.ends_with("non-contractible")),
        "{out}"
    );

    let plain = write_file(&dir, "plain.txt", "n 8\ntour 1 2 3 4 5 6 7 8\n");
    let (code, out) = run_args(&["contract", plain.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "no structures\n");
}

#[test]
fn separate_modes() {
    let dir = tempfile::tempdir().unwrap();
    let point = half_one_file(&dir);
    let (code, out) = run_args(&["separate", point.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(
        out,
        "separate mode=exhaustive value=4 rhs=6 violation=2\nlabeling: 1 2 3 4 5 6 7 8\n"
    );

    // Thread partitioning must not change the result.
    let (_, threaded) = run_args(&["separate", point.to_str().unwrap(), "--threads", "4"]);
    assert_eq!(out, threaded);

    let (code, h1) = run_args(&[
        "separate",
        point.to_str().unwrap(),
        "--mode",
        "heuristic",
        "--budget",
        "40",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 1);
    let (_, h2) = run_args(&[
        "separate",
        point.to_str().unwrap(),
        "--mode",
        "heuristic",
        "--budget",
        "40",
        "--seed",
        "3",
    ]);
    assert_eq!(h1, h2);
    assert!(h1.starts_with("separate mode=heuristic"));

    // A tour file is accepted as its 0/1 point and never violates.
    let tour = write_file(&dir, "tour.txt", "n 8\ntour 1 2 3 4 8 7 6 5\n");
    let (code, out) = run_args(&["separate", tour.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn el_listing() {
    let (code, out) = run_args(&["el", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "el n=4 count=2\nt: 2 2\nt: 4 0\n");

    let (code, _) = run_args(&["el", "14"]);
    assert_eq!(code, 3);
}

#[test]
fn buratti_subcommand() {
    let (code, out) = run_args(&["buratti", "8", "2", "2", "2", "2", "2", "2", "2"]);
    assert_eq!(code, 1);
    assert_eq!(
        out,
        "buratti n=8 condition=false violated_q=2\nfeasible=false\n"
    );

    let (code, out) = run_args(&["buratti", "8", "1", "1", "1", "1", "1", "1", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "buratti n=8 condition=true\nfeasible=true\n");

    let (code, out) = run_args(&[
        "buratti", "8", "1", "1", "1", "1", "1", "1", "4", "4", "--kind", "cycle",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "buratti n=8 kind=cycle feasible=true\n");
}

#[test]
fn subtour_subcommand() {
    let (code, out) = run_args(&["subtour", "8"]);
    assert_eq!(code, 1);
    assert_eq!(
        out,
        "subtour n=8 lambda=1/2 box=true feasible=true\n\
         circlet value=4 rhs=6 satisfied=false slack=-2\n"
    );

    let (code, out) = run_args(&["subtour", "8", "--lambda", "7/8"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "subtour n=8 lambda=7/8 box=true feasible=true\n\
         circlet value=7 rhs=6 satisfied=true slack=1\n"
    );

    let (code, out) = run_args(&["subtour", "8", "--lambda", "1/4"]);
    assert_eq!(code, 1);
    assert!(out.contains("box=false feasible=false"), "{out}");
    assert!(out.contains("witness: box"), "{out}");
}

#[test]
fn gap_subcommand() {
    let (code, out) = run_args(&["gap", "8"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "gap n=8 tour_opt=6 lp_value=4 ratio=3/2\n\
         euler cost=4 degrees_even=true connected=true\n"
    );

    let (code, _) = run_args(&["gap", "12"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_and_parse_errors() {
    let (code, _) = run_args(&["bogus"]);
    assert_eq!(code, 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(&dir, "bad.txt", "n 8\ntour 1 2 3 4 5 6 7 7\n");
    let (code, out) = run_args(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("line 2"), "{out}");

    let missing = dir.path().join("nope.txt");
    let (code, _) = run_args(&["check", missing.to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, _) = run_args(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["coeffs", "16"],
        vec!["verify", "8"],
        vec!["facet", "12"],
        vec!["el", "8"],
    ] {
        let a = run_args(&args);
        let b = run_args(&args);
        assert_eq!(a, b, "{args:?}");
    }
}
