//! End-to-end tests of the `powersum` binary: exit codes, file formats,
//! determinism across thread counts, manifests, and the sieve cache.

use std::path::Path;
use std::process::{Command, Output};

fn powersum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powersum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn delta_prints_value() {
    let out = powersum(&["delta", "12"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), "3");

    let out = powersum(&["delta", "12", "--u", "0"]);
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn delta_uses_segment_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = powersum(&[
        "delta",
        "9699690",
        "--cache-dir",
        cache.to_str().unwrap(),
        "--budget",
        "small",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    // second run hits the cache and agrees
    let again = powersum(&[
        "delta",
        "9699690",
        "--cache-dir",
        cache.to_str().unwrap(),
        "--budget",
        "small",
    ]);
    assert_eq!(stdout(&again), stdout(&out));
}

#[test]
fn admissible_exit_codes_and_reasons() {
    let out = powersum(&["admissible", "--l", "2,3,6,6"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("2/3"), "{}", stdout(&out));

    let out = powersum(&["admissible", "--l", "2,3,8,24"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("admissible"));

    // malformed exponent tuple is a usage error
    let out = powersum(&["admissible", "--l", "2,4,3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = powersum(&["frobnicate"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn budget_rejection_uses_exit_three() {
    let out = powersum(&["means", "--x", "3000000", "--budget", "small"]);
    assert_eq!(exit_code(&out), 3, "{out:?}");
}

#[test]
fn means_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = powersum(&[
        "means",
        "--grid",
        "10:1000:log",
        "--out",
        csv.to_str().unwrap(),
        "--budget",
        "small",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,S,frakS"));
    assert!(lines.next().unwrap().starts_with("10,15,"));
    let manifest_path = dir.path().join("s.csv.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["outputs"][0], csv.to_str().unwrap());
    assert!(manifest["input_hashes"]["argv"].as_str().unwrap().len() == 64);
}

#[test]
fn vcount_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let out = powersum(&[
            "vcount",
            "--c",
            "1,1,1",
            "--l",
            "2,4,4",
            "--x",
            "100000",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "{out:?}");
        std::fs::read(&path).unwrap()
    };
    let single = run("v1.csv", "1");
    let multi = run("v4.csv", "4");
    assert_eq!(single, multi);
    assert!(String::from_utf8_lossy(&single).starts_with("x,V0,V1,V2,V2eq,V2neq"));
}

#[test]
fn vcount_desk_record() {
    let out = powersum(&["vcount", "--c", "1,1", "--l", "2,2", "--x", "8"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("V0 = 3") && text.contains("V2 = 6") && text.contains("V2neq = 2"),
        "{text}"
    );
}

#[test]
fn growth_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let out = powersum(&[
        "growth",
        "--c",
        "1,1",
        "--l",
        "2,2",
        "--grid",
        "10:1000:log",
        "--out",
        csv.to_str().unwrap(),
        "--budget",
        "small",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,V0,V1,V2,V2neq,frakS,r1,r2,r3\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn rho_and_rhosharp_values() {
    let out = powersum(&["rho", "--poly", "x1 x2", "--s", "5"]);
    assert!(stdout(&out).contains("rho+ = 9"), "{}", stdout(&out));

    let out = powersum(&["rho", "--r", "x1", "--r", "x1 + 1", "--s", "2,3"]);
    assert!(stdout(&out).contains("rho+ = 1"));

    let out = powersum(&["rhosharp", "--r", "x1", "--s", "2", "--check-scan"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("rho# = 1  K = 4"));
}

#[test]
fn esum_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e.csv");
    let out = powersum(&[
        "esum",
        "--r",
        "x1",
        "--grid",
        "1:8:lin:1",
        "--out",
        csv.to_str().unwrap(),
        "--budget",
        "small",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("v,E_R\n"));
    assert!(text.contains("\n2,1.5\n"), "{text}");
    // values must be nondecreasing down the grid
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn sift_odd_count() {
    let out = powersum(&[
        "sift", "--r", "x1", "--a", "1", "--x", "10", "--y", "10", "--z", "2",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("count = 5"), "{}", stdout(&out));
}

#[test]
fn verify_small_suite_passes_and_writes_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("report.jsonl");
    let out = powersum(&[
        "verify",
        "--suite",
        "meanvalue",
        "--budget",
        "small",
        "--out",
        jsonl.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = std::fs::read_to_string(&jsonl).unwrap();
    for line in text.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["check", "instance", "lhs", "rhs", "ratio", "pass"] {
            assert!(record.get(key).is_some(), "missing {key} in {line}");
        }
        assert_eq!(record["pass"], true);
    }
    assert!(text.lines().count() >= 3);
}

fn manifest_exists_for(path: &Path) -> bool {
    Path::new(&format!("{}.manifest.json", path.display())).exists()
}

#[test]
fn every_file_output_gets_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    powersum(&[
        "vcount", "--c", "1,1", "--l", "2,2", "--x", "100",
        "--out", csv.to_str().unwrap(),
    ]);
    assert!(manifest_exists_for(&csv));
}
