use std::fs;
use std::path::Path;

use qkernel::cli::run;
use qkernel::format::parse;
use qkernel::harness::Report;
use tempfile::TempDir;

fn qk(args: &[&str]) -> i32 {
    run(std::iter::once("qk").chain(args.iter().copied()))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn solve_writes_verified_witness() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c4.txt", "4\n0 1\n1 2\n2 3\n3 0\n");
    let out = dir.path().join("out.json");
    assert_eq!(qk(&["solve", "--alg", "min", "-i", &input, "-o", out.to_str().unwrap(), "--format", "json"]), 0);
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["objective"], 2);
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c3 = write(&dir, "c3.txt", "3\n0 1\n1 2\n2 0\n");
    let out = dir.path().join("check.txt");
    let o = out.to_str().unwrap();
    assert_eq!(qk(&["check", "-i", &c3, "--conjecture", "large", "--alpha", "1/3", "-o", o]), 0);
    assert_eq!(qk(&["check", "-i", &c3, "--conjecture", "large", "--alpha", "1/1", "-o", o]), 2);
    assert!(read(&out).contains("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qk(&["bogus"]), 1);
    assert_eq!(qk(&["check", "--conjecture", "large", "--alpha", "1"]), 1);
    assert_eq!(qk(&["check", "-i", "/nonexistent/qk-input", "--conjecture", "large", "--alpha", "1/2"]), 1);
    assert_eq!(qk(&["--help"]), 0);
}

#[test]
fn sharded_sweeps_merge_into_full_report() {
    let dir = TempDir::new().unwrap();
    let path = |name: &str| dir.path().join(name);
    let args = ["sweep", "--n", "3", "--conjecture", "large", "--alpha", "1/1", "--format", "json"];
    let mut merged: Option<Report> = None;
    let mut codes = Vec::new();
    for shard in 0..3 {
        let out = path(&format!("s{shard}.json"));
        let shard = shard.to_string();
        let mut a = args.to_vec();
        a.extend(["--shards", "3", "--shard", &shard, "--keep", "all", "-o", out.to_str().unwrap()]);
        codes.push(qk(&a));
        let r = Report::from_json(&read(&out)).unwrap();
        merged = Some(match merged {
            Some(m) => m.merge(r).unwrap(),
            None => r,
        });
    }
    assert!(codes.iter().all(|&c| c == 0 || c == 2) && codes.contains(&2));
    let full = path("full.json");
    let mut a = args.to_vec();
    a.extend(["--keep", "all", "-o", full.to_str().unwrap()]);
    assert_eq!(qk(&a), 2);
    let full = Report::from_json(&read(&full)).unwrap();
    let merged = merged.unwrap();
    assert_eq!(merged.exit_code(), 2);
    assert_eq!(merged.aggregates, full.aggregates);
    assert_eq!(merged.records, full.records);
}

#[test]
fn gen_output_parses() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    assert_eq!(qk(&["gen", "--family", "circulant:5", "-o", out.to_str().unwrap()]), 0);
    let d = parse(&read(&out)).unwrap();
    assert_eq!((d.n(), d.arc_count()), (5, 10));
}
