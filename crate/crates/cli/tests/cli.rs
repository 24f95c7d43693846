use std::path::Path;
use std::process::{Command, Output};

use cantorloop::geom::Corner;
use cantorloop::pattern::{pattern_closure, validate_tree, PatternFile, SearchOptions};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cantorloop"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn pattern_writes_a_clean_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pattern.json");
    let out = run(&["pattern", "--depth", "3", "--out", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["digest"]["violations"], 0);
    assert_eq!(v["digest"]["classes_found"].as_array().unwrap().len(), 3);
    let check = run(&["pattern", "--check", path_str(&file)]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["ok"], true);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["pattern", "--depth", "13"][..],
        &["coverage", "--grid", "244"],
        &["rectifiable", "--curve", "spiral"],
        &["rectifiable", "--eps", "0,0.1"],
        &["rectifiable", "--h", "0.01"],
        &["sf", "--k", "0"],
        &["frobnicate"],
        &[],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_artifacts_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let absent = dir.path().join("absent.json");
    assert_eq!(run(&["generate", "--pattern", path_str(&absent)]).status.code(), Some(3));
    assert_eq!(run(&["pattern", "--check", path_str(&absent)]).status.code(), Some(3));
    let curve = format!("file:{}", path_str(&dir.path().join("absent.txt")));
    assert_eq!(run(&["sf", "--curve", &curve]).status.code(), Some(3));
    let deep = dir.path().join("no/such/dir/out.json");
    assert_eq!(run(&["coverage", "--depth", "2", "--grid", "2", "--out", path_str(&deep)]).status.code(), Some(3));
}

#[test]
fn check_rejects_corrupted_files() {
    let dir = tempfile::tempdir().unwrap();
    let table = pattern_closure(SearchOptions::default()).unwrap();
    let good = PatternFile::new(&table, &validate_tree(&table, 2)).to_json();

    // a hand edit: the stored links and hash no longer match the selectors
    let mut v: Value = serde_json::from_str(&good).unwrap();
    v["root"]["pattern"]["exit"][0] = serde_json::json!([0, 1, 1]);
    let edited = dir.path().join("edited.json");
    std::fs::write(&edited, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["pattern", "--check", path_str(&edited)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);

    // a consistent file whose geometry is wrong: only validation catches it
    let mut root = table.root().clone();
    root.exit[0] = Corner::from_index(7 - root.exit[0].index()).unwrap();
    let bad = table.clone().with_root(root);
    let file = dir.path().join("bad.json");
    std::fs::write(&file, PatternFile::new(&bad, &validate_tree(&table, 2)).to_json()).unwrap();
    let out = run(&["pattern", "--check", path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
    let issues = json(&out)["issues"].as_array().unwrap().clone();
    assert!(issues.iter().any(|i| i["clause"] == "link_avoids_cubes"), "{issues:?}");

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(run(&["pattern", "--check", path_str(&garbage)]).status.code(), Some(1));
    assert_eq!(run(&["generate", "--pattern", path_str(&edited)]).status.code(), Some(1));
}

#[test]
fn generate_formats() {
    let obj = run(&["generate", "--depth", "1", "--format", "obj"]);
    assert_eq!(obj.status.code(), Some(0));
    let text = String::from_utf8(obj.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 16);
    assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 1);

    let csv = run(&["generate", "--depth", "0", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 3);

    let j = run(&["generate", "--depth", "2", "--format", "json"]);
    let v = json(&j);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 128);
    assert_eq!(v["stats"]["vertices"], 128);
    assert_eq!(v["vertices"][0]["exact"][0], "1/3");
}

#[test]
fn generate_from_a_stored_table_matches_search() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    assert_eq!(run(&["pattern", "--depth", "2", "--out", path_str(&file)]).status.code(), Some(0));
    let a = run(&["generate", "--depth", "3", "--pattern", path_str(&file)]);
    let b = run(&["generate", "--depth", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn coverage_and_reports() {
    let out = run(&["coverage", "--depth", "4", "--grid", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failures"], 0);
    assert!(v["max_deviation"].as_f64().unwrap() <= 0.0428);

    let out = run(&["rectifiable", "--curve", "square", "--eps", "0.3", "--samples", "400"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["partitions"][0]["count_bound_holds"], true);

    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    std::fs::write(&pts, "0 0 0\n1 0 0\n1 1 0\n").unwrap();
    let curve = format!("file:{}", path_str(&pts));
    let out = run(&["sf", "--curve", &curve, "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["sf", "--curve", "l-polyline", "--k", "2", "--seed", "5", "--samples", "200"]);
    let b = run(&["sf", "--curve", "l-polyline", "--k", "2", "--seed", "5", "--samples", "200"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sf", "--curve", "l-polyline", "--k", "2", "--seed", "6", "--samples", "200"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn failed_checks_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("r.json");
    // voxels larger than the curve hold every midpoint in one cell, so the
    // volume is h³ and the linear fit drops below R² = 0.9
    let out = run(&[
        "rectifiable",
        "--curve",
        "l-polyline",
        "--h",
        "5,4,3,2,1",
        "--samples",
        "50",
        "--out",
        path_str(&out_file),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_file.exists());
    assert_eq!(json(&out)["sweep_linear"], false);
}
