use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kmcds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmcds")).args(args).output().expect("binary runs")
}

fn arg(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

// 5-cycle plus the chord 0-2, unit weights except node 4
const SMALL: &str = r#"{
  "version": 1,
  "k": 1,
  "m": 1,
  "nodes": [
    {"id": 0, "weight": 1},
    {"id": 1, "weight": 1},
    {"id": 2, "weight": 1},
    {"id": 3, "weight": 1},
    {"id": 4, "weight": 5}
  ],
  "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 0], [0, 2]]
}
"#;

#[test]
fn oracle_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    fs::write(&inst, SMALL).unwrap();
    let oracle = kmcds(&["oracle", arg(&inst)]);
    assert_eq!(oracle.status.code(), Some(0));
    let result = stdout_json(&oracle);
    assert_eq!(result["weight"], 2);
    let opt = dir.path().join("opt.json");
    fs::write(&opt, &oracle.stdout).unwrap();

    let verify = kmcds(&["verify", arg(&inst), "--solution", arg(&opt)]);
    assert_eq!(verify.status.code(), Some(0));
    let outcome = stdout_json(&verify);
    assert_eq!(outcome["pass"], true);
    assert!(outcome["certificate"].is_object());
}

#[test]
fn missing_dominator_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    fs::write(&inst, SMALL).unwrap();
    // {0, 1} leaves node 3 with no neighbour in the set
    let verify = kmcds(&["verify", arg(&inst), "--nodes", "0,1"]);
    assert_eq!(verify.status.code(), Some(2));
    let outcome = stdout_json(&verify);
    assert_eq!(outcome["pass"], false);
    assert_eq!(outcome["domination_violators"], serde_json::json!([3]));
    assert!(outcome["certificate"].is_null());
}

#[test]
fn disconnected_set_reports_separator() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    fs::write(&inst, SMALL).unwrap();
    let verify = kmcds(&["verify", arg(&inst), "--nodes", "1,3"]);
    assert_eq!(verify.status.code(), Some(2));
    let outcome = stdout_json(&verify);
    assert_eq!(outcome["connectivity_failure"]["kind"], "separator");
}

#[test]
fn gen_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &[&str]); 3] = [
        (&["--kind", "gnp", "--n", "14", "--p", "0.6", "--k", "2", "--m", "3", "--seed", "4"], &["--variant", "general"]),
        (
            &["--kind", "unit-disk", "--n", "18", "--radius", "0.55", "--k", "2", "--m", "2", "--seed", "1"],
            &["--variant", "unit-disk"],
        ),
        (
            &["--kind", "unit-disk", "--n", "14", "--radius", "0.7", "--k", "3", "--m", "3", "--seed", "2"],
            &["--variant", "guess-root"],
        ),
    ];
    for (i, (gen_args, solve_args)) in cases.iter().enumerate() {
        let inst = dir.path().join(format!("inst{i}.json"));
        let report = dir.path().join(format!("report{i}.json"));
        let mut args = vec!["gen"];
        args.extend_from_slice(gen_args);
        args.extend(["-o", arg(&inst)]);
        assert_eq!(kmcds(&args).status.code(), Some(0));

        let mut args = vec!["solve", arg(&inst)];
        args.extend_from_slice(solve_args);
        args.extend(["-o", arg(&report)]);
        let solve = kmcds(&args);
        assert_eq!(solve.status.code(), Some(0), "{}", String::from_utf8_lossy(&solve.stderr));

        let verify = kmcds(&["verify", arg(&inst), "--solution", arg(&report)]);
        assert_eq!(verify.status.code(), Some(0), "case {i}");
        assert_eq!(stdout_json(&verify)["pass"], true);
    }
}

#[test]
fn solve_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let gen = kmcds(&["gen", "--kind", "unit-disk", "--n", "16", "--radius", "0.7", "--k", "2", "--seed", "9", "-o", arg(&inst)]);
    assert_eq!(gen.status.code(), Some(0));
    let first = kmcds(&["solve", arg(&inst), "--variant", "unit-disk"]);
    let second = kmcds(&["solve", arg(&inst), "--variant", "unit-disk"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn infeasible_instance_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("path.json");
    let text = SMALL
        .replace(r#"[[0, 1], [1, 2], [2, 3], [3, 4], [4, 0], [0, 2]]"#, r#"[[0, 1], [1, 2], [2, 3], [3, 4]]"#)
        .replace(r#""k": 1"#, r#""k": 2"#)
        .replace(r#""m": 1"#, r#""m": 2"#);
    fs::write(&inst, text).unwrap();
    let solve = kmcds(&["solve", arg(&inst)]);
    assert_eq!(solve.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&solve.stderr);
    assert!(stderr.contains("infeasible"), "{stderr}");
    assert_eq!(kmcds(&["oracle", arg(&inst)]).status.code(), Some(2));
}

#[test]
fn malformed_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    fs::write(&inst, "{\n  \"version\": 1,\n  \"k\": oops\n}\n").unwrap();
    let solve = kmcds(&["solve", arg(&inst)]);
    assert_eq!(solve.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&solve.stderr);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn bench_writes_sorted_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let json = dir.path().join("rows.json");
    let out = kmcds(&[
        "bench", "--sizes", "9", "--ks", "1,2", "--m-offsets", "0", "--seeds", "2", "--p", "0.7", "--oracle-cap", "9",
        "--csv", arg(&csv), "--json", arg(&json),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("instance_id,"));
    assert_eq!(lines.count(), 4);
    let rows: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let ids: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["instance_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for row in rows.as_array().unwrap() {
        if let Some(ratio) = row["ratio"].as_f64() {
            assert!(ratio >= 1.0);
        }
    }
}

#[test]
fn help_lists_flags() {
    let out = kmcds(&["solve", "--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for flag in ["--variant", "--backend", "--root-rule", "--no-prune", "--timings"] {
        assert!(text.contains(flag), "{flag} missing");
    }
}
