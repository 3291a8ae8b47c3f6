use std::path::Path;
use std::process::{Command, Output};

fn gso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gso")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generated_instance_solves_and_matches_es() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("ccmin.json");
    let out = gso(&["gen", "instance", "--kind", "ccmin", "--n", "8", "--seed", "4", "--out", path(&inst)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = gso(&["solve", path(&inst), "--es", "--no-time"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("exact"), "{}", text);
    assert!(text.contains("value ="), "{}", text);
}

#[test]
fn csv_report_has_the_report_columns() {
    let out = gso(&["solve", "--kind", "submod-min", "--n", "6", "--seed", "1", "--csv", "-", "--no-time"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header = text.lines().find(|l| l.starts_with("instance,")).unwrap();
    for col in ["time_s", "end_gap", "nodes", "cuts", "cuts_EPI"] {
        assert!(header.split(',').any(|c| c == col), "{}", header);
    }
}

#[test]
fn verify_exit_code_follows_the_property() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("s.json");
    gso(&["gen", "instance", "--kind", "submod-min", "--n", "5", "--seed", "2", "--out", path(&inst)]);
    assert_eq!(gso(&["verify", path(&inst)]).status.code(), Some(0));
    let cut = r#"{
  "schema_version": 1,
  "kind": "submod-min",
  "oracle": {"source": "inline", "function": {"type": "graph-cut", "n": 2, "arcs": [[0, 1, 1.0]]}}
}"#;
    let g = dir.path().join("cut.json");
    std::fs::write(&g, cut).unwrap();
    assert_eq!(gso(&["verify", path(&g)]).status.code(), Some(0));
    assert_eq!(gso(&["verify", path(&g), "--property", "monotone"]).status.code(), Some(1));
}

#[test]
fn mir_cut_from_the_command_line() {
    let out = gso(&["cuts", "--family", "MIR", "--upper", "2.4,3", "--arcs", "1>2", "--integer", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("MIR"), "{}", text);
}

#[test]
fn unreadable_instances_become_error_rows() {
    let out = gso(&["solve", "/definitely/not/here.json", "--no-time"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("error: /definitely/not/here.json"), "{}", text);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(gso(&["cuts", "--family", "BOGUS"]).status.code(), Some(2));
    assert_eq!(gso(&["cuts", "--family", "EPI"]).status.code(), Some(2));
    assert_eq!(gso(&["bench", "--builtin", "nope"]).status.code(), Some(2));
}

#[test]
fn time_limited_bench_is_not_a_success() {
    let out = gso(&["bench", "--builtin", "table2", "--count", "1", "--no-es", "--node-limit", "1", "--no-time"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}
