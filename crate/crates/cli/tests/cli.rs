use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use chaosembed_cli::covfile;
use chaosembed_core::{Address, Claim, CyclicOdometer, PathId, Tower};
use proptest::prelude::*;

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_chaosembed")).args(args).output().expect("binary runs");
    Run {
        status: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn claims(stdout: &str) -> Vec<(String, String)> {
    stdout
        .lines()
        .filter_map(|l| l.strip_prefix("CLAIM "))
        .map(|l| {
            let w: Vec<&str> = l.split_whitespace().collect();
            (w[0].to_string(), w[4].to_string())
        })
        .collect()
}

fn write_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_generators() {
    let r = run(&["validate", "--gen", "fixed-point", "--levels", "4"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let r = run(&["validate", "--gen", "odometer", "--levels", "6"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.contains("bidirectional=true"));
    assert!(r.stdout.contains("CHAIN TRANSITIVE: yes"));
}

#[test]
fn malformed_edge_line_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_file(dir.path(), "bad.cov", "covering bad\nlevel 1\nvertices a b\nedges\na b c\nend\n");
    let r = run(&["validate", "--file", &f]);
    assert_eq!(r.status, 2);
    assert!(r.stderr.contains("line 5"), "{}", r.stderr);
}

#[test]
fn reducible_file_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_file(dir.path(), "two.cov", "covering two\nlevel 1\nvertices a b\nedges\na a\na b\nb b\nend\n");
    let r = run(&["validate", "--file", &f]);
    assert_eq!(r.status, 1);
    assert!(r.stdout.contains("CHAIN TRANSITIVE: no"));
    let r = run(&["build", "--file", &f, "--levels", "1"]);
    assert_eq!(r.status, 1, "{}", r.stderr);
}

#[test]
fn build_prints_length_table() {
    let r = run(&["build", "--gen", "fixed-point", "--levels", "3"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.lines().any(|l| l == "l1: 1 9 49"), "{}", r.stdout);
    assert_eq!(claims(&r.stdout), [("well-defined".to_string(), "pass".to_string())]);
}

#[test]
fn build_writes_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = run(&["build", "--gen", "odometer", "--levels", "3", "--dot", out.to_str().unwrap()]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    for n in 0..=3 {
        assert!(out.join(format!("level_{n}.dot")).exists());
    }
    let dot = fs::read_to_string(out.join("level_3.dot")).unwrap();
    assert!(dot.starts_with("digraph level_3 {"));
    let boxes = dot.lines().filter(|l| l.contains("[shape=box]")).count();
    assert_eq!(boxes, 8);
    assert!(dot.lines().filter(|l| l.contains("[shape=box]")).all(|l| l.trim_start().starts_with("\"F:")));
    assert!(dot.contains("\"H\" [shape=doublecircle];"));
}

#[test]
fn build_over_budget_exits_three() {
    let r = run(&["build", "--gen", "fixed-point", "--levels", "99"]);
    assert_eq!(r.status, 3);
    assert!(r.stderr.contains("budget"));
}

#[test]
fn verify_property2_witnesses() {
    let r = run(&["verify", "--gen", "fixed-point", "--claim", "property2", "--m", "2", "--n", "1"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.contains("WITNESS t_left=-3\n"));
    assert!(r.stdout.contains("WITNESS t_right=3\n"));
}

#[test]
fn verify_triple_cover() {
    let r = run(&["verify", "--gen", "fixed-point", "--claim", "triple-cover", "--k", "1", "--mode", "relaxed"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.contains("WITNESS count=3\n"));
}

#[test]
fn verify_all_runs_the_suite() {
    for generator in ["odometer", "fixed-point"] {
        let r = run(&["verify", "--gen", generator, "--claim", "all", "--mode", "relaxed"]);
        assert_eq!(r.status, 0, "{}", r.stderr);
        let got = claims(&r.stdout);
        let want: Vec<(String, String)> = Claim::SUITE.iter().map(|c| (c.id().to_string(), "pass".to_string())).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn verify_all_fails_when_one_claim_fails() {
    // The relaxed schedule is too shallow for recurrence at the second stage.
    let r = run(&["verify", "--gen", "fixed-point", "--claim", "all", "--k", "2"]);
    assert_eq!(r.status, 1);
    assert_eq!(claims(&r.stdout).len(), Claim::SUITE.len());
    assert!(claims(&r.stdout).iter().any(|(c, v)| c == "recurrent" && v == "fail"));
}

#[test]
fn report_text_is_deterministic() {
    let args = ["verify", "--gen", "odometer", "--claim", "proximal", "--samples", "5", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    assert!(!run(&args).stdout.contains("cost"));
}

#[test]
fn strict_mode_on_a_shallow_file_exceeds_depth() {
    let dir = tempfile::tempdir().unwrap();
    let seq = CyclicOdometer::binary().materialize(2).unwrap();
    let f = write_file(dir.path(), "odo.cov", &covfile::write(&seq));
    let r = run(&["verify", "--file", &f, "--claim", "triple-cover", "--mode", "strict"]);
    assert_eq!(r.status, 3, "{}", r.stderr);
    let r = run(&["verify", "--file", &f, "--claim", "property2", "--m", "2", "--n", "1"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
}

#[test]
fn strict_precondition_is_a_usage_error() {
    let r = run(&["verify", "--gen", "fixed-point", "--claim", "property1", "--m", "2", "--n", "1", "--mode", "strict"]);
    assert_eq!(r.status, 2);
}

#[test]
fn unknown_claim_is_a_usage_error() {
    assert_eq!(run(&["verify", "--gen", "odometer", "--claim", "everything"]).status, 2);
    assert_eq!(run(&["verify", "--claim", "all"]).status, 2);
}

#[test]
fn schedule_output() {
    let r = run(&["schedule", "--gen", "fixed-point", "--k", "2"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.lines().any(|l| l == "strict (1,3) (4,254)"), "{}", r.stdout);
    assert!(r.stdout.contains("k=2 n=4 m=254 l1=249"));
    assert!(r.stdout.lines().any(|l| l == "relaxed (1,3) (4,5)"));
    let r = run(&["schedule", "--gen", "fixed-point", "--k", "1"]);
    assert!(r.stdout.contains("k=1 n=1 m=3 l1=1"));
    let r = run(&["schedule", "--gen", "fixed-point", "--k", "3"]);
    assert_eq!(r.status, 0);
    let l1_255 = (num_bigint::BigUint::from(5u32).pow(254) * 2u32 - 1u32).to_string();
    assert!(r.stdout.contains(&format!("k=3 n=255 m={}", l1_255.clone())[..20]));
    assert!(r.stdout.contains(&format!("l1={l1_255}\n")));
}

#[test]
fn simulate_fixed_point() {
    let r = run(&["simulate", "--gen", "fixed-point", "--steps", "5", "--depth", "6"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    for (s, l) in lines.iter().enumerate() {
        let hubs = vec!["H"; 7 - s].join(", ");
        assert_eq!(*l, format!("t={s} depth={} ({hubs})", 6 - s));
    }
}

#[test]
fn simulate_depth_boundary() {
    let r = run(&["simulate", "--gen", "odometer", "--steps", "3", "--depth", "3"]);
    assert_eq!(r.status, 0);
    assert!(r.stdout.lines().last().unwrap().starts_with("t=3 depth=0 "));
    assert_eq!(run(&["simulate", "--gen", "odometer", "--steps", "4", "--depth", "3"]).status, 2);
    assert_eq!(run(&["simulate", "--gen", "odometer", "--thread", "q7", "--steps", "1", "--depth", "3"]).status, 2);
}

/// On the interior of `p_{1,D}` the orbit just advances the index.
#[test]
fn simulate_path_interior_advances() {
    let (d, j) = (4usize, 100u32);
    let r = run(&["simulate", "--gen", "fixed-point", "--thread", &format!("p1:{j}"), "--steps", "3", "--depth", "4"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let t = Tower::new(Arc::new(CyclicOdometer::fixed_point()));
    for (s, line) in r.stdout.lines().enumerate() {
        let level = d - s;
        let top = t.decode(&Address::on_path(d, PathId::First, j + s as u32), level).unwrap();
        assert!(line.ends_with(&format!(", {top})")), "{line} vs {top}");
    }
}

#[test]
fn written_covering_files_validate() {
    let dir = tempfile::tempdir().unwrap();
    let seq = CyclicOdometer::new(3).materialize(3).unwrap();
    let f = write_file(dir.path(), "tri.cov", &covfile::write(&seq));
    let r = run(&["validate", "--file", &f]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let r = run(&["build", "--file", &f, "--levels", "3"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn covering_files_round_trip(base in 1u32..5, depth in 1usize..4, hint in any::<bool>()) {
        let mut seq = CyclicOdometer::new(base).materialize(depth).unwrap();
        if hint {
            seq = seq.with_anchor_hint(depth, "0".into(), "0".into()).unwrap();
        }
        let text = covfile::write(&seq);
        let back = covfile::parse(&text).unwrap();
        prop_assert_eq!(&back, &seq);
        prop_assert_eq!(covfile::write(&back), text);
    }
}
