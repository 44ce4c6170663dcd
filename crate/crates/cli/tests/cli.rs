use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use canon_core::engine::CanonizingSet;
use canon_core::symmetry::Permutation;

fn canon(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canon"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn break_file(dir: &Path, args: &[&str]) -> PathBuf {
    let out = dir.join("set.break.json");
    let mut full = vec!["break"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = canon(dir, &full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn load(path: &Path) -> CanonizingSet {
    CanonizingSet::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn lists_bundled_classes() {
    let dir = tempfile::tempdir().unwrap();
    let o = canon(dir.path(), &["classes"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('A')).count(), 14);
    assert!(text.contains("semigroup"));
}

#[test]
fn constant_theory_break_admits_one_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = break_file(dir.path(), &["--class", "constant", "--n", "4", "--reduce"]);
    let cs = load(&path);
    assert!(cs.is_complete() && cs.reduced);
    let o = canon(dir.path(), &["count", "--break", path.to_str().unwrap(), "--counter", "builtin"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(",1,"), "{}", stdout(&o));
}

#[test]
fn magma_n2_needs_the_single_swap() {
    let dir = tempfile::tempdir().unwrap();
    let path = break_file(dir.path(), &["--class", "A8", "--n", "2", "--reduce", "--order", "row"]);
    assert_eq!(load(&path).perms, vec![Permutation::transposition(2, 0, 1)]);
}

#[test]
fn group_n4_diagonal_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = break_file(dir.path(), &["--class", "A3", "--n", "4", "--reduce"]);
    let o = canon(dir.path(), &["verify", "--break", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("pass"));
}

#[test]
fn semigroup_n3_counts_isomorphism_classes() {
    let dir = tempfile::tempdir().unwrap();
    let path = break_file(dir.path(), &["--class", "semigroup", "--n", "3", "--reduce"]);
    let o = canon(dir.path(), &["count", "--break", path.to_str().unwrap(), "--counter", "builtin"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(row.split(',').nth(5), Some("24"));
    assert!(dir.path().join("canon-out/report.csv").exists());
}

#[test]
fn truncated_break_fails_verification_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = break_file(dir.path(), &["--class", "A8", "--n", "3", "--reduce"]);
    let mut cs = load(&path);
    cs.perms.truncate(1);
    cs.witnesses.truncate(1);
    let cut = dir.path().join("cut.break.json");
    std::fs::write(&cut, cs.to_json()).unwrap();
    let o = canon(dir.path(), &["verify", "--break", cut.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("fail"));
    assert!(text.contains("decreased by"), "{text}");
}

#[test]
fn verify_refuses_oversized_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.break.json");
    let args = ["break", "--class", "constant", "--n", "9", "--max-iterations", "0", "--out", path.to_str().unwrap()];
    assert_eq!(canon(dir.path(), &args).status.code(), Some(2));
    std::fs::write(&path, std::fs::read_to_string(&path).unwrap().replace("\"incomplete\"", "\"complete\"")).unwrap();
    let o = canon(dir.path(), &["verify", "--break", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(canon(dir.path(), &["break", "--n", "2"]).status.code(), Some(3));
    assert_eq!(canon(dir.path(), &["break", "--class", "nosuch", "--n", "2"]).status.code(), Some(3));
}

fn graph_summary(dir: &Path, text: &str) -> String {
    let file = dir.join("g.edges");
    std::fs::write(&file, text).unwrap();
    let o = canon(dir, &["graph", file.to_str().unwrap()]);
    assert!(o.status.success());
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn graph_theory_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let tri = graph_summary(dir.path(), "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    assert!(tri.contains("edge_disequations=3 non_edge_equations=0"), "{tri}");
    let path = graph_summary(dir.path(), "p edge 3 2\ne 1 2\ne 2 3\n");
    assert!(path.contains("edge_disequations=2 non_edge_equations=1"), "{path}");
    let single = graph_summary(dir.path(), "p edge 2 1\ne 1 2\n");
    assert!(single.contains("constants=3"), "{single}");
}

#[test]
fn dimacs_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = canon(
            dir.path(),
            &["--seed", "7", "emit-dimacs", "--class", "A14", "--n", "3", "--out", out.to_str().unwrap()],
        );
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("a.cnf");
    assert_eq!(a, run("b.cnf"));
    assert!(String::from_utf8_lossy(&a).contains("c p show "));
}
