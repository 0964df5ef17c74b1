use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use palg::encodings::{graph_isomorphism, make_n};
use palg::format::{parse_algebra, parse_dot};
use palg::suites::random_graph;
use palg::Homomorphism;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn palg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palg"))
        .args(args)
        .env_remove("PALG_SEED")
        .output()
        .expect("run palg")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_n_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("n.toml");
    let out = palg(&["build", "n", "-o", path_str(&file)]);
    assert!(out.status.success());
    let read = parse_algebra(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(read.size(), 6);
    let n = make_n();
    Homomorphism::new(&read, &n, (0..6).collect()).unwrap();
}

#[test]
fn build_is_deterministic() {
    let a = palg(&["build", "product", "bnalg1", "bnalg1"]);
    let b = palg(&["build", "product", "bnalg1", "bnalg1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(parse_algebra(&stdout(&a)).unwrap().size(), 9);
}

#[test]
fn eval_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("b1.toml");
    assert!(palg(&["build", "bnalg", "1", "-o", path_str(&file)]).status.success());
    let out = palg(&["eval", path_str(&file), "A x. x | x* = 1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "false\nwitness: x = e\n");
    let out = palg(&["eval", path_str(&file), "x <= x*", "--var", "x=0"]);
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn encode_and_recover_random_graph() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_graph(&mut rng, 5, 5);
    let dot = dir.path().join("g.dot");
    fs::write(&dot, palg::format::write_dot(&g)).unwrap();
    let alg = dir.path().join("g.toml");
    let out = palg(&["encode-graph", path_str(&dot), "-o", path_str(&alg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = palg(&["recover-graph", path_str(&alg)]);
    assert!(out.status.success());
    let back = parse_dot(&stdout(&out)).unwrap();
    assert!(graph_isomorphism(&g, &back).is_some());
    let out = palg(&["recover-graph", path_str(&alg), "--fo"]);
    let back = parse_dot(&stdout(&out)).unwrap();
    assert!(graph_isomorphism(&g, &back).is_some());
}

#[test]
fn encode_modes() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    fs::write(&dot, "graph { a -- b; c; }\n").unwrap();
    let out = palg(&["encode-graph", path_str(&dot), "--mode", "poset"]);
    assert!(stdout(&out).starts_with("size = 5\n"));
    let out = palg(&["encode-graph", path_str(&dot), "--mode", "embed"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 12);
    assert!(text.contains("{{},{a},{b}} -> (1,1,e,e)"));
    let out = palg(&["encode-graph", path_str(&dot), "--recover"]);
    assert!(out.status.success());
}

#[test]
fn check_suites_pass() {
    for args in [
        &["check", "lemma2"][..],
        &["check", "si", "--max-poset", "4"],
        &["check", "congruences-N"],
    ] {
        let out = palg(args);
        assert!(out.status.success(), "{args:?}");
        let text = stdout(&out);
        assert!(text.lines().last().unwrap().starts_with("overall PASS"));
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "size = 2\n").unwrap();
    assert_eq!(palg(&["dual", path_str(&bad)]).status.code(), Some(2));
    assert_eq!(palg(&["check", "nonsense"]).status.code(), Some(2));
    let out = palg(&["build", "product", "n", "n", "n", "n", "n", "--max-size", "100"]);
    assert_eq!(out.status.code(), Some(3));

    let n = dir.path().join("n.toml");
    let b1 = dir.path().join("b1.toml");
    assert!(palg(&["build", "n", "-o", path_str(&n)]).status.success());
    assert!(palg(&["build", "bnalg", "1", "-o", path_str(&b1)]).status.success());
    assert_eq!(palg(&["embed", path_str(&n), path_str(&b1)]).status.code(), Some(1));
    let out = palg(&["embed", path_str(&b1), path_str(&n)]);
    assert_eq!(stdout(&out), "0 -> 0\ne -> a\n1 -> 1\n");
}
