use std::path::Path;
use std::process::{Command, Output};

use seqodc::aiger::{self, Format};
use seqodc::fixtures;

fn seqodc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqodc"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture_files(dir: &Path) {
    for (name, aig) in fixtures::all() {
        aiger::write(&aig, dir.join(format!("{name}.aag")), Format::Ascii).unwrap();
    }
    aiger::write(&fixtures::toggle(true), dir.join("toggle1.aag"), Format::Ascii).unwrap();
}

#[test]
fn opt_writes_result_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let o = seqodc(&["opt", "m1.aag", "-k", "1", "-o", "out.aag", "--stats-json", "s.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert!(stats["edits_applied"].as_u64().unwrap() >= 1);
    assert!(stats["nodes_after"].as_u64() < stats["nodes_before"].as_u64());
    assert!(stats["reduction_percent"].as_f64().unwrap() < 0.0);
    let out = aiger::read(dir.path().join("out.aag")).unwrap();
    assert_eq!(out.num_ands() as u64, stats["nodes_after"].as_u64().unwrap());
}

#[test]
fn opt_echoes_default_limits() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let o = seqodc(&["opt", "m2.aag"], dir.path());
    assert_eq!(code(&o), 0);
    let log = String::from_utf8_lossy(&o.stderr);
    assert!(log.contains("window-nodes=50000 tfo-levels=16 divisors=100"), "{log}");
}

#[test]
fn induction_depth_flag() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let edits = |k: &str| {
        let o = seqodc(&["opt", "m2.aag", "-k", k, "--stats-json", "s.json"], dir.path());
        assert_eq!(code(&o), 0);
        let s: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
        s["edits_applied"].as_u64().unwrap()
    };
    assert_eq!(edits("1"), 0);
    assert!(edits("2") >= 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let o = seqodc(
        &["gen", "--inputs", "6", "--latches", "10", "--ands", "300", "--locality", "24", "--seed", "4", "-o", "d.aig"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    for out in ["a.aig", "b.aig"] {
        let o = seqodc(&["opt", "d.aig", "--seed", "7", "-o", out], dir.path());
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(dir.path().join("a.aig")).unwrap();
    let b = std::fs::read(dir.path().join("b.aig")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn opt_verify_passes_and_binary_output() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let o = seqodc(&["opt", "m1b.aag", "--verify", "20", "-o", "out.bin", "--format", "binary"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verify: equivalent up to depth 20"));
    let bytes = std::fs::read(dir.path().join("out.bin")).unwrap();
    assert!(bytes.starts_with(b"aig "));
}

#[test]
fn dump_cnf_writes_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let o = seqodc(&["opt", "m1.aag", "--dump-cnf", "cnf"], dir.path());
    assert_eq!(code(&o), 0);
    let files: Vec<_> = std::fs::read_dir(dir.path().join("cnf")).unwrap().collect();
    assert!(!files.is_empty());
    let first = std::fs::read_to_string(files[0].as_ref().unwrap().path()).unwrap();
    assert!(first.lines().any(|l| l.starts_with("p cnf ")));
}

#[test]
fn equiv_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let o = seqodc(&["equiv", "m1.aag", "m1.aag", "--depth", "10"], dir.path());
    assert_eq!(code(&o), 0);
    let o = seqodc(&["opt", "m1.aag", "-o", "post.aag"], dir.path());
    assert_eq!(code(&o), 0);
    for extra in [&[][..], &["--exhaustive"][..]] {
        let mut args = vec!["equiv", "m1.aag", "post.aag"];
        args.extend_from_slice(extra);
        assert_eq!(code(&seqodc(&args, dir.path())), 0);
    }
    let o = seqodc(&["equiv", "toggle.aag", "toggle1.aag", "--depth", "4"], dir.path());
    assert_eq!(code(&o), 2);
    let text = stdout(&o);
    assert!(text.contains("0  | 0 | 1  <- mismatch"), "{text}");
    let o = seqodc(&["equiv", "m1.aag", "m3.aag"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn stats_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    let o = seqodc(&["stats", "toggle.aag"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("and = 0  lev = 0  ff = 1"));
    let o = seqodc(&["stats", "m1.aag", "--json"], dir.path());
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["latches"], 2);
    aiger::write(&seqodc::Aig::new(), dir.path().join("empty.aag"), Format::Ascii).unwrap();
    let o = seqodc(&["stats", "empty.aag", "--json"], dir.path());
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["inputs", "outputs", "ands", "levels", "latches"] {
        assert_eq!(s[key], 0);
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fixture_files(dir.path());
    assert_eq!(code(&seqodc(&["opt", "m1.aag", "--bogus"], dir.path())), 1);
    assert_eq!(code(&seqodc(&["opt", "m1.aag", "-k", "x"], dir.path())), 1);
    assert_eq!(code(&seqodc(&["opt", "missing.aag"], dir.path())), 1);
    assert_eq!(code(&seqodc(&["opt", "m1.aag", "-k", "0"], dir.path())), 1);
    assert_eq!(code(&seqodc(&[], dir.path())), 1);
    std::fs::write(dir.path().join("bad.aag"), "aag 1 2 3\n").unwrap();
    assert_eq!(code(&seqodc(&["stats", "bad.aag"], dir.path())), 1);
    assert_eq!(code(&seqodc(&["--help"], dir.path())), 0);
    assert_eq!(code(&seqodc(&["--version"], dir.path())), 0);
}

#[test]
fn gen_writes_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["toggle", "toggle1", "m1", "m1b", "m2", "m3"] {
        let o = seqodc(&["gen", "--fixture", name, "-o", &format!("{name}.aag")], dir.path());
        assert_eq!(code(&o), 0, "{name}");
    }
    assert_eq!(code(&seqodc(&["gen", "--fixture", "nope", "-o", "x.aag"], dir.path())), 1);
    let m1 = aiger::read(dir.path().join("m1.aag")).unwrap();
    assert_eq!(m1, aiger::parse(&aiger::to_bytes(&fixtures::m1().aig, Format::Ascii)).unwrap());
}
