use std::path::PathBuf;
use std::process::Command;

use volrig_cli::run_command;

const TETRA: &str = "4 3\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n";

fn tmp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("volrig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String) {
    run_command(std::iter::once("volrig").chain(args.iter().copied()))
}

fn data_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/surfaces")
        .join(name)
}

#[test]
fn rigid_tetrahedron() {
    let t = tmp("tetra.cx", TETRA);
    let (code, out) = run(&[
        "rigid",
        "--in",
        t.to_str().unwrap(),
        "--trials",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("rank 3 [trials=3 prime=p0]"));
    assert!(out.contains("target 3"));
    assert!(out.contains("RIGID [trials=3"));
}

#[test]
fn not_rigid_exits_one() {
    let t = tmp("single.cx", "5 3\n1 2 3\n");
    let (code, out) = run(&["rigid", "--in", t.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("NOT RIGID"));
    let (code, _) = run(&["rank", "--in", t.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn exact_cross_check() {
    let t = tmp("tetra-exact.cx", TETRA);
    let (code, out) = run(&["rank", "--in", t.to_str().unwrap(), "--exact"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("exact rank 3 over Q, agrees yes"));
}

#[test]
fn counterexample_command() {
    let out_path = tmp("cx.cx", "");
    let (code, out) = run(&[
        "counterexample",
        "--d",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("TIGHT(2,5) yes"));
    assert!(out.contains("RIGID no"));
    assert!(out.contains("SIGMA0 no"));
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("7 3\n"));
    assert_eq!(written.lines().count(), 10);
    let (code, out) = run(&["tight", "--in", out_path.to_str().unwrap()]);
    assert_eq!((code, out.contains("TIGHT(2,5) yes")), (0, true));
    let (code, _) = run(&["sigma0", "--in", out_path.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn shift_lists_sigma0() {
    let t = tmp("tetra-shift.cx", TETRA);
    let (code, out) = run(&[
        "shift",
        "--in",
        t.to_str().unwrap(),
        "--order",
        "p",
        "--level",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "{1,3,4}"));
    let (_, lex) = run(&["shift", "--in", t.to_str().unwrap(), "--order", "lex"]);
    assert!(lex.contains("level 3 order lex: 4 faces"));
}

#[test]
fn psi_command() {
    let (code, out) = run(&["psi", "--d", "3", "--n", "6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("rank 7 (expected 7)"));
    assert!(out.contains("kernel 5 (expected 5)"));
}

#[test]
fn sparsity_commands() {
    let k4 = tmp("k4.cx", "4 2\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let (code, out) = run(&[
        "sparsity",
        "--in",
        k4.to_str().unwrap(),
        "--a",
        "2",
        "--b",
        "3",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("witness {1,2,3,4} spans 6"));
    let one = tmp("one.cx", "5 3\n1 2 3\n");
    let (code, out) = run(&["complete-basis", "--in", one.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("facets 5 target 5 TIGHT yes"));
}

#[test]
fn contract_and_homology() {
    let oct = tmp(
        "oct.cx",
        "6 3\n1 3 5\n1 3 6\n1 4 5\n1 4 6\n2 3 5\n2 3 6\n2 4 5\n2 4 6\n",
    );
    let (code, out) = run(&["contract", "--in", oct.to_str().unwrap(), "--edge", "1,3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("vertices 5 facets 6"));
    let (_, out) = run(&["contract", "--in", oct.to_str().unwrap()]);
    assert!(out.contains("vertices 4 facets 4"));
    let (code, _) = run(&["contract", "--in", oct.to_str().unwrap(), "--edge", "1,2"]);
    assert_eq!(code, 2);
    let (code, out) = run(&["homology", "--in", oct.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("cycle space dimension 1 over Q"));
    assert!(out.contains("minimal cycle over Q yes"));
}

#[test]
fn boundary_identity_command() {
    let k = tmp("bid.cx", "6 3\n1 2 3\n1 2 4\n2 5 6\n3 4 6\n");
    let (code, out) = run(&[
        "boundary-id",
        "--in",
        k.to_str().unwrap(),
        "--samples",
        "10",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("holds 10/10"));
}

#[test]
fn verify_dataset_command() {
    let dir = data_dir("projective_plane");
    let (code, out) = run(&["verify-dataset", "--dir", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("projective_plane: 2/2 rigid"));
    let root = data_dir("");
    let (code, out) = run(&[
        "verify-dataset",
        "--dir",
        root.to_str().unwrap(),
        "--name",
        "projective_plane",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rigid"], 2);
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["rank"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let bad = tmp("bad.cx", "4 3\n1 2\n");
    let (code, out) = run(&["rank", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("line 2"));
    let t = tmp("tetra-prime.cx", TETRA);
    assert_eq!(
        run(&["rank", "--in", t.to_str().unwrap(), "--prime", "9"]).0,
        2
    );
    assert_eq!(
        run(&["rank", "--in", t.to_str().unwrap(), "--trials", "0"]).0,
        2
    );
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn deterministic_and_tagged() {
    let k = tmp(
        "det.cx",
        "6 3\n1 2 3\n1 2 4\n1 3 5\n2 4 6\n3 5 6\n4 5 6\n1 5 6\n",
    );
    let p = k.to_str().unwrap();
    for cmd in [
        vec!["rank", "--in", p],
        vec!["sigma0", "--in", p],
        vec!["shift", "--in", p, "--order", "lex"],
    ] {
        let mut args = cmd.clone();
        args.extend(["--seed", "11", "--prime", "2", "--trials", "2"]);
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b);
        for line in
            a.1.lines()
                .filter(|l| l.contains("RIGID") || l.contains("SIGMA0") || l.starts_with("rank"))
        {
            assert!(line.contains("[trials=2 prime=p2]"), "{line}");
        }
    }
}

#[test]
fn binary_exit_codes() {
    let t = tmp("tetra-bin.cx", TETRA);
    let bin = env!("CARGO_BIN_EXE_volrig");
    let ok = Command::new(bin)
        .args(["rigid", "--in", t.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("RIGID"));
    let bad = Command::new(bin).args(["rigid"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let single = tmp("single-bin.cx", "5 3\n1 2 3\n");
    let no = Command::new(bin)
        .args(["rigid", "--in", single.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(no.status.code(), Some(1));
}
