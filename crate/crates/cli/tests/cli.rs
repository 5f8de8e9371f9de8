use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayley-growth"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cayley-growth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn structure_reports_rank_and_torsion() {
    let z2 = scratch("z2.txt", "gens a,b\ninv a~A,b~B\nrel ab=ba\n");
    let o = run(&["structure", "--group", z2.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("rank 2, torsion none"), "{}", stdout(&o));

    let c5 = data("c5.txt");
    let o = run(&["structure", "--group", c5.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("rank 0, torsion [5]"), "{}", stdout(&o));

    let o = run(&["structure", "--group", c5.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 0);
}

#[test]
fn bad_input_exits_2() {
    let bad = scratch("bad.txt", "gens a,b\nrel ab\n");
    let o = run(&["structure", "--group", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let o = run(&["structure", "--group", "/nonexistent/group.txt"]);
    assert_eq!(o.status.code(), Some(2));

    let z3 = data("z3.txt");
    let o = run(&["growth", "--group", z3.to_str().unwrap(), "--path", "a,A"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn acceptor_exports() {
    let z = scratch("z.txt", "gens a\ninv a~A\n");
    let o = run(&["acceptor", "--group", z.to_str().unwrap(), "--gamma", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 5);

    let o = run(&["acceptor", "--group", z.to_str().unwrap(), "--gamma", "2"]);
    assert!(stdout(&o).starts_with("digraph"));

    let o = run(&["acceptor", "--group", z.to_str().unwrap(), "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn growth_of_vertex_in_z3() {
    let z3 = data("z3.txt");
    let o = run(&["growth", "--group", z3.to_str().unwrap(), "--method", "all", "--format", "json"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["result"], "pass");
    let methods: Vec<&str> = v["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["exact", "fit", "oracle"]);

    let o = run(&["growth", "--group", z3.to_str().unwrap(), "--format", "latex"]);
    assert!(stdout(&o).contains(r"\frac{1 + 3z + 3z^{2} + z^{3}}{(1 - z)^{3}}"), "{}", stdout(&o));
}

#[test]
fn oracle_only_prints_counts() {
    let tri = data("triangle.txt");
    let o = run(&[
        "growth", "--group", tri.to_str().unwrap(), "--path", "a,b,c", "--method", "oracle", "--max-n", "4",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(0, 1, 7, 13, 19)"), "{out}");
    assert!(!out.contains("C(z)"));
}

#[test]
fn json_is_deterministic() {
    let g = data("line_and_plane.txt");
    let args = ["growth", "--group", g.to_str().unwrap(), "--path", "b", "--method", "all", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_passes_and_catches_corruption() {
    let g = data("z_torsion_free.txt");
    let o = run(&["verify", "--group", g.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));

    let o = run(&["verify", "--group", g.to_str().unwrap(), "--corrupt-acceptor"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verification failed: language"), "{}", stdout(&o));
}
