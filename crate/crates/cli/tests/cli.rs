use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rackoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rackoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("rackoh-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verify_accepts_dihedral_quandle() {
    let out = rackoh(&["verify", "--rack", "dihedral:3", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["quandle"], true);
}

#[test]
fn verify_cyclic_rack_is_not_a_quandle() {
    let v = json(&rackoh(&["verify", "--rack", "cyclic:4", "--json"]));
    assert_eq!(v["quandle"], false);
}

#[test]
fn verify_reports_non_bijective_row() {
    let path = temp_file("bad.json", r#"{"size": 2, "table": [[0, 0], [1, 1]]}"#);
    let out = rackoh(&["verify", "--rack", &format!("file:{}", path.display()), "--json"]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("not_bijective"), "{text}");
}

#[test]
fn malformed_input_exits_with_two() {
    let path = temp_file("range.json", r#"{"size": 2, "table": [[0, 5], [1, 0]]}"#);
    assert_eq!(
        code(&rackoh(&["verify", "--rack", &format!("file:{}", path.display())])),
        2
    );
    assert_eq!(code(&rackoh(&["verify", "--rack", "nonsense:3"])), 2);
    assert_eq!(
        code(&rackoh(&["cohomology", "--rack", "dihedral:3", "--ring", "Fp"])),
        2
    );
}

#[test]
fn integral_cohomology_of_dihedral_three() {
    let out = rackoh(&[
        "cohomology",
        "--rack",
        "dihedral:3",
        "--ring",
        "Z",
        "--max-degree",
        "2",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let bettis: Vec<u64> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(bettis, vec![1, 1, 1]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn twisted_scalar_coefficients_vanish() {
    let v = json(&rackoh(&[
        "cohomology",
        "--rack",
        "trivial:2",
        "--twisted",
        "t=2,k=1",
        "--json",
    ]));
    assert!(v["degrees"].as_array().unwrap().iter().all(|d| d["betti"] == 0));
}

#[test]
fn module_file_is_read() {
    let path = temp_file(
        "module.json",
        r#"{"ring": "Q", "dim": 2, "action": {"type": "jordan", "t": 1}}"#,
    );
    let out = rackoh(&[
        "cohomology",
        "--rack",
        "dihedral:4",
        "--module",
        path.to_str().unwrap(),
        "--max-degree",
        "2",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let bettis: Vec<u64> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(bettis, vec![1, 2, 4]);
}

#[test]
fn invariant_flag_adds_the_comparison() {
    let v = json(&rackoh(&[
        "cohomology",
        "--rack",
        "dihedral:3",
        "--invariant",
        "--max-degree",
        "2",
        "--json",
    ]));
    assert!(v["cohomology"].is_object());
    assert_eq!(v["invariant"]["xi"].as_array().unwrap().len(), 3);
}

#[test]
fn h2_comparison_with_z3() {
    let out = rackoh(&["h2", "--rack", "dihedral:3", "--coeff", "Z3", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["matches"], true);
    assert_eq!(v["direct"]["invariant_factors"], serde_json::json!([3]));
}

#[test]
fn nonabelian_h2_of_a_point() {
    let out = rackoh(&["h2", "--rack", "trivial:1", "--nonabelian", "S3", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn group_reports_orbits() {
    let v = json(&rackoh(&["group", "--rack", "trivial:3", "--json"]));
    assert_eq!(v["orbit_count"], 3);
    assert_eq!(v["inner_group_order"], 1);
}

#[test]
fn exhausted_budget_exits_with_three() {
    let out = rackoh(&[
        "--matrix-mb",
        "1",
        "cohomology",
        "--rack",
        "dihedral:6",
        "--max-degree",
        "5",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn small_corpus_run_passes() {
    let out = rackoh(&[
        "corpus",
        "--rack",
        "dihedral:3",
        "--rack",
        "trivial:2",
        "--max-degree",
        "2",
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["racks"].as_array().unwrap().len(), 2);
}
