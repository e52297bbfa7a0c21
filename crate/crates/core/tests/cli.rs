use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use leafdeck::construct::{build_n, ConstructionParams, Variant};
use leafdeck::io::{from_json, to_dot, to_json};
use leafdeck::iso::{canonical_form, verify_witness, IsoWitness};
use leafdeck::Parity;

fn leafdeck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafdeck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_network(dir: &Path, name: &str, r: usize, parity: Parity) -> String {
    let path = dir.join(name);
    fs::write(&path, to_json(build_n(r, parity).unwrap().graph())).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn construct_dot_matches_golden() {
    let out = leafdeck(&["construct", "--r", "4", "--parity", "even", "--variant", "N", "--format", "dot"]);
    assert_eq!(code(&out), 0);
    let golden = include_str!("golden/n4_even.dot");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
    let body: Vec<&str> = golden.lines().filter(|l| l.starts_with("  ") && !l.contains("node [")).collect();
    assert_eq!(body.iter().filter(|l| l.contains(" -- ")).count(), 56);
    assert_eq!(body.iter().filter(|l| !l.contains(" -- ")).count(), 40);
    assert_eq!(golden.matches("shape=plaintext").count(), 4);
}

#[test]
fn construct_output_is_byte_stable() {
    let args = ["construct", "--r", "5", "--parity", "odd", "--variant", "G", "--format", "json"];
    let a = leafdeck(&args);
    let b = leafdeck(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_round_trip_preserves_canonical_form() {
    for r in 4..=6 {
        for variant in [Variant::M, Variant::G, Variant::N] {
            for parity in [Parity::Even, Parity::Odd] {
                let g = ConstructionParams::new(r, parity, variant).unwrap().build().unwrap();
                let back = from_json(&to_json(&g)).unwrap();
                assert_eq!(back, g);
                assert_eq!(canonical_form(&back), canonical_form(&g), "{variant} {parity} {r}");
            }
        }
    }
}

#[test]
fn construct_writes_file_and_rejects_bad_r() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = leafdeck(&["construct", "--r", "4", "--parity", "odd", "--variant", "M", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let g = from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (20, 36));

    let bad = leafdeck(&["construct", "--r", "3", "--parity", "even"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("r = 3"));
    assert_eq!(code(&leafdeck(&["construct", "--r", "4", "--parity", "even", "--format", "png"])), 2);
    assert_eq!(code(&leafdeck(&["construct", "--r", "4", "--parity", "even", "--bogus"])), 2);
}

#[test]
fn iso_exit_codes_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let even = write_network(dir.path(), "even.json", 4, Parity::Even);
    let odd = write_network(dir.path(), "odd.json", 4, Parity::Odd);

    let same = leafdeck(&["iso", &even, &even]);
    assert_eq!(code(&same), 0);
    let w: IsoWitness = serde_json::from_slice(&same.stdout).unwrap();
    let g = from_json(&fs::read_to_string(&even).unwrap()).unwrap();
    assert_eq!(w, IsoWitness::identity(&g));
    assert_eq!(verify_witness(&g, &g, &w), Ok(()));

    let differ = leafdeck(&["iso", &even, &odd]);
    assert_eq!(code(&differ), 1);
    assert!(differ.stdout.is_empty());

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"labels\": [").unwrap();
    assert_eq!(code(&leafdeck(&["iso", &even, broken.to_str().unwrap()])), 2);
    assert_eq!(code(&leafdeck(&["iso", &even, "/nonexistent/graph.json"])), 2);
}

#[test]
fn deck_writes_one_file_per_label() {
    let dir = tempfile::tempdir().unwrap();
    let even = write_network(dir.path(), "even.json", 4, Parity::Even);
    let out_dir = dir.path().join("deck");
    let out = leafdeck(&["deck", &even, "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mut names: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["x1.json", "x2.json", "x3.json", "x4.json"]);
    let entry = from_json(&fs::read_to_string(out_dir.join("x2.json")).unwrap()).unwrap();
    assert!(entry.vertex_by_label("x2").is_none());
    assert_eq!(entry.labels().count(), 3);

    // a graph that is not a network is an input error
    let m = dir.path().join("m.json");
    let g = ConstructionParams::new(4, Parity::Even, Variant::G).unwrap().build().unwrap();
    fs::write(&m, to_json(&g)).unwrap();
    assert_eq!(code(&leafdeck(&["deck", m.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()])), 2);
}

#[test]
fn reconstruction_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let even = write_network(dir.path(), "even.json", 4, Parity::Even);
    let odd = write_network(dir.path(), "odd.json", 4, Parity::Odd);
    let five = write_network(dir.path(), "five.json", 5, Parity::Even);

    let out = leafdeck(&["reconstruction", &odd, &even]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reconstruction"], true);
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["witnesses"].as_object().unwrap().len(), 4);
    assert_eq!(v["non_equivalence"]["kind"], "signature_separator");

    let selfish = leafdeck(&["reconstruction", &even, &even]);
    let v: serde_json::Value = serde_json::from_slice(&selfish.stdout).unwrap();
    assert_eq!(v["equivalent"], true);

    assert_eq!(code(&leafdeck(&["reconstruction", &even, &five])), 2);
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = leafdeck(&[
        "verify",
        "--r-min",
        "4",
        "--r-max",
        "5",
        "--report",
        report.to_str().unwrap(),
        "--negative-controls",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["negative_controls"].as_array().unwrap().len(), 5);
    assert_eq!(v["counts"][0]["component_count"], 16);
    assert_eq!(v["counts"][0]["closing_formula"], 48);
    assert_eq!(code(&leafdeck(&["verify", "--r-min", "3", "--r-max", "5"])), 2);
}

#[test]
fn export_dot_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let even = write_network(dir.path(), "even.json", 4, Parity::Even);
    let out = leafdeck(&["export-dot", &even, "--name", "N_even_4"]);
    assert_eq!(code(&out), 0);
    let g = from_json(&fs::read_to_string(&even).unwrap()).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), to_dot(&g, "N_even_4"));
    assert_eq!(to_dot(&g, "N_even_4"), include_str!("golden/n4_even.dot"));
}
