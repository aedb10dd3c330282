use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn vvjack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vvjack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn count_matches_closed_form() {
    let out = vvjack(&["count", "--N", "4", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "count");
    assert_eq!(v["results"]["count"], 92);
    assert!(v["version"].is_string());
}

#[test]
fn verify_small_case_exits_zero() {
    let out = vvjack(&[
        "verify",
        "--shape",
        "2,1",
        "--kappa",
        "1/4",
        "--max-degree",
        "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["results"]["passed"], true);
    assert!(v["results"]["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn excluded_kappa_is_a_computation_error() {
    let out = vvjack(&[
        "coeffs",
        "--shape",
        "3,1",
        "--kappa",
        "-1/2",
        "--max-degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "PoleExcluded");
    assert_eq!(v["error"]["witness"], "-1/2");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(vvjack(&["tableaux", "--shape", "4"]).status.code(), Some(2));
    assert_eq!(vvjack(&["tableaux"]).status.code(), Some(2));
    assert_eq!(vvjack(&["count", "--N", "4"]).status.code(), Some(2));
    assert_eq!(
        vvjack(&["gram", "--shape", "2,1", "--kappa", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "kernel",
        "--shape",
        "2,1",
        "--kappa",
        "1/5",
        "--order",
        "3",
        "--samples",
        "5",
        "--seed",
        "9",
    ];
    let a = vvjack(&args);
    let b = vvjack(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["results"]["seed"], 9);
    assert_eq!(v["results"]["min_eigenvalues"].as_array().unwrap().len(), 5);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "shape = \"2,1\"\nkappa = \"1/4\"\nmax_degree = 1\nseed = 3\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&vvjack(&["gram", "--config", c]));
    assert_eq!(v["config"]["kappa"], "1/4");
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["results"]["diagonal"], true);
    let v = json(&vvjack(&["gram", "--config", c, "--kappa", "1/5"]));
    assert_eq!(v["config"]["kappa"], "1/5");
    assert_eq!(v["config"]["shape"], "2,1");

    fs::write(&cfg, "shape = \"2,1\"\nbogus = 1\n").unwrap();
    assert_eq!(vvjack(&["tableaux", "--config", c]).status.code(), Some(2));
}

#[test]
fn coefficient_store_persists_and_extends() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.json");
    let p = path.to_str().unwrap();
    let base = ["coeffs", "--shape", "2,1", "--kappa", "1/4", "--store", p];
    let out = vvjack(&[&base[..], &["--max-degree", "1"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let first = fs::read_to_string(&path).unwrap();
    let stored: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(stored["header"]["sealed_grade"], 1);
    assert_eq!(stored["header"]["N"], 3);

    let v = json(&vvjack(&[&base[..], &["--max-degree", "2"]].concat()));
    assert_eq!(v["results"]["sealed_grade"], 2);
    let stored: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stored["grades"].as_array().unwrap().len(), 3);

    // a store built for another κ is refused
    let out = vvjack(&[
        "coeffs",
        "--shape",
        "2,1",
        "--kappa",
        "1/5",
        "--store",
        p,
        "--max-degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "Format");
}

#[test]
fn output_flag_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = vvjack(&[
        "tableaux",
        "--shape",
        "3,1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["dimension"], 3);
}

#[test]
fn remaining_subcommands_run() {
    let v = json(&vvjack(&["rep", "--shape", "2,1", "--perm", "2,1,3"]));
    assert_eq!(v["results"]["matrix"].as_array().unwrap().len(), 2);
    let v = json(&vvjack(&[
        "nsjp", "--shape", "2,1", "--kappa", "1/4", "--alpha", "0,1,0",
    ]));
    assert_eq!(v["results"]["eigenfunction"], true);
    let v = json(&vvjack(&[
        "identity",
        "--N",
        "3",
        "--order",
        "4",
        "--samples",
        "5",
    ]));
    assert_eq!(v["results"]["orders"].as_array().unwrap().len(), 5);
    let out = vvjack(&[
        "diffsys",
        "--shape",
        "3,1",
        "--points",
        "3",
        "--transport-steps",
        "400",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["results"]["gamma"]["by_rows"],
        v["results"]["gamma"]["by_contents"]
    );
}
