use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reeblock"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_normaliser_k1() {
    let out = run(&["verify-normaliser", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["loewy_length"], 2);
    assert_eq!(r["passed"], true);
}

#[test]
fn sign_choice_keeps_loewy_length() {
    let a = json(&run(&["verify-normaliser", "--k", "1", "--epsilon", "-1"]));
    let out = run(&["verify-normaliser", "--k", "1", "--epsilon", "1"]);
    // the positive sign yields negative Burnside counts, so verification fails
    assert_eq!(out.status.code(), Some(1));
    let b = json(&out);
    assert_eq!(a["loewy_length"], b["loewy_length"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["verify-normaliser", "--k", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify-ree", "--k", "1", "--epsilon", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["export", "--what", "class-census", "--k", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_ree_k1_and_k2() {
    let out = run(&["verify-ree", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["loewy_g"], 3);
    assert_eq!(r["loewy_n"], 2);
    assert_eq!(r["isomorphic"], false);
    assert_eq!(
        run(&["verify-ree", "--k", "2", "--jobs", "2"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn reports_deterministic_apart_from_timestamp() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("generated_at");
        v
    };
    let a = strip(json(&run(&["verify-ree", "--k", "1"])));
    let b = strip(json(&run(&["verify-ree", "--k", "1"])));
    assert_eq!(a, b);
}

#[test]
fn export_g_products_with_legend() {
    let out = run(&[
        "export",
        "--what",
        "g-products",
        "--k",
        "1",
        "--format",
        "json",
        "--legend",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let cells = r["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 256);
    let find = |x: &str, y: &str| cells.iter().find(|c| c["x"] == x && c["y"] == y).unwrap();
    assert_eq!(find("X", "X")["legend"], "alpha");
    assert_eq!(find("T", "T")["legend"], "beta");
    assert_eq!(find("X", "YT")["rendered"], "2*C(YT)");
    assert_eq!(find("J", "J")["legend"], "e_xi3");
    assert_eq!(find("Y", "J")["rendered"], "0");
    assert!(cells.iter().all(|c| c["legend"] != "?"));
}

#[test]
fn export_tables_csv() {
    let out = run(&[
        "export",
        "--what",
        "class-census",
        "--k",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 35);
    let out = run(&[
        "export",
        "--what",
        "chartab-n",
        "--k",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "export",
        "--what",
        "n-constants",
        "--k",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().lines().count() > 1000);
}
