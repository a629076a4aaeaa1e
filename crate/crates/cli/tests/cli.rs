use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionkit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn tl_check_sl2_3_fails_condition_two() {
    let out = run(&["tl-check", "sl2_3", "-p", "2", "--T", "center", "--u", "order:4"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["conditions"], serde_json::json!([true, false, true]));
    assert!(v["witness"].is_null());
    assert_eq!(v["I_cosets"].as_array().unwrap().len(), 3);
    let t_size = v["trace"]["T_size"].as_u64().unwrap();
    let k_sum: u64 = v["trace"]["k"].as_object().unwrap().values().map(|k| k.as_u64().unwrap()).sum();
    assert_eq!(t_size, k_sum);
}

#[test]
fn tl_check_alt6_finds_witness() {
    let out = run(&["tl-check", "alt6", "--T", "maximal:0", "--u", "least-order"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["conditions"], serde_json::json!([true, true, true]));
    // the central involution of S
    assert_eq!(v["witness"], "(2,3)(4,5)");
}

#[test]
fn report_sym4() {
    let out = run(&["report", "sym4", "-p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["focal_order"], 4);
    assert_eq!(v["hyperfocal_order"], 4);
    assert_eq!(v["essentials"].as_array().unwrap().len(), 1);
    assert_eq!(v["essentials"][0], "<(0,1)(2,3),(0,2)(1,3)>");
}

#[test]
fn verify_biset_sl3_2() {
    let out = run(&["verify-biset", "sl3_2", "-p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["orbit_count"], 21);
    for key in ["stabilizers_in_fusion", "fusion_invariance", "prime_to_p"] {
        assert_eq!(v[key]["passed"], true);
    }
    let doubled = run(&["verify-biset", "sl3_2", "--copies", "2"]);
    assert_eq!(doubled.status.code(), Some(2));
    assert_eq!(json(&doubled)["prime_to_p"]["passed"], false);
}

#[test]
fn transfer_table_covers_s() {
    let out = run(&["transfer", "dihedral8", "--T", "derived"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["values"].as_object().unwrap().len(), 8);
    assert_eq!(v["section_order"], 4);
}

#[test]
fn decompose_and_essentials() {
    let out = run(&["essentials", "sym4xsym4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["members"].as_array().unwrap().len(), 3);
    let out = run(&[
        "decompose",
        "sym4xsym4",
        "--from",
        "(0,1)(2,3)(4,5)(6,7);(0,2)(1,3)(4,6)(5,7)",
        "--witness",
        "(1,2,3)(5,6,7)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["steps"].as_array().unwrap().len(), 2);
    assert_eq!(v["profile"], serde_json::json!([16, 16, 16]));
}

#[test]
fn text_format() {
    let out = run(&["report", "sym4", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("focal subgroup order 4"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["report", "monster"]).status.code(), Some(64));
    assert_eq!(run(&["report"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate", "sym4"]).status.code(), Some(64));
    assert_eq!(run(&["report", "sym4", "-p", "5"]).status.code(), Some(64));
    assert_eq!(run(&["tl-check", "sym4", "--T", "derived", "--u", "(0,1"]).status.code(), Some(64));
    // Sym(9) exceeds the group order guard
    assert_eq!(run(&["essentials", "sym9"]).status.code(), Some(65));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn group_file_input() {
    let dir = std::env::temp_dir().join(format!("fusionkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sym3.json");
    std::fs::write(&path, r#"{"name":"s3","degree":3,"generators":[[1,0,2],[1,2,0]]}"#).unwrap();
    let out = run(&["report", path.to_str().unwrap(), "-p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sylow_order"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["tl-check", "sl3_2", "--T", "derived", "--u", "least-order"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
