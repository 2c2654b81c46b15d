use std::process::{Command, Output};

use serde_json::Value;

fn graph(name: &str) -> String {
    format!("{}/../../graphs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn latcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcoh")).args(args).output().unwrap()
}

fn latcoh_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcoh"))
        .env("LC_COHOM_THREADS", threads)
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn info_reports_unimodular_graph() {
    let v = json(&latcoh(&["info", "--graph", &graph("e8_tail.txt")]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "info");
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 9);
    assert_eq!(v["graph"]["sha256"].as_str().unwrap().len(), 64);
    let r = &v["result"];
    assert_eq!(r["determinant"], 1);
    assert_eq!(r["definiteness"], "NegativeDefinite");
    assert_eq!(r["num_classes"], 1);
    assert_eq!(r["canonical"], serde_json::json!([0, 0, 0, 0, 0, 0, 0, -1, 0]));
}

#[test]
fn cohomology_of_positive_vertex() {
    let v = json(&latcoh(&["cohomology", "--graph", &graph("plus_one.txt")]));
    let classes = v["result"].as_array().unwrap();
    assert_eq!(classes.len(), 1);
    let c = &classes[0];
    assert!(c["d"].is_null());
    // no part carries reduced cohomology, and some part carries a tower
    assert!(c["reduced_ranks"].as_array().unwrap().iter().all(|x| x == 0));
    assert!(c["tower_starts"].as_array().unwrap().iter().any(|x| !x.is_null()));
}

#[test]
fn sw_of_minus_two_lists_both_classes() {
    let v = json(&latcoh(&["sw", "--graph", &graph("minus_two.txt")]));
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let ids: Vec<u64> = rows.iter().map(|r| r["class_id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [0, 1]);
    // rationals serialise as [numer, denom]
    let sw: Vec<i64> = rows.iter().map(|r| r["sw"][0].as_i64().unwrap()).collect();
    assert_eq!(sw.iter().sum::<i64>(), 0);
    assert!(rows.iter().all(|r| r["sw"][1] == 8));
}

#[test]
fn unknown_vertex_is_a_usage_error() {
    let out = latcoh(&["surgery", "--graph", &graph("e8_tail.txt"), "--vertex", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown vertex"));
}

#[test]
fn missing_file_and_bad_vector_are_usage_errors() {
    let out = latcoh(&["info", "--graph", &graph("missing.txt")]);
    assert_eq!(out.status.code(), Some(2));
    let out = latcoh(&[
        "relative",
        "--graph",
        &graph("e8_tail.txt"),
        "--vertex",
        "j0",
        "--kbar",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sw_on_indefinite_graph_is_a_domain_error() {
    let out = latcoh(&["sw", "--graph", &graph("plus_one.txt")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn relative_check_passes_on_tail() {
    let v = json(&latcoh(&[
        "relative",
        "--graph",
        &graph("e8_tail.txt"),
        "--vertex",
        "j0",
        "--kbar",
        "0,0,0,0,0,0,0,-1,0",
        "--check",
    ]));
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn identity_check_on_tail() {
    let out = latcoh(&[
        "identity-check",
        "--graph",
        &graph("e8_tail.txt"),
        "--vertex",
        "j0",
        "--lprime",
        "0,0,0,0,0,0,0,0,0",
    ]);
    let v = json(&out);
    assert_eq!(v["result"]["periodic"]["passed"], true);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["cohomology", "--graph", &graph("star_2_3_7.txt")];
    let one = latcoh_threads(&args, "1");
    let four = latcoh_threads(&args, "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let args = ["check-identities", "--seed", "7", "--cases", "5"];
    assert_eq!(latcoh(&args).stdout, latcoh(&args).stdout);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = latcoh_threads(&["info", "--graph", &graph("e8.txt")], "zero");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_is_plain() {
    let out = latcoh(&["--format", "text", "pc", "--graph", &graph("star_2_3_7.txt"), "--vertex", "c"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "pc = 1"), "{text}");
}
