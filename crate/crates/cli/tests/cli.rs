use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_summand-lab"))
        .args(args)
        .env_remove("SUMMAND_LAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("one JSON document on stdout")
}

#[test]
fn ks_length_of_regular_product_of_fields() {
    let o = run(&[
        "ks-length",
        "--builtin",
        "product_fields:p=2,k=2",
        "--module",
        "regular",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("KS length 2"));
    let o = run(&[
        "ks-length",
        "--builtin",
        "product_fields:p=2,k=2",
        "--module",
        "regular",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "ks-length");
    let r = &v["result"]["report"];
    for key in [
        "value",
        "by_decomposition",
        "by_chain",
        "by_independent",
        "by_orthogonal_idempotents",
    ] {
        assert_eq!(r[key], 2, "{key}");
    }
}

#[test]
fn aks_of_indecomposable_regular_module() {
    let o = run(&[
        "aks",
        "--builtin",
        "truncated_poly:p=2,k=2",
        "--module",
        "regular",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["report"]["aks1"], 1);
    assert_eq!(v["result"]["report"]["aks2"], 1);
}

#[test]
fn validate_bad_algebra_reports_the_triple() {
    let o = run(&["validate", data("bad_algebra.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("at (0, 0, 0)"), "{}", stderr(&o));
}

#[test]
fn validate_good_file() {
    let o = run(&["validate", data("product_fields.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("module S0: dim 1: ok"));
}

#[test]
fn input_errors_exit_3_with_locations() {
    for (file, needle) in [
        ("entry_too_large.json", "modules.S0.action[1][0][0]"),
        ("missing_unit.json", "missing field `unit`"),
        ("unknown_key.json", "unknown field `labels`"),
    ] {
        let o = run(&["validate", data(file).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(3), "{file}");
        assert!(stderr(&o).contains(needle), "{file}: {}", stderr(&o));
    }
    let o = run(&[
        "validate",
        data("missing_unit.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(json(&o)["error"]["kind"], "input");
}

#[test]
fn bad_arguments_exit_3() {
    for args in [
        vec!["bogus"],
        vec!["endo", "--builtin", "nope:p=2"],
        vec!["endo"],
        vec!["split", "--class", "semisimple"],
        vec![
            "split",
            "--class",
            "weird",
            "--builtin",
            "product_fields:p=2,k=2",
        ],
        vec![
            "split",
            "--class",
            "free",
            "--builtin",
            "product_fields:p=2,k=2",
        ],
        vec![
            "endo",
            "--builtin",
            "product_fields:p=2,k=2",
            "--idempotent-budget",
            "0",
        ],
        vec!["corpus-check", "--builtin", "product_fields:p=2,k=2"],
    ] {
        assert_eq!(run(&args).status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn file_modules_are_selected_by_name() {
    let f = data("product_fields.json");
    let f = f.to_str().unwrap();
    // two modules and no selector is ambiguous
    assert_eq!(run(&["length", f]).status.code(), Some(3));
    let o = run(&["length", f, "--module", "R+S0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["report"]["length"], 3);
    // the only module of a file is the default
    let o = run(&[
        "pdim",
        data("dual_numbers.json").to_str().unwrap(),
        "--cutoff",
        "2",
    ]);
    assert!(stdout(&o).contains("pdim inf"), "{}", stdout(&o));
}

#[test]
fn budget_exceeded_exits_2() {
    let o = run(&[
        "idempotents",
        "--builtin",
        "product_fields:p=2,k=3",
        "--idempotent-budget",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_summand-lab"))
        .args([
            "idempotents",
            "--builtin",
            "product_fields:p=2,k=3",
            "--format",
            "json",
        ])
        .env("SUMMAND_LAB_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "budget_exceeded");
}

#[test]
fn summands_text_lists_hasse_edges_with_dimensions() {
    let o = run(&["summands", "--builtin", "upper_triangular:p=2,n=2"]);
    let s = stdout(&o);
    assert!(s.contains("5 elements, 6 hasse edges"), "{s}");
    assert!(s.contains("#3 (dim 2) -> #4 (dim 3)"), "{s}");
}

#[test]
fn stratify_over_upper_triangular() {
    let o = run(&[
        "stratify",
        "--grading",
        "pdim",
        "--cutoff",
        "2",
        "--builtin",
        "upper_triangular:p=2,n=2",
        "--module",
        "simple:0+simple:1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["result"]["report"];
    assert_eq!(r["buckets"][0].as_array().unwrap().len(), 1);
    assert_eq!(r["buckets"][1].as_array().unwrap().len(), 1);
    assert_eq!(r["infinite"].as_array().unwrap().len(), 0);
}

#[test]
fn split_witness_and_verification() {
    let args = [
        "--builtin",
        "truncated_poly:p=2,k=2",
        "--module",
        "regular+simple:0",
        "--format",
        "json",
    ];
    let o = run(&[&["split", "--class", "semisimple"][..], &args].concat());
    let r = &json(&o)["result"]["report"];
    assert_eq!(r["a"].as_array().unwrap().len(), 1);
    assert_eq!(r["b"].as_array().unwrap().len(), 2);
    let o = run(&[&["split-verify", "--class", "semisimple"][..], &args].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["report"]["unique"], true);
}

#[test]
fn remaining_commands_succeed() {
    let b = [
        "--builtin",
        "cyclic_group:p=2,n=2",
        "--module",
        "regular+simple:0",
    ];
    for cmd in [
        "endo",
        "idempotents",
        "decompose",
        "bell-check",
        "chain-lift",
        "length",
        "pdim",
    ] {
        let o = run(&[&[cmd][..], &b].concat());
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stderr(&o));
    }
    let o = run(&[&["poset", "--deviation"][..], &b, &["--format", "json"]].concat());
    assert_eq!(json(&o)["result"]["report"]["dual_deviation_check"], true);
}

#[test]
fn outputs_do_not_depend_on_threads() {
    let base = [
        "aks",
        "--builtin",
        "abelian_group:p=2,orders=2x2",
        "--module",
        "regular+simple:0",
        "--format",
        "json",
    ];
    let one = stdout(&run(&[&base[..], &["--threads", "1"]].concat()));
    let four = stdout(&run(&[&base[..], &["--threads", "4"]].concat()));
    let seq = stdout(&run(&[&base[..], &["--sequential"]].concat()));
    assert_eq!(one, four);
    assert_eq!(one, seq);
}

#[test]
fn corpus_check_json_is_byte_identical_across_runs_and_threads() {
    let a = run(&["corpus-check", "--format", "json", "--threads", "1"]);
    let b = run(&["corpus-check", "--format", "json", "--threads", "3"]);
    let c = run(&["corpus-check", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["all_passed"], true);
}
