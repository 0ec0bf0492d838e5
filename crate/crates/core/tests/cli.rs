use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tamecover"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    let doc = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
    (code, doc)
}

#[test]
fn hurwitz_char0_golden() {
    let (code, text) = run(&["hurwitz-char0", "--d", "5", "--cycles", "3,2,3,4"]);
    assert_eq!(code, 0);
    assert_eq!(text, "{\"count\":8}\n");
}

#[test]
fn hurwitz_p_golden() {
    let (code, doc) = run_json(&["hurwitz-p", "--p", "5", "--cycles", "3,2,3", "--with-pminus1"]);
    assert_eq!(code, 0);
    assert_eq!(doc, json!({"h_p": 3, "degree_check": 3, "supersingular": ["4"]}));
    let (_, four) = run_json(&["hurwitz-p", "--p", "5", "--cycles", "3,2,3,4"]);
    assert_eq!(four, doc);
}

#[test]
fn three_point_over_q_golden() {
    let (code, doc) = run_json(&["three-point", "--p", "0", "--cycles", "3,2,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["num"], json!([0, 0, 0, 1]));
    assert_eq!(doc["den"], json!([-2, 3]));
    assert_eq!(doc["char"], json!(0));
    assert!(doc.get("ext_modulus").is_none());
}

#[test]
fn lambda_map_example_a() {
    let (code, doc) = run_json(&["lambda-map", "--p", "5", "--cycles", "2,2,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["degree"], json!(4));
    assert_eq!(doc["lambda"], json!({"num": [0, 0, 0, 1, 2], "den": [2, 1]}));
    assert_eq!(doc["supersingular"], json!([]));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["no-such-command"],
        vec!["hurwitz-char0", "--d", "5"],
        vec!["hurwitz-char0", "--d", "5", "--cycles", "3,2,3,4", "--bogus"],
        vec!["three-point", "--p", "0", "--cycles", "3,2"],
        vec!["bad-degree", "--cycles", "2,3,3"],
        vec!["bad-degree", "--sweep", "q=5"],
    ] {
        let (code, doc) = run_json(&args);
        assert_eq!(code, 1, "{args:?}");
        assert_eq!(doc["error"], json!("Usage"), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_two_with_code() {
    let cases: [(&[&str], &str); 5] = [
        (&["three-point", "--p", "0", "--cycles", "2,2,4"], "InvalidSpec"),
        (&["three-point", "--p", "6", "--cycles", "3,2,2"], "NotPrime"),
        (&["hurwitz-char0", "--d", "12", "--cycles", "2,2,2,2"], "DegreeTooLarge"),
        (&["additive-twist", "--p", "5", "--cycles", "2,4", "--c", "4"], "ExcludedC"),
        (&["additive-family", "--p", "7", "--cycles", "4,4"], "InvalidParameters"),
    ];
    for (args, want) in cases {
        let (code, doc) = run_json(args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(doc["error"], json!(want), "{args:?}");
        assert!(doc["detail"].is_string());
    }
}

#[test]
fn sweeps_are_byte_identical_across_runs() {
    for args in [
        vec!["bad-degree", "--sweep", "p=5..13"],
        vec!["hurwitz-p", "--sweep", "p=5..7"],
        vec!["fiber-count", "--p", "5", "--cycles", "3,2,3", "--field-degree", "2"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.0, 0);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn bad_degree_spot_values() {
    let (_, doc) = run_json(&["bad-degree", "--p", "7", "--cycles", "2,5,5"]);
    assert_eq!(doc["value"], json!(14));
    assert_eq!(doc["h_p"], json!(0));
    let (_, doc) = run_json(&["bad-degree", "--p", "5", "--cycles", "3,3,2"]);
    assert_eq!(doc["value"], json!(5));
    assert_eq!(doc["case"], json!("mixed"));
}

#[test]
fn lift_then_contract_through_files() {
    let dir = TempDir::new().expect("tempdir");
    let lifted_path = dir.path().join("lifted.json");
    let (code, lifted) = run_json(&[
        "lift",
        "--p",
        "7",
        "--cycles",
        "3,2,5",
        "--mu",
        "t+2",
        "--field-degree",
        "2",
        "--out",
        lifted_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let on_disk: Value =
        serde_json::from_str(&std::fs::read_to_string(&lifted_path).unwrap()).unwrap();
    assert_eq!(on_disk, lifted);

    let cover_path = dir.path().join("cover.json");
    std::fs::write(&cover_path, lifted["cover"].to_string()).unwrap();
    let lambda = lifted["lambda"].as_str().unwrap().to_string();
    let (code, back) = run_json(&[
        "contract",
        "--cover",
        cover_path.to_str().unwrap(),
        "--lambda",
        &lambda,
        "--mu",
        "t+2",
    ]);
    assert_eq!(code, 0);
    let (_, direct) = run_json(&["three-point", "--p", "7", "--cycles", "3,2,2"]);
    assert_eq!(back["num"], direct["num"]);
    assert_eq!(back["den"], direct["den"]);
}

#[test]
fn additive_twist_p5() {
    let (code, doc) = run_json(&["additive-twist", "--p", "5", "--cycles", "2,4", "--c", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["twists"][0]["lambda"], json!(3));
    let (_, fam) = run_json(&["additive-family", "--p", "7", "--cycles", "3,5"]);
    assert_eq!(fam["families"].as_array().unwrap().len(), 2);
    assert_eq!(fam["h_p"], json!(2));
}

#[test]
fn verify_worked_examples_passes() {
    let (code, doc) = run_json(&["verify", "--suite", "paper-examples", "--p", "5"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["failed"], json!(0));
}

#[test]
fn pretty_output_parses_to_same_document() {
    let (_, compact) = run_json(&["hurwitz-p", "--p", "7", "--cycles", "2,3,5", "--with-pminus1"]);
    let (_, pretty) = run_json(&["hurwitz-p", "--p", "7", "--cycles", "2,3,5", "--with-pminus1", "--pretty"]);
    assert_eq!(compact, pretty);
}
