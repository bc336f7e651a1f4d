use std::io::Write;
use std::process::Command;

use quadrep::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quadrep").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn decompose_smallest_case() {
    let (code, out, _) = call(&["decompose", "--variant", "T11i_a", "--n", "1"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert_eq!(r["linear_value"], 1);
    let q: Vec<i64> = ["x", "y", "z", "w"].iter().map(|k| r[*k].as_i64().unwrap()).collect();
    assert_eq!(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + 2 * q[3] * q[3], 1);
    assert_eq!(q[1] + 3 * q[2] + 2 * q[3], 1);
}

#[test]
fn dickson_membership() {
    let (code, out, _) = call(&["dickson", "member", "--form", "1,2,6", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(records(&out)[0]["member"], true);
    let (_, out, _) = call(&["dickson", "member", "--form", "1,2,6", "--n", "4"]);
    assert_eq!(records(&out)[0]["member"], false);
}

#[test]
fn small_one_three_five_scan() {
    let (code, out, _) = call(&[
        "scan", "--form", "1,1,1,1", "--linear", "1,3,5,0", "--target", "square", "--domain", "nat", "--range",
        "0..1000",
    ]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert_eq!(r["exceptions"], Value::Array(vec![]));
    assert_eq!(r["counts"]["scanned"], 1001);

    let (code, out, _) = call(&[
        "--output", "csv", "scan", "--form", "1,1,1,1", "--linear", "1,3,5,0", "--target", "square", "--domain",
        "nat", "--range", "0..1000", "--jobs", "3",
    ]);
    assert_eq!((code, out.as_str()), (0, "n\n"));
}

#[test]
fn scan_exceptions_as_csv() {
    let (code, out, _) = call(&[
        "--output", "csv", "scan", "--form", "1,1,1,1", "--linear", "1,0,0,0", "--target", "fixed:0", "--range",
        "0..8",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "n\n7\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["decompose", "--variant", "nope", "--n", "1"][..],
        &["decompose", "--variant", "T11i_a"],
        &["ternary", "count", "--form", "1,-1,1", "--n", "2"],
        &["scan", "--form", "1,1,1", "--linear", "1,1,1,1", "--target", "square", "--range", "0..5"],
        &["scan", "--form", "1,1,1,1", "--linear", "1,1,1,1", "--target", "cube", "--range", "0..5"],
        &["decompose", "--variant", "T11i_a", "--n", "99999999999999999999"],
        &["bogus"],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains("Usage"), "{args:?}: {err}");
    }
}

#[test]
fn domain_errors_exit_1_in_every_mode() {
    for mode in ["json", "csv", "human"] {
        let (code, out, _) = call(&["--output", mode, "decompose", "--variant", "T12i", "--n", "32"]);
        assert_eq!(code, 1, "{mode}");
        assert!(out.contains("not_covered"), "{mode}: {out}");
    }
    let (code, _, err) = call(&["decompose", "--variant", "L31", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("not a theorem variant"));
    let (code, _, _) = call(&["local", "density", "--form", "1,1,1", "--n", "3", "--p", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn ternary_and_local_records() {
    let (_, out, _) = call(&["ternary", "count", "--form", "1,1,1", "--n", "3"]);
    assert_eq!(records(&out)[0]["count"], 8);
    let (_, out, _) = call(&["ternary", "aut", "--form", "1,1,1"]);
    assert_eq!(records(&out)[0]["order"], 48);
    let (_, out, _) = call(&["ternary", "disc", "--form", "1,1,32"]);
    assert_eq!(records(&out)[0]["discriminant"], 128);
    let (_, out, _) = call(&["local", "represented", "--form", "1,1,1", "--n", "7", "--p", "2"]);
    assert_eq!(records(&out)[0]["represented"], false);
    let (_, out, _) = call(&["local", "eligible", "--form", "1,1,1", "--n", "6"]);
    assert_eq!(records(&out)[0]["eligible"], true);
    let (_, out, _) = call(&["local", "density", "--form", "1,1,1", "--n", "1", "--p", "3", "--k", "1"]);
    let r = &records(&out)[0];
    assert_eq!((r["k"].as_u64(), r["value"].as_str()), (Some(1), Some("2/3")));
    let (_, out, _) = call(&["spinor", "bound", "--form", "1,1,32"]);
    assert_eq!(records(&out)[0]["verdict"], "possibly_multiple");
}

#[test]
fn genus_records() {
    let (_, out, _) = call(&["genus", "of", "--form", "1,7,14"]);
    assert_eq!(records(&out)[0]["count"], 2);
    let (_, out, _) = call(&["genus", "classes", "--disc", "4"]);
    assert_eq!(records(&out)[0]["count"], 1);
    let (_, out, _) = call(&["genus", "average", "--class", "1,4,9,-4,0,0", "--n", "2"]);
    assert_eq!(records(&out)[0]["average"], "0");
}

#[test]
fn human_mode_formats_json_fields() {
    let (code, out, _) = call(&["--output", "human", "dickson", "member", "--form", "1,1,2", "--n", "14"]);
    assert_eq!(code, 0);
    assert!(out.contains("member: true"));
    assert!(out.contains("form: 1,1,2"));
}

#[test]
fn emitted_records_verify() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    for args in [
        &["decompose", "--variant", "T11iii_b", "--n", "50", "--trace"][..],
        &["decompose", "--variant", "T12iii_y2zw", "--n", "977", "--trace"],
        &["decompose", "--variant", "T11ii_λ3", "--n", "12"],
        &["lemma", "--id", "L42", "--n", "9", "--trace"],
        &["ternary", "solve", "--form", "1,2,6", "--n", "9"],
        &["scan", "--form", "1,1,2,3", "--linear", "0,1,1,1", "--target", "fixed:1", "--range", "1..300", "--witness-stride", "7"],
    ] {
        let (code, out, _) = call(args);
        assert_eq!(code, 0, "{args:?}");
        file.write_all(out.as_bytes()).unwrap();
    }
    file.flush().unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let (code, out, _) = call(&["verify", "--file", &path]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(records(&out).len(), 6);

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut first: Value = serde_json::from_str(&lines[0]).unwrap();
    first["w"] = (first["w"].as_i64().unwrap() + 1).into();
    lines[0] = first.to_string();
    std::fs::write(&path, lines.join("\n")).unwrap();
    let (code, out, _) = call(&["verify", "--file", &path]);
    assert_eq!(code, 1);
    assert_eq!(records(&out)[0]["valid"], false);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_quadrep");
    let ok = Command::new(bin).args(["dickson", "member", "--form", "1,2,6", "--n", "5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), r#"{"form":"1,2,6","member":true,"n":5}"#);
    let domain = Command::new(bin).args(["decompose", "--variant", "T12i", "--n", "48"]).output().unwrap();
    assert_eq!(domain.status.code(), Some(1));
    let usage = Command::new(bin).args(["scan"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
