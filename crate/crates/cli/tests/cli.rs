//! The `dvar` binary against the golden session documents.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run_file(file: &str, args: &[&str], json: bool) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dvar"));
    cmd.arg("--input").arg(data(file));
    if json {
        cmd.arg("--json");
    }
    cmd.args(args).output().expect("run dvar")
}

fn run_stdin(doc: &str, args: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dvar"))
        .arg("--json")
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn dvar");
    child.stdin.take().unwrap().write_all(doc.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

/// (document, command line, exit code)
const CORPUS: &[(&str, &[&str], i32)] = &[
    ("poizat.dvar", &["tangent", "V"], 0),
    ("poizat.dvar", &["prolong", "V"], 0),
    ("poizat.dvar", &["validate", "V", "s"], 0),
    ("poizat.dvar", &["validate", "s"], 0),
    ("poizat.dvar", &["delta", "V", "s", "x*z - 1"], 0),
    ("poizat.dvar", &["delta", "s", "x"], 0),
    ("poizat.dvar", &["dsub", "s", "x*z - 1, y"], 0),
    ("poizat.dvar", &["dsub", "s", "x*z - 1, x - 1"], 1),
    ("poizat.dvar", &["dsub", "s", "y"], 2),
    ("poizat.dvar", &["dpoint", "s", "x=1", "y=0", "z=1"], 0),
    ("poizat.dvar", &["dpoint", "s", "x=1", "y=1", "z=1"], 1),
    ("poizat.dvar", &["dpoint", "s", "x=2", "y=0", "z=2"], 2),
    ("poizat.dvar", &["product", "s", "s"], 0),
    ("poizat.dvar", &["dim", "V"], 0),
    ("poizat.dvar", &["dim", "s"], 0),
    ("poizat.dvar", &["components", "s", "x*z - 1"], 0),
    ("poizat.dvar", &["first-integrals", "s", "--degree", "1"], 0),
    ("poizat.dvar", &["validate", "V", "nope"], 2),
    ("odes.dvar", &["compile-ode", "K"], 0),
    ("odes.dvar", &["compile-ode", "P"], 0),
    ("odes.dvar", &["compile-ode", "L"], 0),
    ("odes.dvar", &["signature", "K"], 0),
    ("odes.dvar", &["signature", "P"], 0),
    ("odes.dvar", &["validate", "K"], 0),
    ("odes.dvar", &["dim", "P"], 0),
    ("odes.dvar", &["first-integrals", "L", "--degree", "3"], 0),
    ("odes.dvar", &["darboux", "L", "--degree", "1", "--cofactor", "0"], 0),
    ("odes.dvar", &["signature", "Q"], 2),
    ("planar.dvar", &["dsub", "saddle", "W"], 1),
    ("planar.dvar", &["dsub", "shear", "W"], 0),
    ("planar.dvar", &["dsub", "unit", "W"], 1),
    ("planar.dvar", &["dsub", "zero", "y - 2*x"], 0),
    ("planar.dvar", &["dpoint", "zero", "x=1", "y=2/3"], 0),
    ("planar.dvar", &["dmap-check", "proj"], 0),
    ("planar.dvar", &["dmap-check", "curve"], 0),
    ("planar.dvar", &["dmap-check", "square"], 0),
    ("planar.dvar", &["dominant", "proj"], 0),
    ("planar.dvar", &["dominant", "curve"], 1),
    ("planar.dvar", &["dominant", "square"], 0),
    ("planar.dvar", &["genfinite", "proj"], 1),
    ("planar.dvar", &["genfinite", "square"], 0),
    ("planar.dvar", &["first-integrals", "saddle", "--degree", "2"], 0),
    ("planar.dvar", &["darboux", "saddle", "--degree", "1", "--cofactor", "0"], 0),
    ("planar.dvar", &["rational-integrals", "saddle"], 0),
    ("planar.dvar", &["rational-integrals", "shear", "--degree", "1"], 0),
    ("planar.dvar", &["product", "saddle", "still"], 0),
    ("translation.dvar", &["dmap-check", "f"], 0),
    ("translation.dvar", &["first-integrals", "one", "--degree", "1"], 0),
    ("translation.dvar", &["dpoint", "one", "x=d0"], 0),
    ("translation.dvar", &["dpoint", "one", "x=d0^2"], 1),
    ("translation.dvar", &["delta", "one", "x - d0"], 0),
    ("logistic.dvar", &["darboux", "s", "--degree", "1", "--cofactor", "1"], 0),
    ("logistic.dvar", &["rational-integrals", "s", "--degree", "1"], 0),
    ("components.dvar", &["validate", "xy", "unit"], 1),
    ("components.dvar", &["components", "xy", "scale", "x", "y"], 0),
    ("components.dvar", &["components", "xy", "unit", "x", "y"], 1),
    ("components.dvar", &["components", "xy", "scale", "x"], 2),
    ("components.dvar", &["components", "pm", "still", "x - 1", "x + 1"], 0),
    ("components.dvar", &["frobnicate"], 2),
    ("components.dvar", &["validate", "xy", "scale", "extra"], 2),
];

fn has_witness(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.iter().any(|(k, x)| {
            let nonempty = !x.is_null() && x.as_array().is_none_or(|a| !a.is_empty());
            (matches!(k.as_str(), "residue" | "mismatches" | "image_closure") && nonempty)
                || (k == "fibre_dimension" && x.as_u64().is_some_and(|d| d > 0)) || has_witness(x)
        }),
        Value::Array(a) => a.iter().any(has_witness),
        _ => false,
    }
}

#[test]
fn exit_code_contract_on_the_corpus() {
    for (file, args, code) in CORPUS {
        let out = run_file(file, args, true);
        let got = out.status.code();
        assert_eq!(got, Some(*code), "{file}: {args:?}\n{}", String::from_utf8_lossy(&out.stdout));
        let v = json(&out);
        let status = ["ok", "invalid", "error"][*code as usize];
        assert_eq!(v["status"], status, "{file}: {args:?}");
        match code {
            1 => assert!(has_witness(&v["verdict"]), "{file}: {args:?} has no witness: {v}"),
            2 => assert!(v["error"]["message"].as_str().is_some_and(|m| !m.is_empty())),
            _ => assert!(v.get("error").is_none()),
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for (file, args, _) in CORPUS.iter().step_by(3) {
        for as_json in [true, false] {
            let a = run_file(file, args, as_json);
            let b = run_file(file, args, as_json);
            assert_eq!(a.stdout, b.stdout, "{file}: {args:?}");
        }
    }
}

#[test]
fn text_output_leads_with_the_status() {
    let out = run_file("planar.dvar", &["dsub", "unit", "W"], false);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("invalid\n"), "{text}");
    assert!(text.contains("residue: -1"));
}

#[test]
fn parse_errors_carry_a_location() {
    let doc = "ring:\n  vars = x, y\n\nvariety V:\n  gens = x +* y\n";
    let out = run_stdin(doc, &["dim", "V"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["line"], 5);
    assert_eq!(v["error"]["column"], 13);

    let out = run_stdin("ring:\n  vars = x\nvariety V:\n  gens = q + 1\n", &["dim", "V"]);
    let v = json(&out);
    assert_eq!(v["error"]["line"], 4);
    assert!(v["error"]["message"].as_str().unwrap().contains('q'));

    let out = run_stdin("ring:\n  vars = x\nvariety V:\n  gens = x\nvariety V:\n  gens = x\n", &["dim", "V"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["line"], 5);
}

#[test]
fn missing_input_file_is_an_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_dvar"))
        .args(["--json", "--input", "/nonexistent/doc.dvar", "dim", "V"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "error");
}

#[test]
fn documented_examples() {
    let v = json(&run_file("poizat.dvar", &["validate", "V", "s"], true));
    assert_eq!(v["status"], "ok");
    assert_eq!(v["verdict"]["valid"], true);

    let v = json(&run_file("planar.dvar", &["dsub", "unit", "W"], true));
    assert_eq!(v["status"], "invalid");
    assert_eq!(v["verdict"]["checks"][0]["residue"], "-1");

    let v = json(&run_file("planar.dvar", &["first-integrals", "saddle", "--degree", "2"], true));
    assert_eq!(v["status"], "ok");
    assert_eq!(v["verdict"]["basis"], serde_json::json!(["x*y"]));
}

#[test]
fn circle_residue_is_reported() {
    let doc = "ring:\n  vars = x, y\nvariety C:\n  gens = x^2 + y^2 - 1\nsection s on C:\n  x = 1\n  y = 0\n";
    let out = run_stdin(doc, &["validate", "C", "s"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"]["valid"], false);
    assert_eq!(v["verdict"]["checks"][0]["residue"], "2*x");
}

#[test]
fn verdict_payloads() {
    let v = json(&run_file("odes.dvar", &["compile-ode", "K"], true));
    assert_eq!(v["verdict"]["variables"], serde_json::json!(["u0", "w"]));
    assert_eq!(v["verdict"]["dimension"], 1);
    let v = json(&run_file("odes.dvar", &["compile-ode", "P"], true));
    assert_eq!(v["verdict"]["dimension"], 2);
    let v = json(&run_file("odes.dvar", &["signature", "P"], true));
    assert_eq!(v["verdict"]["ell"], 2);
    assert_eq!(v["verdict"]["g"], "u0*u2 - u1");

    let v = json(&run_file("translation.dvar", &["first-integrals", "one", "--degree", "1"], true));
    assert_eq!(v["verdict"]["basis"], serde_json::json!(["x - d0"]));

    let v = json(&run_file("poizat.dvar", &["product", "s", "s"], true));
    assert_eq!(v["verdict"]["dimension"], 4);
    assert_eq!(v["verdict"]["variables"].as_array().unwrap().len(), 6);

    let v = json(&run_file("planar.dvar", &["dominant", "curve"], true));
    assert_eq!(v["verdict"]["dominant"], false);
    assert_eq!(v["verdict"]["image_dimension"], 1);

    let v = json(&run_file("logistic.dvar", &["darboux", "s", "--degree", "1", "--cofactor", "1"], true));
    let pairs: Vec<(String, String)> = v["verdict"]["polynomials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["p"].as_str().unwrap().to_string(), d["cofactor"].as_str().unwrap().to_string()))
        .collect();
    assert!(pairs.contains(&("x".into(), "x - 1".into())));
    assert!(pairs.contains(&("x - 1".into(), "x".into())));
}

#[test]
fn certificates_reconstruct_on_request() {
    let plain = json(&run_file("poizat.dvar", &["delta", "s", "x*z - 1"], true));
    assert!(plain["certificates"].is_null());
    let out = Command::new(env!("CARGO_BIN_EXE_dvar"))
        .arg("--input")
        .arg(data("poizat.dvar"))
        .args(["--json", "--certify", "delta", "s", "x*z - 1"])
        .output()
        .unwrap();
    let v = json(&out);
    let c = &v["certificates"];
    assert_eq!(c["remainder"], "0");
    assert_eq!(c["basis"], serde_json::json!(["x*z - 1"]));
    assert_eq!(c["cofactors"], serde_json::json!(["-y*z"]));
}
