use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn alblab(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_alblab"))
        .args(args)
        .env_remove("ALBLAB_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap_or(Value::String(text)))
}

#[test]
fn documented_examples() {
    let (code, v) = alblab(&["ii", "eval", "--word", "0", "--path", r#"{"loop":"gamma0","turns":1}"#], None);
    assert_eq!(code, 0);
    assert!((v["value"][1].as_f64().unwrap() - 6.283185307179586).abs() < 1e-9);
    assert_eq!(v["word"], json!("0"));

    let (code, v) = alblab(&["hodge", "orbit", "--N", "1,1,0", "--F", "0,0,0"], None);
    assert_eq!((code, &v["generates"]), (0, &json!(true)));
    let (_, v) = alblab(&["hodge", "orbit", "--N", "1,0,0", "--F", "0.2,0.5i,1"], None);
    assert_eq!(v["generates"], json!(false));

    let (code, v) = alblab(&["alb", "extend", "--x", "0"], None);
    assert_eq!(code, 0);
    assert_eq!(v["class"]["kind"], json!("nilpotent_orbit"));

    let (code, v) = alblab(&["alb", "monodromy", "--word", "0 1 0^-1 1^-1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["matrix"], json!([[1, 0, 1], [0, 1, 0], [0, 0, 1]]));

    let (_, v) = alblab(&["alb", "map", "--x", "0.5"], None);
    for key in ["alpha", "beta", "lambda", "reduction_matrix"] {
        assert!(v.get(key).is_some(), "{key}");
    }

    let (_, v) = alblab(&["malcev", "coords", "--word", "0 1 0^-1 1^-1", "--level", "2"], None);
    assert_eq!(v["lie_element"], json!({"01": "1/1", "10": "-1/1"}));
    let (_, v) = alblab(&["malcev", "bch", "--level", "2", "--a", r#"{"0":"1"}"#, "--b", r#"{"1":"1"}"#], None);
    assert_eq!(v, json!({"0": "1/1", "01": "1/2", "1": "1/1", "10": "-1/2"}));

    let (_, v) = alblab(&["hodge", "rmf", "--matrix", "[[0,1],[0,0]]", "--weights", "[0,0]"], None);
    assert_eq!(v["exists"], json!(true));
    let (_, v) = alblab(&["hodge", "chart", "--q", "1", "--beta", "0.3", "--lambda", "0.7i"], None);
    assert_eq!(v["kind"], json!("interior"));
}

#[test]
fn batch_and_errors() {
    let req = r#"{"requests": [["bar", "coproduct", "--word", "10"], ["alb", "extend", "--x", "0.9"]]}"#;
    let (code, v) = alblab(&["--json-in", "-"], Some(req));
    assert_eq!(code, 1);
    assert_eq!(v["results"][0]["output"], json!([["", "10"], ["1", "0"], ["10", ""]]));
    assert_eq!(v["results"][1]["output"]["error"]["kind"], json!("domain"));

    assert_eq!(alblab(&["--json-in", "-"], Some("{oops")).0, 65);
    assert_eq!(alblab(&["unknown"], None).0, 64);
}

#[test]
fn tolerance_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_alblab"))
        .args(["selftest", "quick"])
        .env("ALBLAB_TOL", "1")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["abs_tol"], json!(1.0));
    assert_eq!(v["passed"], json!(false));
    assert!(v["criteria"].as_array().unwrap().iter().any(|c| c["failures"].as_u64().unwrap() > 0));
    assert_eq!(out.status.code(), Some(1));
}
