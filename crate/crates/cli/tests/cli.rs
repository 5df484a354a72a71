use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn qmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmf")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = qmf(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), json)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn eisenstein_e4() {
    let (code, r) = report(&["eisenstein", "--k", "2", "--terms", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "info");
    assert_eq!(strings(&r["payload"]["coefficients"]), ["1", "240", "2160", "6720"]);
    assert_eq!(r["payload"]["two_pi_i_power"], 0);
}

#[test]
fn eisenstein_graded() {
    let (code, r) = report(&["eisenstein", "--k", "1", "--terms", "2", "--graded"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&r["payload"]["coefficients"]), ["1/12", "-2", "-6"]);
    assert_eq!(r["payload"]["two_pi_i_power"], 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qmf(&["eisenstein", "--k", "4", "--terms", "3"]).status.code(), Some(2));
    assert_eq!(qmf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qmf(&["group", "gamma", "--matrix", "/nonexistent/m.json"]).status.code(), Some(2));
    let out = qmf(&["group", "gamma", "--matrix", &fixture("not_integral.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schemas"));
    let (code, r) = report(&["hodge", "connection", "--path", "builtin:nope", "--t", "1", "--v", "1"]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().starts_with("ParseError"));
}

#[test]
fn mq_instantons() {
    let (code, r) = report(&["mq", "instantons", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"], serde_json::json!({ "n": ["2875"] }));
    let (_, r) = report(&["mq", "instantons", "--degree", "3"]);
    assert_eq!(strings(&r["payload"]["n"]), ["2875", "609250", "317206375"]);
}

#[test]
fn mq_yukawa_and_tau1() {
    let (_, r) = report(&["mq", "yukawa", "--terms", "2"]);
    assert_eq!(strings(&r["payload"]["coefficients"]), ["5", "2875", "4876875"]);
    let (code, r) = report(&["mq", "tau1", "--terms", "2"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&r["payload"]["q_part"]["coefficients"]), ["0", "2875", "4876875/4"]);
    assert_eq!(r["payload"]["q_part"]["two_pi_i_power"], -2);
    assert_eq!(strings(&r["payload"]["polynomial"]), ["-25/12", "5/2", "5/2"]);
}

#[test]
fn mq_verify_tau_is_seeded() {
    let (code, a) = report(&["mq", "verify-tau", "--seed", "7", "--trials", "5"]);
    assert_eq!(code, 0, "{a}");
    assert_eq!(a["status"], "pass");
    let (_, b) = report(&["--seed", "7", "--trials", "5", "mq", "verify-tau"]);
    assert_eq!(a, b);
    assert_eq!(a["payload"]["matrix"]["trials"], 5);
}

#[test]
fn group_membership() {
    let (code, r) = report(&["group", "gamma", "--matrix", &fixture("identity.json")]);
    assert_eq!((code, r["status"].as_str()), (0, Some("pass")));
    assert_eq!(report(&["group", "gamma", "--matrix", &fixture("shear.json")]).0, 0);
    let (code, r) = report(&["group", "gamma", "--matrix", &fixture("scaling.json")]);
    assert_eq!((code, r["status"].as_str()), (1, Some("fail")));
    assert_eq!(report(&["group", "g0", "--matrix", &fixture("g0_upper.json")]).0, 0);
    assert_eq!(report(&["group", "g0", "--matrix", &fixture("g0_lower.json")]).0, 1);
    let framed = ["group", "gamma", "--matrix", &fixture("identity.json"), "--frame", &fixture("elliptic_frame.json")];
    assert_eq!(report(&framed).0, 0);
}

#[test]
fn hodge_check_elliptic() {
    let frame = fixture("elliptic_frame.json");
    let (code, r) = report(&["hodge", "check", "--frame", &frame, "--lattice", &fixture("elliptic_period.json"), "--period"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["payload"]["p3"]["pass"], true);
    let (code, r) = report(&["hodge", "check", "--frame", &frame, "--lattice", &fixture("elliptic_period_lower.json"), "--period"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["p3"]["pass"], false);
}

#[test]
fn hodge_connection_paths() {
    for (path, t, v) in [
        ("builtin:elliptic", "0.2+1.1i", "1"),
        ("builtin:tau", "0.5+i,1,-2i,0.3", "1,0.5,i,-1"),
        ("builtin:tau-curve", "0.1+2i", "1"),
    ] {
        let (code, r) = report(&["hodge", "connection", "--path", path, "--t", t, "--v", v]);
        let violation = r["residuals"][0]["value"].as_f64().unwrap();
        if path == "builtin:tau" {
            assert!(violation > 1e-3, "a generic direction leaves the distribution");
            assert_eq!(code, 1);
        } else {
            assert_eq!(code, 0, "{path}: {r}");
        }
    }
}

#[test]
fn elliptic_commands() {
    let (code, r) = report(&["elliptic", "periods", "--t1", "0", "--t2", "4", "0.5", "--t3", "-1"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["payload"]["period_matrix"]["rows"], 2);
    let (code, r) = report(&["elliptic", "periods", "--t1", "0", "--t2", "3", "--t3", "1"]);
    assert_eq!(code, 1);
    assert!(r["error"].as_str().unwrap().starts_with("DiscriminantZero"));
    let (code, r) = report(&["elliptic", "roundtrip", "--tau-re", "0.5", "--tau-im", "2", "--terms", "60"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn siegel_commands() {
    assert_eq!(report(&["siegel", "check", "--file", &fixture("blocks_g1.json")]).0, 0);
    assert_eq!(report(&["siegel", "check", "--file", &fixture("blocks_g1_lower.json")]).0, 1);
    let (code, r) = report(&["siegel", "map", "--file", &fixture("blocks_g1.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["x"]["entries"][0], serde_json::json!([0.25, 1.5]));
}

#[test]
fn qm_derive_checks_against_expansion() {
    let (code, r) = report(&["qm", "derive", "--poly", "E4^3 - E6^2", "--check-terms", "20"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["payload"]["derivative"], "E2*E4^3 - E2*E6^2");
    assert_eq!(r["payload"]["derivative_weight"], 14);
    assert_eq!(report(&["qm", "derive", "--poly", "E4^(", "--check-terms", "3"]).0, 2);
}
