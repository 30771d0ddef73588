use std::path::PathBuf;
use std::process::{Command, Output};

use keypoly::session::{parse_poly, parse_session};
use keypoly::Sign;
use serde_json::Value;

fn session(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../sessions").join(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keypoly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn temp_file(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("keypoly-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn walkthrough_passes_and_is_deterministic() {
    let a = run(&["walkthrough"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let text = stdout(&a);
    assert!(text.trim_end().ends_with("25 of 25 checks passed"), "{text}");
    assert!(!text.contains("FAIL"));
    assert_eq!(a.stdout, run(&["walkthrough"]).stdout);
}

#[test]
fn walkthrough_json_mirrors_the_checks() {
    let v = json(&["walkthrough"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["trunc"], 64);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 25);
    let text = stdout(&run(&["walkthrough"]));
    for c in checks {
        assert_eq!(c["pass"], Value::Bool(true));
        let line = format!("ok   {} = {}", c["name"].as_str().unwrap(), c["actual"].as_str().unwrap());
        assert!(text.contains(&line), "missing {line}");
    }
}

#[test]
fn short_truncation_is_a_math_error() {
    let o = run(&["--trunc", "24", "walkthrough"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[truncation-exceeded]"), "{}", stderr(&o));
}

#[test]
fn parse_errors_carry_positions() {
    let bad = temp_file("bad.kp", "assume u > 2\nx = t^\n");
    let o = run(&["value", "--curvette", &bad, "--poly", "x"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).trim_end(), "error[syntax-error]: syntax error at line 2, column 7: malformed exponent");

    let o = run(&["value", "--curvette", &session("ajm.kp"), "--poly", "x*w"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[unknown-variable]"));
    let _ = std::fs::remove_file(bad);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["value", "--poly", "x"]).status.code(), Some(2));
    assert_eq!(run(&["value", "--curvette", "/nonexistent/file", "--poly", "x"]).status.code(), Some(2));
    let ajm = session("ajm.kp");
    let o = run(&["sep-ideal", "--alpha", &ajm, "--beta", &ajm, "--exact-params", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]"));
    assert_eq!(run(&["--trunc", "1", "walkthrough"]).status.code(), Some(2));
}

#[test]
fn json_errors_have_codes() {
    let o = run(&["--json", "--trunc", "24", "walkthrough"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["code"], "truncation-exceeded");
}

#[test]
fn value_of_q4() {
    let v = json(&["value", "--curvette", &session("ajm.kp"), "--poly", "y^2 - x*z"]);
    assert_eq!((v["value"].as_str(), v["lead"].as_str(), v["sign"].as_str()), (Some("21"), Some("2*u - 1"), Some("+")));
}

#[test]
fn value_zero_to_truncation() {
    let cusp = temp_file("cusp.kp", "x = t^2\ny = t^3\n");
    let o = run(&["value", "--curvette", &cusp, "--poly", "y^2 - x^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value: zero to truncation order 64"));
    let v = json(&["--trunc", "30", "value", "--curvette", &cusp, "--poly", "y^2 - x^3"]);
    assert_eq!((&v["zero_to_truncation"], &v["trunc"]), (&Value::Bool(true), &Value::from("30")));
    assert!(v["value"].is_null());
    let _ = std::fs::remove_file(cusp);
}

#[test]
fn semigroup_indices() {
    let v = json(&["semigroup", "--gens", "6,10,14,21,25,29", "--count", "11"]);
    let e = v["elements"].as_array().unwrap();
    assert_eq!((e[7].as_str(), e[10].as_str()), (Some("21"), Some("25")));
}

#[test]
fn roots_table_matches_json() {
    let args = ["roots", "--curvette", &session("ajm.kp"), "--level", "33"];
    let text = stdout(&run(&args));
    let v = json(&args);
    let roots = v["roots"].as_array().unwrap();
    let labels: Vec<&str> = roots.iter().map(|r| r["label"].as_str().unwrap()).collect();
    assert_eq!(&labels[..6], &["x", "y", "z", "Q4", "Q5", "Q6"]);
    let values: Vec<&str> = roots.iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(&values[..6], &["6", "10", "14", "21", "25", "29"]);
    for (r, line) in roots.iter().zip(text.lines().skip(2)) {
        let cells: Vec<&str> = line.split("  ").map(str::trim).filter(|c| !c.is_empty()).collect();
        assert_eq!(cells[0], r["index"].to_string());
        assert_eq!(cells[1], r["label"].as_str().unwrap());
        assert_eq!(cells[2], r["poly"].as_str().unwrap());
        assert_eq!(cells[3], r["value"].as_str().unwrap());
    }
}

#[test]
fn standard_form_steps() {
    let o = run(&[
        "--show-steps",
        "standard-form",
        "--curvette",
        &session("ajm.kp"),
        "--poly",
        "x^3 + y^3 + z^3",
        "--level",
        "31",
    ]);
    let text = stdout(&o);
    assert!(text.contains("rule 1: y^3 -> y*Q4 + x*y*z  gives  x^3 + x*y*z + y*Q4 + z^3"), "{text}");
    assert!(text.contains("standard form at level 31: x^3 + x^5 + y*Q4 + x*Q5 + z^3"));
    let v = json(&["standard-form", "--curvette", &session("ajm.kp"), "--poly", "x^3 + y^3 + z^3", "--level", "31"]);
    let vals: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["18", "30", "31", "31", "42"]);
    assert!(v.get("steps").is_none());
}

#[test]
fn separating_value_generic_and_exact() {
    let ajm = session("ajm.kp");
    let v = json(&["sep-ideal", "--alpha", &ajm, "--beta", &ajm]);
    assert_eq!((v["separating_value"].as_str(), v["kind"].as_str()), (Some("31"), Some("sign-order-mismatch")));
    assert_eq!(v["witness"]["error"]["code"], "not-found-within-budget");

    let v = json(&["sep-ideal", "--alpha", &ajm, "--beta", &ajm, "--exact-params", "3,4"]);
    assert_eq!(v["separating_value"], "31");
    assert_eq!(v["leads_alpha"], serde_json::json!(["5", "4"]));
    assert_eq!(v["leads_beta"], serde_json::json!(["7", "5"]));
    // the witness changes sign between the two points
    let cfg = parse_session(&std::fs::read_to_string(&ajm).unwrap()).unwrap();
    let (a, b) = (cfg.curvette(Some("u3"), None).unwrap(), cfg.curvette(Some("u4"), None).unwrap());
    let w = parse_poly(v["witness"]["poly"].as_str().unwrap(), a.vars()).unwrap();
    let signs = (a.sign_at(&w).unwrap(), b.sign_at(&w).unwrap());
    assert!(matches!(signs, (Sign::Pos, Sign::Neg) | (Sign::Neg, Sign::Pos)), "{signs:?}");
}

#[test]
fn connected_set_contains_both_points() {
    let ajm = session("ajm.kp");
    for variant in ["C", "Cprime"] {
        let v = json(&[
            "connected-set",
            "--alpha",
            &format!("{ajm}#u3"),
            "--beta",
            &format!("{ajm}#u4"),
            "--poly",
            "x^3 + y^3 + z^3",
            "y^2 - x*z",
            "--variant",
            variant,
        ]);
        assert_eq!((&v["alpha_member"], &v["beta_member"]), (&Value::Bool(true), &Value::Bool(true)));
        assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn cusp_pair_blowups() {
    let cusp = session("cusp.kp");
    let v = json(&["blowup", "--pair", &cusp, &format!("{cusp}#other"), "--max-steps", "8"]);
    assert_eq!(v["stop"], "resolved");
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), v["blowups"].as_u64().unwrap() as usize + 1);
    assert!(steps.iter().all(|s| s["prediction_holds"] == Value::Bool(true)));
    let last = steps.last().unwrap();
    assert_eq!(last["value"], last["maximal_value"]);

    let v = json(&["blowup", "--pair", &format!("{cusp}#free"), "--max-steps", "8"]);
    assert_eq!(v["stop"], "resolved");
}

#[test]
fn chart_table_for_the_cusp() {
    let v = json(&["blowup", "--pair", &session("cusp.kp"), "--chart-table", "--max-steps", "8"]);
    assert!(v.get("steps").is_none());
    let rows = v["chart_table"].as_array().unwrap();
    let charts: Vec<u64> = rows.iter().map(|r| r["chart"].as_u64().unwrap()).collect();
    assert!(charts.windows(2).all(|w| w[0] < w[1]), "{charts:?}");
    assert_eq!(rows[2]["companion"], "x^-1*y");
}

#[test]
fn dual_graph_script() {
    let o = run(&["dual-graph", "--script", &session("chain.dg"), "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("bamboo: yes").count(), 4);
    assert!(text.contains("graph dual {"));
    assert!(text.lines().all(|l| l == l.trim_end()));

    let bad = temp_file("bad.dg", "init U\ncase1 0 7\n");
    let o = run(&["dual-graph", "--script", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[invalid-event]: invalid dual-graph event: line 2"), "{}", stderr(&o));
    let _ = std::fs::remove_file(bad);
}
