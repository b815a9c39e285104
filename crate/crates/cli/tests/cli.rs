use std::process::{Command, Output};

use serde_json::Value;
use ssav::report::{EnumerationReport, FieldRecord};

fn ssav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn enumerate_lists_three_classes_over_f2() {
    let o = ssav(&["enumerate", "--p", "2", "--n", "1", "--g", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["q"]["p"], 2);
    assert_eq!(v["g"], 1);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    let report = EnumerationReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.classes.len(), 3);
    assert_eq!(EnumerationReport::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn formats_carry_the_same_data() {
    for (p, n, g) in [("2", "1", "2"), ("3", "3", "3"), ("7", "1", "4")] {
        let args = |f: &'static str| ["--format", f, "enumerate", "--p", p, "--n", n, "--g", g];
        let j = ssav(&args("json"));
        let c = ssav(&args("csv"));
        let m = ssav(&args("md"));
        assert!([&j, &c, &m].iter().all(|o| code(o) == 0));
        let from_json = EnumerationReport::from_json(&stdout(&j)).unwrap();
        let q = FieldRecord {
            p: p.parse().unwrap(),
            n: n.parse().unwrap(),
        };
        let g = g.parse().unwrap();
        assert_eq!(EnumerationReport::from_csv(&stdout(&c), q.clone(), g).unwrap(), from_json);
        assert_eq!(EnumerationReport::from_markdown(&stdout(&m), q, g).unwrap(), from_json);
    }
}

#[test]
fn dim_resolves_a_simple_class() {
    let o = ssav(&["dim", "--p", "3", "--n", "1", "--poly", "9,0,3,0,1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["simple"], true);
    assert_eq!(v["g"], 2);
    assert_eq!(v["e"], 1);
    assert_eq!(v["local"]["d"], 4);
}

#[test]
fn dim_splits_a_product() {
    // (X^2 + 2)(X^2 + 2X + 2) is not simple.
    let o = ssav(&["dim", "--p", "2", "--n", "1", "--poly", "4,4,4,2,1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["simple"], false);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn dim_rejects_ordinary_polynomials() {
    let o = ssav(&["dim", "--p", "2", "--n", "1", "--poly", "2,1,1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["error"]["exit_code"], 2);
    let o = ssav(&["--format", "csv", "dim", "--p", "2", "--n", "1", "--poly", "2,1,1"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn minpoly_of_sqrt2_times_i() {
    let o = ssav(&["minpoly", "--p", "2", "--n", "1", "--order", "4", "--exp", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["classes"][0]["P"], serde_json::json!([2, 0, 1]));
}

#[test]
fn verify_paper_finds_nothing_in_dimension_seven() {
    let o = ssav(&["verify-paper", "--g", "7", "--primes", "2,3,5,7,11,13", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["all_matched"], true);
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["matched"], 0);
        assert!(r["missing_from_enumeration"].as_array().unwrap().is_empty());
        assert!(r["missing_from_paper"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_paper_reports_disagreement_off_the_data_stream() {
    let o = ssav(&["--format", "csv", "verify-paper", "--g", "5", "--primes", "11"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    let o = ssav(&["verify-paper", "--g", "5", "--primes", "11"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "negative");
    assert_eq!(v["error"]["result"]["all_matched"], false);
}

#[test]
fn modtest_verdicts() {
    let o = ssav(&["modtest", "--poly", "z^6-19*q*z^4+83*q^2*z^2-q^3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "ProvenNoRoot");
    let o = ssav(&["modtest", "--poly", "z^2-6*q"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["error"]["result"]["verdict"], "Inconclusive");
}

#[test]
fn syntax_errors_are_usage_errors() {
    let o = ssav(&["modtest", "--poly", "z^^2"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 2"));
    let o = ssav(&["--format", "md", "modtest", "--poly", "z^^2"]);
    assert_eq!(code(&o), 64);
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_flags_exit_64() {
    for args in [
        &["enumerate", "--p", "2", "--n", "1"][..],
        &["enumerate", "--p", "2", "--n", "1", "--g", "0"],
        &["frobnicate"],
        &["--format", "xml", "enumerate", "--p", "2", "--n", "1", "--g", "1"],
    ] {
        let o = ssav(args);
        assert_eq!(code(&o), 64, "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn caps_are_refusals() {
    let o = ssav(&["enumerate", "--p", "2", "--n", "1", "--g", "17"]);
    assert_eq!(code(&o), 65);
    assert_eq!(json(&o)["error"]["kind"], "refused");
    let o = ssav(&["count-curve", "--n", "5", "--f", "x^3", "--depth", "6"]);
    assert_eq!(code(&o), 65);
}

#[test]
fn domain_errors_exit_2() {
    // even exponent, composite p
    for args in [
        &["enumerate", "--p", "2", "--n", "2", "--g", "1"][..],
        &["enumerate", "--p", "6", "--n", "1", "--g", "1"],
        &["count-curve", "--p", "3", "--n", "1", "--f", "x^3"],
    ] {
        let o = ssav(args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn count_curve_reproduces_a_table_row() {
    let o = ssav(&[
        "count-curve", "--p", "2", "--n", "5", "--f", "x^9 + a^2*x^5 + a^9*x^3", "--modulus", "100101",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["genus"], 4);
    assert_eq!(v["within_weil_bound"], true);
    assert_eq!(v["roundtrip_ok"], true);
    assert_eq!(v["P"].as_array().unwrap().len(), 9);
}

#[test]
fn count_curve_elliptic() {
    let o = ssav(&["count-curve", "--n", "1", "--f", "x^3", "--depth", "4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["counts"], serde_json::json!([3, 9, 9, 9]));
    assert_eq!(v["P"], serde_json::json!([2, 0, 1]));
}
