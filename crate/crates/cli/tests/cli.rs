use std::process::{Command, Output};

use serde_json::Value;
use subsum_core::cn::{build_cn, DEFAULT_CAP};
use subsum_core::rational::parse_rational;
use subsum_core::spec_format::preset;
use subsum_core::IntervalUnion;

fn subsums(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsums")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn classify_thirds_is_cantor() {
    let v = json_of(&subsums(&["classify", "--seq", "thirds"]));
    assert_eq!(v["kind"], "CantorSet");
    assert_eq!(v["hull"], serde_json::json!(["0", "1/2"]));
}

#[test]
fn classify_halves_is_one_interval() {
    let v = json_of(&subsums(&["classify", "--seq", "halves"]));
    assert_eq!(v["kind"], "FiniteUnion");
    assert_eq!(v["component_count"], 1);
    assert_eq!(v["hull"], serde_json::json!(["0", "1"]));
}

#[test]
fn classify_undetermined_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    std::fs::write(
        &path,
        r#"{"tail": {"kind": "interleave", "parts": [
            {"tail": {"kind": "geometric", "a": 1, "rho": "1/2"}},
            {"tail": {"kind": "geometric", "a": 1, "rho": "1/3"}}]}}"#,
    )
    .unwrap();
    let v = json_of(&subsums(&["classify", "--seq", path.to_str().unwrap()]));
    assert_eq!(v["kind"], "Undetermined");
}

#[test]
fn cn_component_count() {
    let out = subsums(&["cn", "--seq", "ratios-2-5-3-5", "--depth", "6", "--format", "json"]);
    assert_eq!(json_of(&out)["components"], 23);
}

#[test]
fn cn_json_round_trips() {
    let out = subsums(&["cn", "--seq", "gn", "--depth", "8", "--format", "json"]);
    let v = json_of(&out);
    let parsed: IntervalUnion = serde_json::from_value(v["intervals"].clone()).unwrap();
    let spec = preset("gn").unwrap().as_single().unwrap().clone();
    assert_eq!(parsed, build_cn(&spec, 8, DEFAULT_CAP).unwrap().fattened);

    let text = subsums(&["cn", "--seq", "gn", "--depth", "8"]);
    let parsed = IntervalUnion::from_text(&String::from_utf8(text.stdout).unwrap()).unwrap();
    assert_eq!(parsed, build_cn(&spec, 8, DEFAULT_CAP).unwrap().fattened);
}

#[test]
fn oracle_agrees_and_reports_limits() {
    let out = subsums(&["oracle", "--seq", "kenyon", "--depth", "10", "--format", "json"]);
    assert_eq!(json_of(&out)["agree"], true);
    let out = subsums(&["oracle", "--seq", "thirds", "--depth", "21"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_subsums"))
        .args(["cn", "--seq", "thirds", "--depth", "8"])
        .env("SUBSUMS_CAP", "16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(subsums(&["classify", "--seq", "thirds", "--bogus"]).status.code(), Some(1));
    assert_eq!(subsums(&["fill", "--seq", "harmonic", "--target", "0.5", "--eps", "1/10"]).status.code(), Some(1));
    assert_eq!(subsums(&["classify", "--seq", "no-such-preset"]).status.code(), Some(1));
}

#[test]
fn fill_text_output() {
    let out = subsums(&["fill", "--seq", "harmonic", "--target", "5/6", "--eps", "1/1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("runs: 2..3\n"));
    assert!(text.contains("achieved: 5/6\n"));
}

#[test]
fn presets_match_listed_terms() {
    let v = json_of(&subsums(&["presets", "--format", "json"]));
    let expected: [(&str, [&str; 6]); 6] = [
        ("harmonic", ["1", "1/2", "1/3", "1/4", "1/5", "1/6"]),
        ("gn", ["3/4", "2/4", "3/16", "2/16", "3/64", "2/64"]),
        ("kenyon", ["6/4", "1/4", "6/16", "1/16", "6/64", "1/64"]),
        ("thirds", ["1/3", "1/9", "1/27", "1/81", "1/243", "1/729"]),
        ("halves", ["1/2", "1/4", "1/8", "1/16", "1/32", "1/64"]),
        ("ratios-2-5-3-5", ["2/5", "9/25", "12/125", "54/625", "72/3125", "324/15625"]),
    ];
    for (name, terms) in expected {
        let row = v.as_array().unwrap().iter().find(|r| r["name"] == name).unwrap();
        let got: Vec<_> = row["first_terms"].as_array().unwrap().iter().map(|t| parse_rational(t.as_str().unwrap()).unwrap()).collect();
        let want: Vec<_> = terms.iter().map(|t| parse_rational(t).unwrap()).collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn sweep_and_render_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("map.svg");
    let csv = dir.path().join("map.csv");
    let out = subsums(&["sweep", "--resolution", "4", "--out", svg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("alpha,beta,lambda,verdict,certificate,feasible\n"));
    assert_eq!(table.lines().count(), 1 + 16 + 1);

    let bars = dir.path().join("bars.svg");
    let out = subsums(&["render", "--seq", "thirds", "--depth", "4", "--out", bars.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&bars).unwrap().matches("<title>").count(), 16);
}
