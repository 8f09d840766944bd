use clap::Parser;
use fzeta_cli::config::RunConfig;
use fzeta_cli::csvio::{read_dims_csv, read_tube_csv, write_csv, TubeRow, DIM_COLUMNS, TUBE_COLUMNS};
use fzeta_cli::run;
use proptest::prelude::*;
use std::process::Command;

fn exec(args: &[&str]) -> (Result<(), fzeta_cli::error::CliError>, Vec<u8>) {
    let cfg = RunConfig::try_parse_from(std::iter::once("fzeta").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let r = run(&cfg, &mut out);
    (r, out)
}

fn ok(args: &[&str]) -> Vec<u8> {
    let (r, out) = exec(args);
    r.unwrap();
    out
}

#[test]
fn segment_tube_value() {
    let rows = read_tube_csv(&ok(&["tube", "--entry", "segment", "--t", "0.25", "--format", "csv"])[..]).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].formula - 1.5).abs() < 1e-12);
    assert!((rows[0].oracle - 1.5).abs() < 1e-15);
}

#[test]
fn tube_csv_header() {
    let out = String::from_utf8(ok(&["tube", "--entry", "gasket", "--t-min", "1e-3", "--t-max", "0.1", "--t-count", "4", "--format", "csv"])).unwrap();
    assert_eq!(out.lines().next().unwrap(), TUBE_COLUMNS.join(","));
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn cantor_string_dims() {
    let out = ok(&["dims", "--entry", "cantor_string", "--im-max", "20", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&out).lines().next().unwrap(), DIM_COLUMNS.join(","));
    let rows = read_dims_csv(&out[..]).unwrap();
    let d = 2f64.ln() / 3f64.ln();
    let p = 2.0 * std::f64::consts::PI / 3f64.ln();
    assert_eq!(rows.len(), 8);
    for k in -3i32..=3 {
        assert!(rows.iter().any(|r| (r.re_omega - d).abs() < 1e-10 && (r.im_omega - k as f64 * p).abs() < 1e-8), "k={k}");
    }
    let zero = rows.iter().find(|r| r.re_omega.abs() < 1e-10).unwrap();
    assert!((zero.res_re + 2.0).abs() < 1e-9);
    let main = rows.iter().find(|r| (r.re_omega - d).abs() < 1e-10 && r.im_omega.abs() < 1e-10).unwrap();
    assert!(main.res_re > 0.0 && main.res_im.abs() < 1e-12);
}

#[test]
fn cantor_graph_report() {
    let v: serde_json::Value = serde_json::from_slice(&ok(&["report", "--entry", "cantor_graph", "--format", "json"])).unwrap();
    let r = &v["report"];
    assert!((r["dimension"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((r["content"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert_eq!(r["measurable"], "measurable");
    assert_eq!(r["classification"]["class"], "strictly_subcritical");
    assert!((r["classification"]["d"].as_f64().unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-9);
}

#[test]
fn zeta_methods_agree() {
    let get = |m: &str| -> f64 {
        let v: serde_json::Value =
            serde_json::from_slice(&ok(&["zeta", "--entry", "gasket", "--s", "2.3,0", "--method", m, "--format", "json"])).unwrap();
        v["value_re"].as_f64().unwrap()
    };
    let closed = get("closed");
    assert!((get("quadrature") - closed).abs() < 1e-8 * closed.abs());
}

#[test]
fn exit_codes() {
    let (r, _) = exec(&["tube", "--entry", "no_such_entry", "--t", "0.1"]);
    assert_eq!(r.unwrap_err().exit_code(), 2);
    let (r, _) = exec(&["tube", "--entry", "segment"]);
    assert_eq!(r.unwrap_err().exit_code(), 2);
    let (r, _) = exec(&["zeta", "--entry", "segment", "--s", "abc"]);
    assert_eq!(r.unwrap_err().exit_code(), 2);
    let (r, _) = exec(&["zeta", "--entry", "gasket", "--s", "1.0,0"]);
    assert_eq!(r.unwrap_err().exit_code(), 3);
    let (r, out) = exec(&["validate", "--entry", "half_square", "--t-count", "8", "--format", "csv"]);
    assert_eq!(r.unwrap_err().exit_code(), 4);
    assert_eq!(read_tube_csv(&out[..]).unwrap().len(), 8);
    let (r, _) = exec(&["validate", "--entry", "gasket", "--t-count", "8"]);
    assert!(r.is_ok());
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_fzeta");
    let st = Command::new(bin).args(["tube", "--entry", "segment", "--t", "0.25"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let st = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Command::new(bin).args(["validate", "--entry", "half_square", "--t-count", "6"]).output().unwrap();
    assert_eq!(st.status.code(), Some(4));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["list", "--format", "json"][..],
        &["dims", "--entry", "gasket", "--format", "csv"][..],
        &["zeta", "--entry", "gasket", "--s", "2.2,1", "--method", "mc", "--samples", "20000", "--seed", "7"][..],
        &["validate", "--entry", "spray", "--t-count", "10", "--format", "csv"][..],
    ] {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let p = path.to_str().unwrap();
    let direct = ok(&["tube", "--entry", "cantor_string", "--t", "0.01", "--format", "csv"]);
    let none = ok(&["tube", "--entry", "cantor_string", "--t", "0.01", "--format", "csv", "--out", p]);
    assert!(none.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct);
}

#[test]
fn param_override_changes_entry() {
    let v: serde_json::Value =
        serde_json::from_slice(&ok(&["report", "--entry", "ss_nest", "--param", "a=0.25", "--format", "json"])).unwrap();
    assert!((v["report"]["dimension"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let (r, _) = exec(&["report", "--entry", "ss_nest", "--param", "bogus=1"]);
    assert_eq!(r.unwrap_err().exit_code(), 2);
}

#[test]
fn user_catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.json");
    let text = r#"{"schema_version":1,"entries":[{"name":"my_string","description":"ratio 1/4 Cantor-type string",
        "descriptor":"__D__"}]}"#;
    let builtin: serde_json::Value = serde_json::from_str(include_str!("../catalog.json")).unwrap();
    let desc = builtin["entries"].as_array().unwrap().iter().find(|e| e["name"] == "a_string").unwrap()["descriptor"].clone();
    std::fs::write(&path, text.replace("\"__D__\"", &desc.to_string())).unwrap();
    let p = path.to_str().unwrap();
    let out = String::from_utf8(ok(&["list", "--catalog", p, "--format", "csv"])).unwrap();
    assert!(out.lines().any(|l| l.starts_with("my_string,")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tube_csv_round_trip(rows in proptest::collection::vec(
        (1e-12f64..1.0, -1e3f64..1e3, -1e3f64..1e3, 0f64..1.0, 0f64..1.0, 0f64..1e3), 0..20)) {
        let rows: Vec<TubeRow> = rows.into_iter().map(|(t, formula, oracle, abs_err, rel_err, tail_bound)|
            TubeRow { t, formula, oracle, abs_err, rel_err, tail_bound }).collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let back = read_tube_csv(&buf[..]).unwrap();
        prop_assert_eq!(back, rows);
    }
}
