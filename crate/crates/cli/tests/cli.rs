use std::process::{Command, Output};

fn spinon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinon")).args(args).output().expect("spawn spinon")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ground_json_is_deterministic() {
    let a = spinon(&["ground", "--M", "8"]);
    let b = spinon(&["ground", "--M", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 4);
    assert!(v["residual"].as_f64().unwrap() < 1e-30);
}

#[test]
fn excite_csv_rows() {
    let o = spinon(&["excite", "--M", "10", "--slots", "2,4", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("M,kind,item,index,value,bits_used"));
    assert_eq!(text.lines().filter(|l| l.contains(",root,")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.contains(",hole,")).count(), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(spinon(&["ground", "--M", "7"]).status.code(), Some(2));
    assert_eq!(spinon(&["excite", "--M", "8", "--slots", "0,2"]).status.code(), Some(2));
    assert_eq!(spinon(&["excite", "--M", "8", "--slots", "3,3"]).status.code(), Some(2));
    assert_eq!(spinon(&["validate", "--M", "16"]).status.code(), Some(2));
    assert_eq!(spinon(&["tdl", "--dmu", "1", "--M", "8"]).status.code(), Some(2));
    assert_eq!(spinon(&["ff", "--M", "8", "--slots", "1,2", "--route", "nope"]).status.code(), Some(2));
    assert_eq!(spinon(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn all_routes_evaluate() {
    let mut values = Vec::new();
    for route in ["det", "cauchy", "sinh"] {
        let o = spinon(&["ff", "--M", "8", "--slots", "2,4", "--route", route, "--format", "json"]);
        assert!(o.status.success(), "route {route}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        values.push(v[0]["value"].as_f64().unwrap());
    }
    assert!(values.iter().all(|v| v.is_finite() && *v > 0.0));
    assert!((values[1] / values[0] - 1.0).abs() < 0.1);
}

#[test]
fn tdl_zero_separation() {
    let o = spinon(&["tdl", "--dmu", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["closed_form"].as_f64(), Some(0.0));
    assert_eq!(v[0]["zero_by_convention"].as_bool(), Some(true));
}

#[test]
fn converge_keeps_row_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conv.csv");
    let o = spinon(&["converge", "--M-list", "12,8,10", "--jobs", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    let ms: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ms, ["12", "8", "10"]);
}

#[test]
fn validate_with_cache_survives_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = spinon(&["validate", "--M", "8", "--cache", d]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let cached = dir.path().join("ed_M8_sz0.json");
    assert!(cached.exists());
    std::fs::write(&cached, b"{ not json").unwrap();
    let second = spinon(&["validate", "--M", "8", "--cache", d]);
    assert!(second.status.success());
    assert!(serde_json::from_slice::<serde_json::Value>(&std::fs::read(&cached).unwrap()).is_ok());
    assert!(!stdout(&second).contains(",false,"));
}
