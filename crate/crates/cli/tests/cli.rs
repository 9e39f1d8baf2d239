use std::process::{Command, Output};

use serde_json::Value;
use skein_cli::is_cached;

fn skein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skein")).args(args).env_remove("SKEIN_MANIFOLD").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn schema() -> Value {
    serde_json::from_str(include_str!("../report.schema.json")).expect("schema is JSON")
}

fn check_against_schema(report: &Value) {
    let schema = schema();
    let props = schema["properties"].as_object().unwrap();
    let obj = report.as_object().expect("report is an object");
    for k in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(k.as_str().unwrap()), "missing {k}");
    }
    for (k, v) in obj {
        let p = props.get(k).unwrap_or_else(|| panic!("unexpected key {k}"));
        match p.get("type").and_then(Value::as_str) {
            Some("string") => assert!(v.is_string(), "{k}"),
            Some("integer") => assert!(v.is_u64(), "{k}"),
            Some("boolean") => assert!(v.is_boolean(), "{k}"),
            Some("number") => assert!(v.is_number(), "{k}"),
            Some("array") => assert!(v.as_array().unwrap().iter().all(Value::is_string), "{k}"),
            Some("object") => assert!(v.as_object().unwrap().values().all(|t| t.as_f64().is_some_and(|t| t >= 0.0)), "{k}"),
            _ => assert!(p["enum"].as_array().unwrap().contains(v), "{k}"),
        }
    }
    let hash = obj["config_hash"].as_str().unwrap();
    assert!(hash.len() == 64 && hash.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()));
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn reports_follow_the_schema() {
    let out = skein(&["--manifold", "lens(3,1)", "--engine", "both", "--emit-basis"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    check_against_schema(&r);
    assert_eq!(r["dimension"], 2);
    assert_eq!(r["basis"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic_apart_from_timings() {
    let args = ["--manifold", "lens(5,2)#s3", "--engine", "fg", "--seed", "7"];
    let (a, b) = (json(&skein(&args)), json(&skein(&args)));
    assert_eq!(without_timings(a), without_timings(b));
}

#[test]
fn unstabilized_runs_exit_with_two() {
    let out = skein(&["--manifold", "lens(2,1)", "--engine", "fg", "--window", "40", "--max-degree", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["stabilized"], false);
}

#[test]
fn bad_input_exits_with_one() {
    let out = skein(&["--manifold", "lens(4,2)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at 0"));
    assert_eq!(skein(&["--manifold", "lens(2 1)"]).status.code(), Some(1));
    assert_eq!(skein(&["--manifold", "splice(2,T)"]).status.code(), Some(1));
    assert_eq!(skein(&["--manifold", "splice(2,id)", "--engine", "fg"]).status.code(), Some(1));
    assert_eq!(skein(&["--manifold", "splice(3,@/nonexistent/gluing.txt)"]).status.code(), Some(1));
    assert_eq!(skein(&["--manifold", "s3", "--samples", "0"]).status.code(), Some(1));
}

#[test]
fn environment_sets_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_skein"))
        .env("SKEIN_MANIFOLD", "s2xs1")
        .env("SKEIN_ENGINE", "fg")
        .env("SKEIN_FORMAT", "table")
        .env("SKEIN_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("dimension") && l.ends_with(" 1")));
    assert!(text.lines().any(|l| l.starts_with("stabilized") && l.ends_with("true")));
    assert!(text.lines().any(|l| l.starts_with("seed") && l.ends_with("11")));
    assert!(text.lines().any(|l| l.starts_with("engine") && l.ends_with("fg")));
}

#[test]
fn cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args = ["--manifold", "s3#lens(2,1)", "--cache", path];
    assert!(!is_cached(dir.path(), 1, 6));
    let cold = skein(&args);
    assert_eq!(cold.status.code(), Some(0), "{}", String::from_utf8_lossy(&cold.stderr));
    assert!(is_cached(dir.path(), 1, 6));
    let warm = skein(&args);
    assert_eq!(without_timings(json(&cold)), without_timings(json(&warm)));
    assert_eq!(json(&warm)["dimension"], 2);
}

#[test]
fn identity_splice_in_genus_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = skein(&["--manifold", "splice(2,id)", "--max-degree", "4", "--cache", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["dimension"], 1);
    assert!(is_cached(dir.path(), 2, 4));
}

#[test]
fn gluing_files_round_trip() {
    let engine = skein_core::heegaard::GenusOneEngine::new().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(&path, format!("# S\n{}", engine.twists().s)).unwrap();
    let out = skein(&["--manifold", &format!("splice(1,@{})", path.display()), "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["dimension"], 1);
}
