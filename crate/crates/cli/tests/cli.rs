use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardyz"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("HARDYZ_CACHE_DIR").output().expect("spawn hardyz")
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let s = schema(schema_name);
    let compiled = jsonschema::JSONSchema::compile(&s).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{schema_name}: {msgs:?}");
}

fn json_ok(args: &[&str], result_schema: &str) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid("header", &doc["header"]);
    assert_valid(result_schema, &doc["result"]);
    doc
}

#[test]
fn zeros_csv_has_one_row_per_zero() {
    let out = run(&["zeros", "--t-max", "100", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# tool=hardyz version="));
    assert_eq!(lines.next().unwrap(), "gamma,z_prime,bracket_lo,bracket_hi");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 29);
    let first: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
    assert!((first - 14.134_725_141_734_693).abs() < 1e-9);
}

#[test]
fn zeros_json_matches_schema() {
    let doc = json_ok(&["zeros", "--t-max", "60"], "zeros");
    assert_eq!(doc["result"]["found"], 13);
    assert_eq!(doc["result"]["exact_count"], 13);
    assert_eq!(doc["header"]["command"], "zeros");
}

#[test]
fn constants_report_euler_gamma() {
    let doc = json_ok(&["constants", "--order", "6"], "constants");
    let g0 = doc["result"]["stieltjes"][0]["value"].as_f64().unwrap();
    assert!((g0 - 0.577_215_664_901_532_9).abs() < 1e-14);
    let eta0 = doc["result"]["eta"][0]["value"].as_f64().unwrap();
    assert!((eta0 - g0).abs() < 1e-10);
    let matches = &doc["result"]["hand_expansion"]["matches"];
    assert_eq!(matches[0], true);
    assert_eq!(matches[1], true);
}

#[test]
fn dmoment_below_first_zero_is_empty() {
    let doc = json_ok(&["dmoment", "--t-max", "14"], "moment_report");
    assert_eq!(doc["result"]["computed"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["result"]["parts"]["zero_count"].as_f64().unwrap(), 0.0);
}

#[test]
fn cmoment_matches_schema() {
    let doc = json_ok(&["cmoment", "--t-max", "100", "--k", "0"], "moment_report");
    let r = doc["result"]["computed"].as_f64().unwrap() / doc["result"]["predicted"].as_f64().unwrap();
    assert!((r - 1.0).abs() < 0.1, "{r}");
}

#[test]
fn compare_matches_schema() {
    let doc = json_ok(&["compare", "--t-grid", "100,200"], "compare");
    let summary = doc["result"]["summary"].as_array().unwrap();
    assert_eq!(summary.len(), 2);
    assert_eq!(summary[0]["zero_count"], 29);
    assert_eq!(summary[1]["zero_count"], 79);
}

#[test]
fn domain_errors_exit_with_two() {
    let out = run(&["cmoment", "--t-max", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(out.stderr.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_valid("error", &err);
    assert_eq!(err["error"]["operation"], "continuous_moment");
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_precision_exits_with_two() {
    let out = run(&["zeros", "--t-max", "100", "--abs-tol", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(out.stderr.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(err["error"]["module"], "config");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["zeros"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn out_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("z.json");
    let cache = dir.path().join("cache");
    let args = [
        "zeros",
        "--t-max",
        "50",
        "--out",
        out_path.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first = std::fs::read(&out_path).unwrap();
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read(&out_path).unwrap(), first);
}

#[test]
fn convsum_kinds() {
    for kind in ["lambda_star_d", "d_log_n", "one_star_log_log2_n"] {
        let out = run(&["convsum", "--x", "2000", "--kind", kind]);
        assert!(out.status.success(), "{kind}");
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_valid("header", &doc["header"]);
        let rel = doc["result"]["relative_difference"].as_f64().unwrap();
        assert!(rel.abs() < 0.05, "{kind}: {rel}");
    }
}
