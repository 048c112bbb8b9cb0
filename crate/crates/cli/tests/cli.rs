use std::process::{Command, Output};

use localglobal_cli::{emit_job, parse_job, run, JobSpec};
use serde_json::Value;

const SCHEMA_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema");

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localglobal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(format!("{SCHEMA_DIR}/{name}")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{doc:#}");
}

fn fixture_jobs() -> Vec<&'static str> {
    vec![
        r#"{"mode": "ec-detect", "curve": "17", "target": ["4", "9"], "gens": [["-2", "3"], ["2", "5"]], "config": {"prime_bound": 10000}}"#,
        r#"{"mode": "ec-detect", "curve": {"a": 0, "b": 17}, "target": ["1/4", "-33/8"], "gens": [[-2, 3], "2,5"]}"#,
        r#"{"mode": "ec-detect", "curve": 17, "target": ["2", "5"], "gens": [["-2", "3"]], "config": {"seed": 7, "threads": 2}}"#,
        r#"{"mode": "ec-detect", "curve": "17", "target": "inf"}"#,
        r#"{"mode": "mul-detect", "target": "6", "gens": ["2", "3"]}"#,
        r#"{"mode": "mul-detect", "target": 5, "gens": [2, 3]}"#,
        r#"{"mode": "mul-detect", "target": "-2", "gens": ["2"]}"#,
        r#"{"mode": "mul-detect", "target": "-8/27", "gens": ["-2/3"]}"#,
        r#"{"mode": "witness", "curve": "17", "points": [["-2", "3"], ["2", "5"]], "i": [1], "j": [2], "ell": 2, "m": 2, "config": {"prime_bound": 3000}}"#,
        r#"{"mode": "local-report", "curve": "-1,0", "target": "inf", "gens": [], "prime": 5}"#,
        r#"{"mode": "local-report", "curve": "17", "target": ["2", "5"], "gens": [["-2", "3"]], "prime": 23}"#,
        r#"{"mode": "torsion", "curve": "1"}"#,
        r#"{"mode": "torsion", "curve": {"a": "-1", "b": "0"}}"#,
    ]
}

#[test]
fn jobs_round_trip_and_match_schemas() {
    let job_schema = schema("job.schema.json");
    let out_schema = schema("output.schema.json");
    for text in fixture_jobs() {
        assert_valid(&job_schema, &serde_json::from_str(text).unwrap());
        let job: JobSpec = parse_job(text).unwrap();
        let emitted = emit_job(&job);
        assert_valid(&job_schema, &serde_json::from_str(&emitted).unwrap());
        assert_eq!(parse_job(&emitted).unwrap(), job, "{text}");
        assert_eq!(emit_job(&parse_job(&emitted).unwrap()), emitted);

        let out = run(&job).unwrap();
        let mut doc: Value = serde_json::from_str(&out.document).unwrap();
        assert_valid(&out_schema, &doc);
        doc.as_object_mut().unwrap().remove("timing");
        assert!(!out_schema.is_valid(&doc), "schema accepts a document without timing");
    }
}

#[test]
fn dependent_fixture_through_the_binary() {
    let out = bin(&[
        "ec-detect", "--curve", "17", "--target", "4,9", "--gen", "-2,3", "--gen", "2,5", "--prime-bound", "10000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "dependent");
    assert_eq!(doc["coefficients"], serde_json::json!([1, -1]));
    assert!(doc["timing"].is_null());
    assert!(!out.stderr.is_empty());
}

#[test]
fn mul_fixture_and_json_only() {
    let out = bin(&["mul-detect", "--target", "6", "--gen", "2", "--gen", "3", "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "dependent");
    assert_eq!(doc["coefficients"], serde_json::json!([1, 1]));
}

#[test]
fn input_errors_exit_with_two() {
    let out = bin(&["mul-detect", "--target", "3/0", "--gen", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero denominator"));
    assert!(out.stdout.is_empty());

    let out = bin(&["ec-detect", "--curve", "17", "--target", "4,8", "--gen", "-2,3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("target") && err.contains("(4,8)"), "{err}");

    let out = bin(&["local-report", "--curve", "17", "--prime", "17", "--target", "inf"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["ec-detect", "--curve", "0", "--target", "inf"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["mul-detect", "--target", "5", "--gen", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["run", "/nonexistent/job.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_the_job_file() {
    let dir = std::env::temp_dir().join(format!("localglobal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.json");
    std::fs::write(&path, fixture_jobs()[0]).unwrap();
    let out = bin(&["run", path.to_str().unwrap(), "--seed", "99", "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["seed"], 99);
    assert_eq!(doc["config"]["prime_bound"], 10000);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn print_job_matches_emit() {
    let out = bin(&["ec-detect", "--curve", "17", "--target", "2,5", "--gen", "-2,3", "--print-job", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let job = parse_job(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(job.config.seed, Some(3));
    assert_eq!(emit_job(&job).trim(), std::str::from_utf8(&out.stdout).unwrap().trim());
}

#[test]
fn thread_count_does_not_change_documents() {
    for target in ["4,9", "8,23", "1/4,-33/8", "-2,-3"] {
        let run_with = |threads: &str| {
            bin(&[
                "ec-detect", "--curve", "17", "--target", target, "--gen", "-2,3", "--gen", "2,5", "--prime-bound",
                "10000", "--threads", threads, "--json-only",
            ])
            .stdout
        };
        assert_eq!(run_with("1"), run_with("8"), "target {target}");
    }
}
