use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tsk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsk"))
        .args(args)
        .env_remove("TSK_MAX_ORDER")
        .env_remove("TSK_BUDGET")
        .env_remove("TSK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = tsk(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn parse_group_spec_examples() {
    let (v, code) = json(&["info", "SD:4"]);
    assert_eq!(code, 0);
    assert_eq!(v["group"]["family"], "semidihedral");
    assert_eq!(v["group"]["order"], 16);
    let (v, _) = json(&["info", "AGL:2:3"]);
    assert_eq!(v["group"]["order"], 56);

    let out = tsk(&["info", "SD:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n >= 4"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let out = tsk(&["info", "XY:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position 0"));
    let out = tsk(&["info", "AGL:2:x"]);
    assert!(stderr(&out).contains("position 6"), "{}", stderr(&out));
}

#[test]
fn width_examples() {
    for (spec, w) in [("SD:5", 8), ("M:5", 8), ("C:8", 3)] {
        let (v, code) = json(&["width", spec]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["width"], w, "{spec}");
        assert_eq!(v["results"]["cross_check"]["m_complete"], w);
        assert_eq!(v["results"]["cross_check"]["agrees"], true);
        assert_eq!(v["results"]["meet_irreducible_classes"].as_array().unwrap().len(), w);
    }
    // no cross-check past order 64
    let (v, _) = json(&["width", "AGL:2:4"]);
    assert!(v["results"]["cross_check"].is_null());
}

#[test]
fn capacity_errors_name_the_cap() {
    let out = tsk(&["width", "SD:5", "--max-order", "16"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("limit is 16"), "{}", stderr(&out));
    let out = tsk(&["width", "SD:5", "--max-subgroups", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("limit is 10"), "{}", stderr(&out));
}

#[test]
fn complexity_examples() {
    let (v, code) = json(&["complexity", "D:9"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], 4);
    assert_eq!(v["results"]["bound"], "exact");
    assert_eq!(v["certificates"][0]["arrows"].as_array().unwrap().len(), 4);

    let (v, _) = json(&["complexity", "SD:4"]);
    assert_eq!(v["results"]["value"], 7);
    assert_eq!(v["results"]["bound"], "exact");

    let (v, code) = json(&["complexity", "SD:6", "--mode", "rainbow"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], 12);
    assert_eq!(v["results"]["bound"], "lower");

    let out = tsk(&["complexity", "C:8", "--mode", "rainbow"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tsk(&["complexity", "D:15", "--mode", "rainbow"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_gives_lower_bound_report() {
    let (v, code) = json(&["complexity", "SD:4", "--budget", "50"]);
    assert_eq!(code, 3);
    assert_eq!(v["budget"]["status"], "lower-bound-only");
    assert_eq!(v["budget"]["systems_visited"], 50);
    assert_eq!(v["results"]["bound"], "lower");
    assert!(v["results"]["value"].as_u64().unwrap() <= 7);

    let out = tsk(&["complexity", "SD:4", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("lower bound, enumeration incomplete"));
    assert!(!stdout(&out).contains("(exact)"));
}

#[test]
fn enumerate_examples() {
    let (v, _) = json(&["enumerate", "C:27"]);
    assert_eq!(v["results"]["count"], 14);
    let (v, _) = json(&["enumerate", "C:2"]);
    assert_eq!(v["results"]["count"], 2);
    let (v, code) = json(&["enumerate", "D:3", "--validate"]);
    assert_eq!(code, 0);
    let count = v["results"]["count"].as_u64().unwrap();
    assert!(count >= 2);
    assert_eq!(v["results"]["validated"].as_u64(), Some(count));
}

#[test]
fn jsonl_dump_is_lectic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d9.jsonl");
    let out = tsk(&["enumerate", "D:9", "--jsonl", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let records: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 56);
    assert_eq!(records[0]["m"], 0);
    let max = records.iter().map(|r| r["m"].as_u64().unwrap()).max().unwrap();
    assert_eq!(max, 4);
    for r in &records {
        assert_eq!(r["certificate"].as_array().unwrap().len() as u64, r["m"].as_u64().unwrap());
    }
}

#[test]
fn audit_examples() {
    let (v, code) = json(&["audit", "D:9"]);
    assert_eq!(code, 0);
    let checks = v["results"]["checks"].as_array().unwrap();
    let bridge: Vec<&Value> = checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().contains("bound"))
        .collect();
    assert_eq!(bridge.len(), 4);
    assert!(bridge.iter().all(|c| c["passed"] == true));
    let total = checks
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with("total bound"))
        .unwrap();
    assert!(total["detail"].as_str().unwrap().starts_with("max 4,"));
    assert_eq!(v["results"]["all_passed"], true);

    let (v, _) = json(&["audit", "SD:4"]);
    let checks = v["results"]["checks"].as_array().unwrap();
    for clause in ["(i)", "(ii)", "(iii)", "(iv)"] {
        let c = checks
            .iter()
            .find(|c| c["name"].as_str().unwrap().starts_with(clause))
            .unwrap();
        assert_eq!(c["passed"], true, "{clause}");
    }
    let table = v["results"]["alpha_table"].as_array().unwrap();
    assert_eq!(table.len(), 10);
    assert!(table.iter().all(|r| r["alpha_observed"] == r["alpha_closed_form"]));

    // other families get the checks that apply everywhere
    let (v, code) = json(&["audit", "C:12"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn export_dot_examples() {
    let count_nodes = |dot: &str| dot.lines().filter(|l| l.contains("[label=\"order=")).count();
    let dot = stdout(&tsk(&["export-dot", "D:9"]));
    assert_eq!(count_nodes(&dot), 6);
    let dot = stdout(&tsk(&["export-dot", "C:4"]));
    assert_eq!(count_nodes(&dot), 3);
    let hasse = dot.lines().filter(|l| l.contains("color=grey")).count();
    assert_eq!(hasse, 2);
    let dot = stdout(&tsk(&["export-dot", "SD:4"]));
    let order8 = dot.lines().filter(|l| l.contains("label=\"order=8,")).count();
    assert_eq!(order8, 3);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d27.dot");
    let out = tsk(&["export-dot", "D:27", "--rainbow", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(path).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("color=red")).count(), 5);
}

#[test]
fn text_and_json_agree() {
    for spec in ["SD:5", "AGL:3:1", "D:27"] {
        let (v, _) = json(&["width", spec]);
        let text = stdout(&tsk(&["width", spec]));
        let w = v["results"]["width"].as_u64().unwrap();
        assert!(text.contains(&format!("width       {w}\n")), "{text}");
        let subgroups = v["group"]["subgroup_count"].as_u64().unwrap();
        assert!(text.contains(&format!("subgroups   {subgroups} in")));
    }
    let (v, _) = json(&["complexity", "D:27"]);
    let text = stdout(&tsk(&["complexity", "D:27"]));
    assert!(text.contains(&format!("complexity  {} (exact)", v["results"]["value"])));
}

#[test]
fn csv_output() {
    let out = tsk(&["audit", "D:9", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[2] == r[3]));
    let out = tsk(&["complexity", "D:59049", "--mode", "rainbow", "--format", "csv"]);
    assert_eq!(stdout(&out), "spec,mode,value,bound\nD:59049,rainbow,16,lower\n");
    let out = tsk(&["width", "C:8", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn warm_cache_reproduces_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let cold = tsk(&["complexity", "SD:4", "--json", "--cache", cache]);
    assert!(stderr(&cold).contains("cache miss"));
    let warm = tsk(&["complexity", "SD:4", "--json", "--cache", cache]);
    assert!(stderr(&warm).contains("cache hit"));
    let parse = |o: &Output| without_timing(serde_json::from_slice(&o.stdout).unwrap());
    assert_eq!(parse(&cold), parse(&warm));
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.contains("timing_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&cold), strip(&warm));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    // enumerate over the warm cache writes the same JSONL as a cold run
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    tsk(&["enumerate", "SD:4", "--jsonl", a.to_str().unwrap()]);
    tsk(&["enumerate", "SD:4", "--cache", cache, "--jsonl", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn environment_and_flag_precedence() {
    let run = |env: &[(&str, &str)], args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tsk"));
        cmd.args(args).env_remove("TSK_BUDGET").env_remove("TSK_MAX_ORDER").env_remove("TSK_CACHE_DIR");
        for (k, v) in env {
            cmd.env(k, v);
        }
        cmd.output().unwrap()
    };
    let out = run(&[("TSK_BUDGET", "5")], &["enumerate", "D:9", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[("TSK_BUDGET", "5")], &["enumerate", "D:9", "--json", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[("TSK_MAX_ORDER", "10")], &["info", "D:9"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("tsk.toml");
    std::fs::write(&config, "budget = 5\n").unwrap();
    let c = config.to_str().unwrap();
    let out = run(&[], &["enumerate", "D:9", "--config", c]);
    assert_eq!(out.status.code(), Some(3));
    // environment beats the file
    let out = run(&[("TSK_BUDGET", "1000")], &["enumerate", "D:9", "--config", c]);
    assert_eq!(out.status.code(), Some(0));

    std::fs::write(&config, "budget = 5\nthreads = 2\n").unwrap();
    let out = run(&[], &["enumerate", "D:9", "--config", c]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("threads"), "{}", stderr(&out));

    let out = run(&[], &["enumerate", "D:9", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_match_schema() {
    let validator = schema();
    let cases: &[&[&str]] = &[
        &["info", "AGL:2:3"],
        &["width", "SD:4"],
        &["width", "AGL:2:4"],
        &["complexity", "D:9"],
        &["complexity", "SD:4", "--budget", "10"],
        &["complexity", "D:243", "--mode", "rainbow"],
        &["complexity", "SD:5", "--mode", "rainbow"],
        &["enumerate", "Q:4", "--validate"],
        &["audit", "D:27"],
        &["audit", "SD:5"],
        &["audit", "M:4"],
    ];
    for args in cases {
        let (v, _) = json(args);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    // the schema rejects an exact label on a lower-bound-only report
    let (mut v, _) = json(&["complexity", "SD:4", "--budget", "10"]);
    v["results"]["bound"] = Value::from("exact");
    assert!(!validator.is_valid(&v));
}

#[test]
fn help_and_version() {
    let out = tsk(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["info", "width", "complexity", "enumerate", "audit", "export-dot"] {
        assert!(stdout(&out).contains(sub));
    }
    let out = tsk(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    let out = tsk(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
