use std::process::{Command, Output};

use serde_json::Value;

fn diagthue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagthue"))
        .args(args)
        .env_remove("DIAGTHUE_BITS_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn repo(path: &str) -> String {
    format!("{}/../../{path}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn analyze_finds_the_single_solution_of_three_two_five() {
    let o = diagthue(&["analyze", "--binomial", "3", "2", "5", "--h", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!((sols[0]["x"].as_str(), sols[0]["y"].as_str()), (Some("1"), Some("1")));
    assert_eq!(v["invariants"]["D"], "1");
    assert_eq!(v["invariants"]["discriminant_resultant"].as_str().unwrap().trim_start_matches('-'), "4050000");
}

#[test]
fn analyze_unit_binomial_has_two_box_solutions() {
    let o = diagthue(&["analyze", "--binomial", "1", "1", "5", "--h", "1", "--box", "10", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 2);
    assert_eq!(v["invariants"]["D"], "1");
}

#[test]
fn malformed_input_exits_three() {
    for args in [
        &["analyze", "--binomial", "3", "x", "5"][..],
        &["analyze", "--binomial", "3", "2", "2"],
        &["analyze", "--binomial", "3", "2", "5", "--h", "0"],
        &["analyze"],
        &["pade", "--n", "1", "--g", "2", "--r", "5"],
        &["verify", "/nonexistent/spec.json"],
        &["no-such-command"],
    ] {
        let o = diagthue(args);
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn malformed_sweep_spec_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"families\": [,]\n}").unwrap();
    let o = diagthue(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn pade_dump_matches_hand_computation() {
    let o = diagthue(&["pade", "--n", "1", "--g", "0", "--r", "5", "--order", "4", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    assert_eq!(v["A"], serde_json::json!(["2", "-6/5"]));
    let head: Vec<&str> = v["remainder_head"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(&head[..3], ["0", "0", "0"]);

    let v = json_out(&diagthue(&["pade", "--n", "2", "--g", "1", "--r", "5", "--order", "6", "--json"]));
    let head: Vec<&str> = v["remainder_head"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(&head[..4], ["0", "0", "0", "0"]);
    assert_ne!(head[4], "0");
}

#[test]
fn enumerate_by_convergents() {
    let o = diagthue(&["enumerate", "--binomial", "3", "2", "5", "--ymax", "10^4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "1 1 1\n");
}

#[test]
fn theorem_flags_reach_the_checks() {
    let o = diagthue(&[
        "analyze", "--binomial", "10^40", "-1", "8", "--box", "20", "--theorem", "T1_4", "--m", "3", "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["theorem"]["label"], "T1_4(m=3)");
    assert_eq!(verdict["pass"], true);

    let o = diagthue(&["analyze", "--binomial", "2", "3", "5", "--theorem", "C1_5"]);
    assert_eq!(code(&o), 2, "unmet hypothesis is not a pass");
}

const SMALL_SWEEP: &str = r#"{
  "name": "cli-small", "seed": 3,
  "families": [
    {"kind": "binomial", "a": ["10^30", 2], "b": [3, -1], "r": [5, 6], "h": [1, 200]},
    {"kind": "xi_random", "seed": 2, "d": [-3, 5], "coeff_bound": 2, "count": 4, "r": [6], "h": [30]}
  ],
  "theorems": ["T1_1", {"id": "T1_4", "m": 3}, "C1_5", "T1_9", {"id": "T2_1", "l": 3}],
  "search": {"box": [20, 20]}, "gap_audit": true, "lambda": {"pairs_per_cell": 1, "n_max": 1}
}"#;

fn small_sweep_file(dir: &tempfile::TempDir) -> String {
    let p = dir.path().join("small.json");
    std::fs::write(&p, SMALL_SWEEP).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_is_deterministic_and_schema_valid() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_sweep_file(&dir);
    let a = diagthue(&["verify", &spec, "--json"]);
    let b = diagthue(&["verify", &spec, "--json"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);

    let schema: Value = serde_json::from_str(&std::fs::read_to_string(repo("schema/report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let report = json_out(&a);
    let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");

    let c = diagthue(&["verify", &spec, "--json", "--seed", "4"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_streams_verdicts_as_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_sweep_file(&dir);
    let out = dir.path().join("report.json");
    let o = diagthue(&["verify", &spec, "--jsonl", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(lines.len() as u64, report["summary"]["verdicts"].as_u64().unwrap());
    assert!(lines.iter().all(|l| l["cell"].is_u64()));
}

#[test]
fn injected_fault_flag_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_sweep_file(&dir);
    for f in ["gap-flip", "bound-off-by-one"] {
        let o = diagthue(&["verify", &spec, "--inject-fault", f]);
        assert_eq!(code(&o), 1, "{f}");
    }
    assert_eq!(code(&diagthue(&["verify", &spec, "--inject-fault", "nonsense"])), 3);
}

#[test]
fn bits_budget_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_sweep_file(&dir);
    let o = Command::new(env!("CARGO_BIN_EXE_diagthue"))
        .args(["verify", &spec, "--json"])
        .env("DIAGTHUE_BITS_BUDGET", "2048")
        .output()
        .unwrap();
    assert_eq!(json_out(&o)["spec"]["bits_budget"], 2048);
}

#[test]
fn shipped_sweeps_parse() {
    for name in ["standard", "gap", "lambda", "pade"] {
        let text = std::fs::read_to_string(repo(&format!("sweeps/{name}.json"))).unwrap();
        diagthue::sweep::SweepSpec::parse(&text).unwrap();
    }
}
