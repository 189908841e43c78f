use serde_json::Value;
use whitehead_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn has_number(v: &Value) -> bool {
    match v {
        Value::Number(_) => true,
        Value::Array(a) => a.iter().any(has_number),
        Value::Object(m) => m.values().any(has_number),
        _ => false,
    }
}

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("dglw-cli-{}-{name}", std::process::id()))
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let path = temp(&format!("{}.json", args.join("_").replace([':', ',', '/'], "-")));
    let mut full = vec!["dglw"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--json", path.to_str().unwrap()]);
    let out = run(full);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let _ = std::fs::remove_file(&path);
    (out.code, v)
}

#[test]
fn reports_carry_provenance_and_no_json_numbers() {
    let (code, v) = json_of(&["--seed", "4", "check", "t1"]);
    assert_eq!(code, EXIT_PASS);
    assert!(!has_number(&v));
    assert_eq!(v["seed"], "4");
    assert_eq!(v["passed"], true);
    assert_eq!(v["convention"]["tree_signs"], "suspended");
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
    assert_eq!(v["command"][0], "--seed");
}

#[test]
fn every_command_runs() {
    for args in [
        vec!["homology", "t1", "--representatives"],
        vec!["retract", "t0"],
        vec!["--seed", "2", "retract", "example37"],
        vec!["transfer", "t2", "--arity", "3"],
        vec!["coalgebra", "t1"],
        vec!["whitehead", "--spheres", "2,2,2"],
        vec!["verify", "--theorem", "main1", "--spheres", "2,2,2"],
        vec!["verify", "--theorem", "elprime", "example37"],
        vec!["--seed", "1", "verify", "--theorem", "elsegundo", "--spheres", "3,3,3"],
        vec!["trees", "--leaves", "6"],
    ] {
        let (code, v) = json_of(&args);
        assert_eq!(code, EXIT_PASS, "{args:?}: {v}");
        assert!(!has_number(&v), "{args:?}");
    }
}

#[test]
fn transferred_bracket_on_three_spheres() {
    let (_, v) = json_of(&["transfer", "t2", "--arity", "3"]);
    let values = v["results"]["table"]["nonzero_values"].as_array().unwrap();
    assert_eq!(values.len(), 1);
    assert_eq!(values[0]["arity"], "3");
    assert_eq!(values[0]["value"]["coords"][0], "1");
}

#[test]
fn emitted_retract_reloads_to_the_same_brackets() {
    let path = temp("seed3.retract");
    let out = run(["dglw", "--seed", "3", "retract", "example37", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    let (_, random) = json_of(&["--seed", "3", "transfer", "example37", "--arity", "3"]);
    let (code, reloaded) = json_of(&["--retract-file", path.to_str().unwrap(), "transfer", "example37", "--arity", "3"]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(random["results"]["table"], reloaded["results"]["table"]);
}

#[test]
fn emitted_model_is_a_valid_input() {
    let path = temp("wedge.dgl");
    let out = run(["dglw", "whitehead", "--spheres", "2,3", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS);
    let check = run(["dglw", "check", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(check.code, EXIT_PASS, "{}", check.stderr);
}

#[test]
fn bad_input_is_a_usage_error() {
    let path = temp("bad.dgl");
    std::fs::write(&path, "dgl { gen a:2 d a = [a, }").unwrap();
    let out = run(["dglw", "check", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.starts_with("error:"), "{}", out.stderr);
    assert_eq!(run(["dglw", "check", "no-such-file.dgl"]).code, EXIT_USAGE);
    assert_eq!(run(["dglw", "frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(["dglw", "trees", "--leaves", "0"]).code, EXIT_USAGE);
    assert_eq!(run(["dglw", "--help"]).code, EXIT_PASS);
}

#[test]
fn failed_verdict_exits_one() {
    let path = temp("square.dgl");
    std::fs::write(&path, "dgl { gen a:1 gen b:2 gen c:4 d b = a d c = [a, b] }").unwrap();
    let out = run(["dglw", "check", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(out.code, EXIT_FAIL);
    assert!(out.stdout.contains("FAIL d squared vanishes on generators"));
}

#[test]
fn missing_extension_is_a_usage_error() {
    let path = temp("pair.dgl");
    std::fs::write(&path, "dgl { gen a:2 gen b:2 gen u:3 d u = [a, b] }").unwrap();
    let out = run(["dglw", "verify", "--theorem", "main1", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(out.code, EXIT_USAGE);
}
