use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn oddu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddu")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_relations_exhaustive_over_z4() {
    let out = oddu(&["verify-relations", "--ring", "zmod:4:1", "--n", "3", "--v0", "none", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert!(r["relations"].as_array().unwrap().iter().all(|e| e["status"] == "pass"));
}

#[test]
fn missing_gram_file_is_a_config_error() {
    let out = oddu(&["verify-relations", "--v0", "/nonexistent/gram.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_arguments_are_config_errors() {
    assert_eq!(oddu(&["verify-relations", "--ring", "zmod:8"]).status.code(), Some(2));
    assert_eq!(oddu(&["verify-relations", "--ring", "zmod:8:2"]).status.code(), Some(2));
    assert_eq!(oddu(&["verify-relations", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(oddu(&["level"]).status.code(), Some(2));
    let f = fixture("t12a.json");
    assert_eq!(oddu(&["level", "--n", "2", "--element", &f]).status.code(), Some(2));
    assert_eq!(oddu(&["extract", "--mode", "entry", "--indices", "2,3", "--element", &f]).status.code(), Some(2));
}

#[test]
fn injected_fault_reports_counterexample() {
    let out = oddu(&["verify-relations", "--inject-fault", "r1"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let r1 = r["relations"].as_array().unwrap().iter().find(|e| e["identity"] == "R1").unwrap();
    assert_eq!(r1["status"], "fail");
    assert!(r1["counterexample"].is_string());
}

#[test]
fn sampled_reports_are_byte_identical() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("oddu-rel-a-{}.json", std::process::id()));
    let b = dir.join(format!("oddu-rel-b-{}.json", std::process::id()));
    let v0 = fixture("v0_z5.json");
    for p in [&a, &b] {
        let out = oddu(&["verify-relations", "--ring", "zmod:5:1", "--v0", &v0, "--seed", "7", "--samples", "50", "--out", &p.display().to_string()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let _ = (std::fs::remove_file(&a), std::fs::remove_file(&b));
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn member_principal_examples() {
    let ideal = fixture("i2.json");
    let out = oddu(&["member", "--mode", "principal", "--element", &fixture("t12a.json"), "--ideal", &ideal]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["status"], "pass");

    let out = oddu(&["member", "--mode", "principal", "--element", &fixture("t12one.json"), "--ideal", &ideal]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["failed_condition"], "(i)");

    let out = oddu(&["member", "--mode", "principal", "--element", &fixture("identity.json"), "--ideal", &ideal]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn member_other_predicates() {
    let ideal = fixture("i2.json");
    let t = fixture("t12a.json");
    for mode in ["unitary", "normalizer", "cu-max", "full-congruence"] {
        let out = oddu(&["member", "--mode", mode, "--element", &t, "--ideal", &ideal]);
        assert_eq!(out.status.code(), Some(0), "{mode}");
    }
    let out = oddu(&["member", "--mode", "cu-max", "--element", &fixture("t12one.json"), "--ideal", &ideal]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["failed_condition"], "(i)");
}

#[test]
fn non_unitary_element_is_a_structured_failure() {
    let bad = fixture("not_unitary.json");
    let out = oddu(&["member", "--mode", "unitary", "--element", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["failed_condition"].is_string());

    let out = oddu(&["member", "--mode", "principal", "--element", &bad, "--ideal", &fixture("i2.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"], "element is not unitary");

    let out = oddu(&["level", "--element", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "fail");
}

#[test]
fn extract_entry_word_is_verified() {
    let out = oddu(&["extract", "--mode", "entry", "--indices", "2,3,1,-2", "--element", &fixture("f.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verified"], true);
    assert_eq!(r["length"], 160);
    assert_eq!(r["word"]["factors"].as_array().unwrap().len(), 160);
}

#[test]
fn extract_steps_and_q0() {
    let f = fixture("f.json");
    for (step, len) in [(1, 16), (2, 16), (3, 32)] {
        let idx = format!("{step},1");
        let out = oddu(&["extract", "--mode", "step", "--indices", &idx, "--element", &f]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&out)["length"], len);
    }
    let out = oddu(&["extract", "--mode", "q0", "--indices", "-1,2", "--element", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["length"].as_u64().unwrap() <= 10564);
}

#[test]
fn level_of_t12_two() {
    let out = oddu(&["level", "--ring", &fixture("ring_z4.json"), "--element", &fixture("t12a.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\n  \"ideal\": 2,\n  \"m0\": \"min\"\n}\n");
}

#[test]
fn sandwich_certificate_for_t12_two() {
    let out = oddu(&["sandwich", "--element", &fixture("t12a.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["level"]["ideal"], 2);
    for k in ["normalizer", "cu_max", "lemcu"] {
        assert_eq!(r["checks"][k], true, "{k}");
    }
    assert!(r["words"].as_array().unwrap().iter().all(|w| w["verified"] == true));
}

#[test]
fn selftest_single_criterion() {
    let out = oddu(&["selftest", "--indices", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["criteria"][0]["id"], 8);
    assert_eq!(r["criteria"][0]["passed"], true);
    assert_eq!(oddu(&["selftest", "--indices", "9"]).status.code(), Some(2));
}
