//! Acceptance: the CLI contract. A clean suite run exits 0 with a JSON
//! report matching the documented schema; perturbing one multiplication
//! coefficient flips the exit status to 1.

use std::process::Command;

use moufang::{CustomModelSpec, LoopModel};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moufang"))
}

fn validate_schema(report: &serde_json::Value) {
    let object = report.as_object().expect("report is an object");
    for key in ["config", "version", "results", "timings_ms", "overall_pass"] {
        assert!(object.contains_key(key), "missing top-level key {key}");
    }
    assert!(report["overall_pass"].is_boolean());
    assert!(report["version"].is_string());

    let config = report["config"].as_object().expect("config object");
    for key in ["model", "order", "checks", "output", "export_tensors", "jobs"] {
        assert!(config.contains_key(key), "missing config key {key}");
    }

    let results = report["results"].as_array().expect("results array");
    assert!(!results.is_empty());
    let mut all_passed = true;
    for entry in results {
        for key in [
            "identity",
            "model",
            "requested_order",
            "verified_order",
            "passed",
            "first_failure",
        ] {
            assert!(entry.get(key).is_some(), "missing result key {key}");
        }
        let passed = entry["passed"].as_bool().unwrap();
        all_passed &= passed;
        match (&entry["first_failure"], passed) {
            (serde_json::Value::Null, true) => {}
            (witness, false) => {
                let witness = witness.as_object().expect("witness object");
                for key in ["component", "exponents", "lhs", "rhs"] {
                    assert!(witness.contains_key(key), "missing witness key {key}");
                }
            }
            other => panic!("passed/first_failure mismatch: {other:?}"),
        }
    }
    assert_eq!(report["overall_pass"].as_bool().unwrap(), all_passed);
}

#[test]
fn a8_cli_contract() {
    // full octonion suite at order 4 exits 0 and emits schema-valid JSON
    let output = binary()
        .args(["--model", "octonion_chart", "--order", "4", "--output", "json"])
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("stdout parses as JSON");
    validate_schema(&report);
    assert!(report["overall_pass"].as_bool().unwrap());
    assert_eq!(report["results"].as_array().unwrap().len(), 15);

    // perturb one multiplication coefficient: g1 h2 in component 3 goes
    // from 1 to 2, which keeps the unit law but breaks the Moufang
    // identities
    let f = LoopModel::octonion_chart().multiplication_jet(4).unwrap();
    let mut spec = CustomModelSpec::from_jets(&f);
    let mut hit = false;
    for (exponents, coeff) in &mut spec.components[2] {
        let mut expected = vec![0u32; 14];
        expected[0] = 1;
        expected[8] = 1;
        if *exponents == expected {
            assert_eq!(coeff, "1");
            *coeff = "2".to_string();
            hit = true;
        }
    }
    assert!(hit, "perturbation target coefficient must exist");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perturbed.json");
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();

    let output = binary()
        .args([
            "--model",
            &format!("file:{}", path.display()),
            "--order",
            "4",
            "--output",
            "json",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1), "perturbed model must fail");
    let report: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("stdout parses as JSON");
    validate_schema(&report);
    assert!(!report["overall_pass"].as_bool().unwrap());

    println!("PASS A8 CLI contract (exit 0 + schema-valid JSON; perturbed coefficient exits 1)");
}
