//! End-to-end checks of the binary: exit codes, plain and JSON output,
//! and the sweep.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equideform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn smooth_plain_output_and_exit_zero() {
    let out = run(&["smooth", "--p", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("different = 6"), "{text}");
    assert!(text.contains("ext1 dimension = 2"), "{text}");
    assert!(text.contains("trace-zero unit basis exists = true"), "{text}");
}

#[test]
fn smooth_json_output_parses() {
    let out = run(&["smooth", "--p", "3", "--m", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["different"], 6);
    assert_eq!(v["ext1_dimension"], 2);
    assert_eq!(v["jumps"], serde_json::json!([2]));
}

#[test]
fn smooth_rejects_divisible_conductor_with_exit_two() {
    let out = run(&["smooth", "--p", "3", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn smooth_tower_requires_second_jump() {
    let out = run(&["smooth", "--p", "2", "--m", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["smooth", "--p", "2", "--m", "1", "--n", "2", "--u1", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["jumps"], serde_json::json!([1, 3]));
}

#[test]
fn node_plain_and_infinite_conductor() {
    let out = run(&["node", "--p", "3", "--m", "2", "--mp", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("relevability = unconditional"), "{text}");
    assert!(text.contains("lift witness (verified)"), "{text}");

    let out = run(&["node", "--p", "3", "--m", "inf", "--mp", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["conductors"][0], serde_json::Value::Null);
    assert_eq!(v["differents"], serde_json::json!([0, 6]));
}

#[test]
fn node_non_relevable_case() {
    let out = run(&["node", "--p", "3", "--m", "1", "--mp", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("relevability = non-relevable"), "{text}");
    assert!(text.contains("no first-order lift exists"), "{text}");
}

#[test]
fn node_rejects_zero_conductor() {
    let out = run(&["node", "--p", "3", "--m", "0", "--mp", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn global_report_from_file() {
    let spec = serde_json::json!({
        "p": 3,
        "group_order": 3,
        "components": [
            {"id": "a", "quotient_genus": 2, "component_genus": 4,
             "stabilizer_order": 3, "inertia_order": 1},
            {"id": "b", "quotient_genus": 2, "component_genus": 4,
             "stabilizer_order": 3, "inertia_order": 1}
        ],
        "ramification_orbits": [
            {"component": "a", "different": 6, "stabilizer_order": 3, "image_group_order": 3},
            {"component": "b", "different": 6, "stabilizer_order": 3, "image_group_order": 3}
        ],
        "singular_orbits": [
            {"branch_components": ["a", "b"], "conductors": [2, 2], "differents": [6, 6],
             "image_orders": [3, 3], "stabilizer_order": 3, "permutes_branches": false}
        ],
        "flags": {"all_stabilizers_cyclic": true, "components_genus_ge_2": true,
                  "action_free_on_dense_open": false}
    });
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{spec}").unwrap();
    let path = file.path().to_str().unwrap().to_string();

    let out = run(&["global", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("total dimension = 15"), "{}", stdout(&out));

    let out = run(&["global", &path, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim_ext1_total"], 15);
    assert_eq!(v["dim_H1_local_global_term"], 2);
}

#[test]
fn global_rejects_unknown_fields() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\"p\": 3, \"surprise\": 1}}").unwrap();
    let out = run(&["global", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_matches_and_reports_rows() {
    let out = run(&["sweep", "--p-list", "2,3", "--m-max", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mismatches"], 0);
    let rows = v["rows"].as_array().unwrap();
    // p=2: m in {1,3}; p=3: m in {1,2,4}.
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["match"] == true));
}

#[test]
fn precision_env_variable_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_equideform"))
        .args(["smooth", "--p", "5", "--m", "1", "--json"])
        .env("EQUIDEFORM_PRECISION", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["witness"]["precision"], 64);
    // An explicit flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_equideform"))
        .args(["smooth", "--p", "5", "--m", "1", "--precision", "72", "--json"])
        .env("EQUIDEFORM_PRECISION", "64")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["witness"]["precision"], 72);
}
