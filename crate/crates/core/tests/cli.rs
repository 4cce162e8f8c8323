//! The `scenario-bounds` binary end to end.

use std::process::{Command, Output};

use scenario_bounds::report::parse_table_csv;
use scenario_bounds::BoundKind;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scenario-bounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn record(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn eval_examples() {
    let v = record(&run(&[
        "eval",
        "--bound",
        "new-consistent",
        "--N",
        "2",
        "--d",
        "1",
        "--eps",
        "0.75",
    ]));
    assert_eq!(v["q"], 0.5);
    assert!(v["assumptions_warning"].is_null());

    let o = run(&[
        "eval",
        "--bound",
        "campi-consistent",
        "--N",
        "10",
        "--d",
        "2",
        "--eps",
        "0.5",
    ]);
    assert_eq!(record(&o)["q"], 0.0107421875);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nondegeneracy"));

    let v = record(&run(&[
        "eval",
        "--bound",
        "new-discard",
        "--N",
        "3",
        "--d",
        "1",
        "--r",
        "1",
        "--eps",
        "0.9",
    ]));
    assert_eq!(v["q"], 0.6);
}

#[test]
fn invert_examples() {
    let v = record(&run(&[
        "invert",
        "--bound",
        "floyd-consistent",
        "--N",
        "10",
        "--d",
        "0",
        "--beta",
        "0.05",
    ]));
    let eps = v["epsilon"].as_f64().unwrap();
    assert!((eps - (1.0 - 0.05f64.powf(0.1))).abs() < 1e-11);

    let o = run(&[
        "invert",
        "--bound",
        "new-consistent",
        "--N",
        "500",
        "--d",
        "500",
        "--beta",
        "0.05",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn design_examples() {
    let n = |bound: &str, d: &str, r: &str| {
        record(&run(&[
            "design", "--bound", bound, "--d", d, "--r", r, "--eps", "0.1", "--beta", "0.05",
        ]))["N"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(n("floyd-consistent", "0", "0"), 29);
    assert_eq!(n("new-consistent", "0", "0"), 29);
    assert_eq!(
        n("romao-discard", "1", "0"),
        n("campi-consistent", "1", "0")
    );
}

#[test]
fn table_cell_equals_invert() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = run(&[
        "table",
        "--N",
        "500",
        "--beta",
        "0.05",
        "--d-min",
        "100",
        "--d-max",
        "100",
        "--bounds",
        "new-consistent",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let table = parse_table_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(table.bounds, vec![BoundKind::NewConsistent]);
    let v = record(&run(&[
        "invert",
        "--bound",
        "new-consistent",
        "--N",
        "500",
        "--d",
        "100",
        "--beta",
        "0.05",
    ]));
    assert_eq!(table.rows[0].1[0], v["epsilon"].as_f64().unwrap());
}

#[test]
fn full_consistent_table_has_a_row_per_d() {
    let o = run(&[
        "table", "--N", "500", "--beta", "0.05", "--d-min", "1", "--d-max", "499",
    ]);
    assert!(o.status.success());
    let table = parse_table_csv(&stdout(&o)).unwrap();
    assert_eq!(table.bounds, BoundKind::CONSISTENT.to_vec());
    assert_eq!(table.rows.len(), 499);
    assert!(table
        .rows
        .iter()
        .all(|(_, values, _)| values.iter().all(|v| *v > 0.0 && *v <= 1.0)));
}

#[test]
fn validate_is_reproducible() {
    let args = [
        "validate", "--dist", "disk", "--N", "25", "--r", "3", "--beta", "0.2", "--trials", "300",
        "--seed", "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<_> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 301);
    let summary: serde_json::Value = serde_json::from_str(&lines[300]).unwrap();
    assert_eq!(summary["bound_kind"], "new-discard");
    assert_eq!(summary["trials"], 300);
}

#[test]
fn validate_circle_configuration() {
    let o = run(&[
        "validate", "--dist", "circle", "--N", "20", "--beta", "0.2", "--trials", "20000",
        "--seed", "3",
    ]);
    let text = stdout(&o);
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert!(o.status.success());
    assert!(summary["empirical_rate"].as_f64().unwrap() <= 0.2085);
    assert_eq!(summary["status"], "certified");
}

#[test]
fn validate_single_atom_has_no_violations() {
    let o = run(&[
        "validate",
        "--dist",
        "discrete-single-atom",
        "--N",
        "10",
        "--eps",
        "0.1",
        "--trials",
        "100",
    ]);
    let text = stdout(&o);
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["violations"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&[
            "eval",
            "--bound",
            "floyd-consistent",
            "--N",
            "3",
            "--d",
            "4",
            "--eps",
            "0.5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "design",
            "--bound",
            "floyd-consistent",
            "--d",
            "0",
            "--eps",
            "1e-12",
            "--beta",
            "1e-300"
        ])
        .status
        .code(),
        Some(4)
    );
    let o = run(&[
        "table",
        "--N",
        "20",
        "--beta",
        "0.05",
        "--d-min",
        "1",
        "--d-max",
        "2",
        "--output",
        "/nonexistent/t.csv",
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(
        run(&["eval", "--bound", "nope", "--N", "3", "--d", "1", "--eps", "0.5"])
            .status
            .code(),
        Some(2)
    );
}
