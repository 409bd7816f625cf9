//! External-interface checks for the command-line front end: exit codes,
//! output schemas, and determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypercycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn fixed_points_json_reports_p() {
    let out = run(&["fixed-points", "--k", "1,2,4,4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let fp: Vec<f64> = v["interior_fixed_point"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(fp, vec![0.25, 0.125, 0.125, 0.5]);
}

#[test]
fn fixed_points_symmetric_case() {
    let out = run(&["fixed-points", "--k", "1,1,1,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["interior_fixed_point"],
        serde_json::json!([0.25, 0.25, 0.25, 0.25])
    );
}

#[test]
fn degenerate_parameter_exits_3_and_names_the_segment() {
    let out = run(&["fixed-points", "--k", "0,1,1,1"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("(a,0,0,1-a)"), "missing segment note in: {text}");
}

#[test]
fn invalid_params_exit_2() {
    let out = run(&["fixed-points", "--k", "1,-1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    // Below the admissible floor k1* as well.
    let out = run(&["spectrum", "--k", "-0.5,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_degenerate_exit_3() {
    let out = run(&["spectrum", "--k", "0,1,1,1"]);
    assert_eq!(out.status.code(), Some(3));
    // Admissible but negative k1: still no interior spectrum.
    let out = run(&["spectrum", "--k", "-0.2,1,1,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn normal_form_is_exact_and_deterministic() {
    let out = run(&["normal-form", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["alpha1"]["re"], "-16/5");
    assert_eq!(v["alpha1"]["im"], "-48/5");
    assert_eq!(v["nu_resonant"]["re"], "64/5");
    assert_eq!(v["kill_table"]["a200"]["im"], "-4");
    assert_eq!(v["kill_table"]["a011"]["re"], "12/5");
    assert_eq!(v["weak_stability_order"], 1);
    assert_eq!(v["weakly_stable"], true);
    // Byte-identical on repetition.
    let again = stdout(&run(&["normal-form", "--format", "json"]));
    assert_eq!(text, again);
}

#[test]
fn normal_form_transcript_contains_the_kill_table() {
    let out = run(&["normal-form", "--show-steps"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("a200 = -4*i"));
    assert!(text.contains("c002 = 4"));
    assert!(text.contains("alpha_1 = -16/5 - 48/5*i"));
    // 18 kill entries.
    let entries = text
        .lines()
        .filter(|l| {
            l.split(" = ").next().is_some_and(|name| {
                name.len() == 4 && name.starts_with(['a', 'b', 'c'])
            })
        })
        .count();
    assert_eq!(entries, 18);
}

#[test]
fn simulate_emits_versioned_csv() {
    let out = run(&[
        "simulate", "--k", "1,1,1,1", "--x0", "0.5,0.5,0,0", "--iters", "2", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# schema=1\n"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "step,x1,x2,x3,x4");
    assert!(rows[1].starts_with("1,4.0000000000000002e-1,5.9999999999999998e-1"));
}

#[test]
fn sweep_single_point_row() {
    let out = run(&[
        "sweep", "--k1", "0.05", "--only", "--iters", "2000", "--burn", "60000", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("closed_curve"), "expected a closed curve row: {text}");
    assert!(text.contains("# seed=0"));
}

#[test]
fn sweep_rejects_two_point_grids() {
    let out = run(&["sweep", "--grid", "0.01,0.1"]);
    assert_eq!(out.status.code(), Some(2));
}
