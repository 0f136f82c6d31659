//! End-to-end tests of the `liouville` binary.

use std::process::{Command, Output};

fn liouville(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn forward_at_expansion_point_prints_zero() {
    let out = liouville(&["--axes", "3,2,1", "forward", "--u", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn forward_known_value() {
    let out = liouville(&["--axes", "3,2,1", "forward", "--u", "6"]);
    assert!(out.status.success());
    let x: f64 = stdout(&out).trim().parse().unwrap();
    assert!((x - 1.5469672010420814).abs() < 1e-10);
}

#[test]
fn forward_both_coordinates_two_lines() {
    let out = liouville(&["forward", "--u", "6", "--v", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let x: f64 = lines[0].parse().unwrap();
    let y: f64 = lines[1].parse().unwrap();
    assert!((x - 1.5469672010420814).abs() < 1e-10);
    assert!((y - 0.5156662323071436).abs() < 1e-10);
}

#[test]
fn invalid_axes_ordering_is_usage_error() {
    let out = liouville(&["--axes", "1,2,3", "forward", "--u", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("0 < c < b < a"), "{}", stderr(&out));
}

#[test]
fn forward_without_coordinates_is_usage_error() {
    let out = liouville(&["forward"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn forward_out_of_domain_is_usage_error() {
    let out = liouville(&["forward", "--u", "3.0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inverse_roundtrips_forward_with_method_tags() {
    let fwd = liouville(&["forward", "--u", "6"]);
    let x = stdout(&fwd).trim().to_string();
    for method in ["newton", "closed"] {
        let out = liouville(&["inverse", "--x", &x, "--method", method]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        let mut parts = text.split_whitespace();
        let u: f64 = parts.next().unwrap().parse().unwrap();
        assert_eq!(parts.next().unwrap(), method);
        assert!((u - 6.0).abs() < 1e-8, "method {method}: u = {u}");
    }
}

#[test]
fn inverse_series_method_near_corner() {
    let out = liouville(&["inverse", "--x", "0.05", "--method", "series"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut parts = text.split_whitespace();
    let u: f64 = parts.next().unwrap().parse().unwrap();
    assert_eq!(parts.next().unwrap(), "series");
    assert!((u - 4.002343536288233).abs() < 1e-10);
}

#[test]
fn digits_flag_controls_precision() {
    let out = liouville(&["--digits", "5", "forward", "--u", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1.5470e0");
}

#[test]
fn coeffs_exact_contains_first_coefficient() {
    let out = liouville(&["--axes", "3,2,1", "coeffs", "--order", "3", "--exact"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let a1 = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["family"] == "A" && r["k"] == 1)
        .expect("A1 present");
    assert_eq!(a1["numerator"], "4");
    assert_eq!(a1["denominator"], "1");
    // C2 = 1/16, gamma2 = 1
    let c2 = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["family"] == "C" && r["k"] == 2)
        .unwrap();
    assert_eq!(c2["numerator"], "1");
    assert_eq!(c2["denominator"], "16");
}

#[test]
fn coeffs_float_mode() {
    let out = liouville(&["coeffs", "--order", "2"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let a3 = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["family"] == "A" && r["k"] == 3)
        .unwrap();
    assert!((a3["value"].as_f64().unwrap() - 7.0 / 6.0).abs() < 1e-15);
}

#[test]
fn coeffs_order_too_large_is_usage_error() {
    let out = liouville(&["coeffs", "--order", "40"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mesh_obj_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("patch.obj");
    let out = liouville(&[
        "mesh",
        "--kind",
        "liouville",
        "--grid",
        "9x9",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "obj",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 81);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 64);
}

#[test]
fn mesh_full_surface_obj() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("full.obj");
    let out = liouville(&[
        "mesh",
        "--kind",
        "curvature",
        "--grid",
        "5x5",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "obj",
        "--full-surface",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 8 * 16);
}

#[test]
fn mesh_csv_with_full_surface_is_usage_error() {
    let out = liouville(&[
        "mesh",
        "--kind",
        "liouville",
        "--grid",
        "5x5",
        "--out",
        "/tmp/unused.csv",
        "--format",
        "csv",
        "--full-surface",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mesh_json_has_grid_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("patch.json");
    let out = liouville(&[
        "mesh",
        "--kind",
        "liouville",
        "--grid",
        "5x4",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mesh: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(mesh["nx"], 5);
    assert_eq!(mesh["ny"], 4);
    assert_eq!(mesh["vertices"].as_array().unwrap().len(), 20);
}

#[test]
fn deterministic_output() {
    let a = liouville(&["forward", "--u", "7.3", "--v", "2.6"]);
    let b = liouville(&["forward", "--u", "7.3", "--v", "2.6"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn verify_quick_profile_passes() {
    let out = liouville(&["verify", "--profile", "quick"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("[PASS]").count(), 8, "{text}");
    assert!(text.contains("8/8 criteria passed"));
}
