//! Acceptance suite: one test per criterion, each printing its PASS/FAIL
//! line with the measured residuals. All tolerances are pinned in
//! `liouville_core::verify`.

use liouville_core::verify::{self, Profile};
use liouville_core::{ConformalMap, EllipsoidShape};

fn shape() -> EllipsoidShape {
    EllipsoidShape::new(3.0, 2.0, 1.0).unwrap()
}

fn map() -> ConformalMap {
    ConformalMap::new(shape()).unwrap()
}

#[test]
fn criterion_1_coefficient_fixtures_exact() {
    let report = verify::criterion_1_coefficient_fixtures(&shape());
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_2_closed_form_vs_quadrature() {
    let report = verify::criterion_2_closed_vs_quadrature(&map());
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_3_inversion_roundtrips() {
    let report = verify::criterion_3_inversion_roundtrips(&map(), Profile::Full);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_4_liouville_property() {
    let report = verify::criterion_4_liouville_property(&map(), Profile::Full);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_5_differential_equations() {
    let report = verify::criterion_5_differential_equations(&map(), Profile::Full);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_6_series_accuracy() {
    let report = verify::criterion_6_series_accuracy(&map());
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_7_mesh_validity_and_conformality() {
    let report = verify::criterion_7_mesh_conformality(&map(), Profile::Full);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}

#[test]
fn criterion_8_figure_procedure_fidelity() {
    let report = verify::criterion_8_figure_procedure(&map(), Profile::Full);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.detail);
}
