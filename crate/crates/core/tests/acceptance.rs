//! One test per acceptance criterion, run at the full level on terfenol-D.

use piezosaw::materials::MaterialParams;
use piezosaw::verify::{run, run_criterion, CriterionResult, Level};

const SEED: u64 = 0;

fn report(r: &CriterionResult) {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    println!("{verdict} {:>2} {}", r.id, r.title);
    for c in &r.checks {
        let v = if c.pass { "PASS" } else { "FAIL" };
        println!("     {v} {}: measured {} expected {}", c.name, c.measured, c.expected);
    }
}

fn criterion(id: u8) {
    let r = run_criterion(id, &MaterialParams::terfenol_d(), Level::Full, SEED);
    report(&r);
    assert!(r.passed(), "criterion {id} ({}) failed", r.title);
}

#[test]
fn criterion_01_mode_parameters() {
    criterion(1);
}

#[test]
fn criterion_02_boundary_residuals_and_div_b() {
    criterion(2);
}

#[test]
fn criterion_03_elastic_limit() {
    criterion(3);
}

#[test]
fn criterion_04_single_phonon_amplitude() {
    criterion(4);
}

#[test]
fn criterion_05_zero_point_field_scale() {
    criterion(5);
}

#[test]
fn criterion_06_energy_closure() {
    criterion(6);
}

#[test]
fn criterion_07_canonical_form() {
    criterion(7);
}

#[test]
fn criterion_08_qubit_frequencies() {
    criterion(8);
}

#[test]
fn criterion_09_coupling_anchors_and_bands() {
    criterion(9);
}

#[test]
fn criterion_10_delay_equation() {
    criterion(10);
}

#[test]
fn criterion_11_steady_entanglement() {
    criterion(11);
}

#[test]
fn criterion_12_phase_dependence() {
    criterion(12);
}

#[test]
fn criterion_13_determinism() {
    let a = run(Level::Full, SEED);
    let b = run(Level::Full, SEED);
    let same = a.render() == b.render();
    println!("{} 13 determinism: two full reports byte-identical = {same}", if same { "PASS" } else { "FAIL" });
    let inner = a.criteria.iter().find(|c| c.id == 13).unwrap();
    report(inner);
    assert!(same && inner.passed());
}
