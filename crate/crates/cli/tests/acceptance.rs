//! One test per acceptance criterion, run one at a time. Each prints a
//! PASS/FAIL line to stderr, outside the test harness capture.

use std::io::Write;
use std::sync::Mutex;

use oshima_cli::config::{default_config, ExperimentConfig};
use oshima_cli::verify::{run_criterion, Settings};

static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u8) {
    let _guard = SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    let ExperimentConfig::Verify(config) = default_config("verify").unwrap() else {
        unreachable!()
    };
    let outcome = run_criterion(id, &Settings::from(&config));
    let mut stderr = std::io::stderr().lock();
    writeln!(stderr, "{}", outcome.summary()).unwrap();
    assert!(outcome.passed, "{}", outcome.summary());
}

#[test]
fn criterion_1_structure_fixtures() {
    criterion(1);
}

#[test]
fn criterion_2_chart_and_adjoint_determinants() {
    criterion(2);
}

#[test]
fn criterion_3_six_fixed_flags() {
    criterion(3);
}

#[test]
fn criterion_4_sphere_trichotomy() {
    criterion(4);
}

#[test]
fn criterion_5_haar_invariance_and_kernel_oracle() {
    criterion(5);
}

#[test]
fn criterion_6_character_formula() {
    criterion(6);
}

#[test]
fn criterion_7_finite_part() {
    criterion(7);
}

#[test]
fn criterion_8_open_orbit_fixed_points() {
    criterion(8);
}
