use std::f32::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use qccsim::chsh::{maximize_s, s_factor, scan_s, MeasurementSettings};
use qccsim::lhv::LhvModel;
use qccsim::protocols::{teleport_statevector_branch, Branch, QubitPreparation};
use qccsim::rng::seeded;
use qccsim::stabilizer::{CliffordGate, StabilizerTableau};
use qccsim::{LhvModel32, Scalar, StateVector32};

#[test]
fn reference_values_in_single_precision() {
    let psi = StateVector32::psi_plus();
    assert_eq!(psi.tolerance(), f32::default_tolerance());
    let max = s_factor(&psi, &MeasurementSettings::new(FRAC_PI_2, 0.0, -FRAC_PI_4, FRAC_PI_4)).unwrap();
    assert!((max.s_value - 2.0 * SQRT_2).abs() < 1e-5);
    let (_, s) = maximize_s(&psi, Some((FRAC_PI_2, -FRAC_PI_4))).unwrap();
    assert!((s - 2.0 * SQRT_2).abs() < 1e-4);
    let grid = scan_s(&psi, FRAC_PI_2, -FRAC_PI_4, 41).unwrap();
    assert!((grid.max_cell().2 - 2.0 * SQRT_2).abs() < 1e-5);
}

#[test]
fn tableau_bridge_and_teleport_in_single_precision() {
    let mut t = StabilizerTableau::init_zero(2).unwrap();
    t.apply(CliffordGate::H(0)).unwrap();
    t.apply(CliffordGate::Cnot(0, 1)).unwrap();
    let bell: StateVector32 = t.to_statevector().unwrap();
    let phi = StateVector32::phi_plus();
    assert!((bell.fidelity(&phi).unwrap() - 1.0).abs() < 1e-5);

    let input: StateVector32 = QubitPreparation::parse("t|+>").unwrap().to_statevector().unwrap();
    let r = teleport_statevector_branch(&input, Branch::Forced(1, 0), &mut seeded(0)).unwrap();
    assert!((r.report.metric("fidelity").unwrap() - 1.0).abs() < 1e-5);
}

#[test]
fn lhv_models_in_single_precision() {
    let m: LhvModel32 = LhvModel::random(&mut seeded(1));
    assert!(m.s_value().abs() <= 2.0 + 1e-5);
}
