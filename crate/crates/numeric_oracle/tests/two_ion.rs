use std::f64::consts::TAU;

use ms_gate::{plan_gate, PlanRequest};
use numeric_oracle::*;

#[test]
fn closed_loop_plan_entangles_two_ions() {
    let request = PlanRequest {
        omega_over_delta: 0.2,
        delta_over_splitting: 0.2,
        ..Default::default()
    };
    let plan = plan_gate(TAU * 8e3, &request).unwrap();
    let params = TwoIonParams::from_plan(&plan, 20.0 * plan.delta, 0.1, 8);
    let result = simulate_two_ion_gate(&params, 1e-9).unwrap();
    assert!(result.fidelity >= 0.99, "{result:?}");
    assert!(
        (result.populations[0] - 0.5).abs() < 0.02 && (result.populations[3] - 0.5).abs() < 0.02,
        "{result:?}"
    );
    assert!(result.motional_excitation < 0.01);
}

#[test]
fn half_duration_leaves_motion_excited() {
    let request = PlanRequest {
        omega_over_delta: 0.2,
        delta_over_splitting: 0.2,
        n_loops: Some(25),
        ..Default::default()
    };
    let plan = plan_gate(TAU * 8e3, &request).unwrap();
    let mut params = TwoIonParams::from_plan(&plan, 20.0 * plan.delta, 0.1, 8);
    params.duration = TAU / plan.delta / 2.0;
    let result = simulate_two_ion_gate(&params, 1e-9).unwrap();
    assert!(result.motional_excitation > 0.01, "{result:?}");
}

#[test]
fn invalid_parameters_rejected() {
    let plan = plan_gate(TAU * 8e3, &PlanRequest::default()).unwrap();
    let mut params = TwoIonParams::from_plan(&plan, 20.0 * plan.delta, 0.1, 1);
    assert!(matches!(
        simulate_two_ion_gate(&params, 1e-9),
        Err(OracleError::InvalidParameter { .. })
    ));
    params.fock_cutoff = 6;
    params.eta = 0.0;
    assert!(matches!(
        simulate_two_ion_gate(&params, 1e-9),
        Err(OracleError::InvalidParameter { .. })
    ));
}
