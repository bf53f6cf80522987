mod common;

use common::*;
use dressing_engine::{RfLayer, StaticField};
use num_complex::Complex64 as C64;
use numeric_oracle::*;
use spin_algebra::HalfInt;
use transition_comb::BareCoupling;

fn bare_system() -> LabSystem {
    let ws = hz(1e6);
    LabSystem::new(
        DrivenManifold::undriven(s_manifold(), ws),
        DrivenManifold::undriven(d_manifold(), ws * G_D / G_S),
    )
}

#[test]
fn drives_off_eigenstate_keeps_population_and_accumulates_phase() {
    let sys = bare_system();
    let k = sys.d_index(h(1.5)).unwrap();
    let psi0 = basis(sys.dim(), k);
    let traj = propagate(&sys, &psi0, 3.7e-5, 5, 1e-10).unwrap();
    let energy = sys.d.larmor * 1.5;
    for (t, psi) in traj.times.iter().zip(&traj.amplitudes) {
        let expected = C64::from_polar(1.0, -energy * t);
        assert!(
            (psi[k] - expected).norm() < 1e-9,
            "t = {t}: {} vs {}",
            psi[k],
            expected
        );
        assert!((traj.populations.last().unwrap()[k] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn resonant_spin_half_flops_at_half_the_drive_amplitude() {
    let w0 = hz(1e6);
    let amp = 1e-3 * w0;
    let s = DrivenManifold {
        layer1: Some(RfLayer::new(w0, amp, 0.3).unwrap()),
        ..DrivenManifold::undriven(s_manifold(), w0)
    };
    let sys = LabSystem::new(s, DrivenManifold::undriven(d_manifold(), 0.6 * w0));
    let psi0 = basis(sys.dim(), 0);
    let period = std::f64::consts::TAU / (amp / 2.0);
    let times: Vec<f64> = (0..80).map(|k| 2.5 * period * k as f64 / 79.0).collect();
    let traj = propagate_at(&sys, &psi0, &times, 1e-10).unwrap();
    let lower: Vec<f64> = traj.populations.iter().map(|p| p[1]).collect();
    let fit = fit_rabi_flop(&times, &lower).unwrap();
    let rel = (fit.params[1] - amp / 2.0).abs() / (amp / 2.0);
    assert!(rel < 1e-3, "relative Rabi error {rel}");
    assert!(traj.max_norm_drift < 1e-9);
}

#[test]
fn bare_transition_flops_at_the_bare_coupling() {
    let mut sys = bare_system();
    let (m, big_m) = (h(-0.5), h(-1.5));
    let omega = hz(2_000.0);
    let mut coupling = BareCoupling::empty(sys.spins());
    coupling.set(m, big_m, C64::new(omega, 0.0)).unwrap();
    let detuning = big_m.value() * sys.d.larmor - m.value() * sys.s.larmor;
    sys.lasers.push(LaserTone {
        detuning,
        coupling,
        phase: 0.4,
    });
    let psi0 = basis(sys.dim(), sys.s_index(m).unwrap());
    let flop = simulate_rabi_flop(
        &sys,
        &psi0,
        0,
        detuning,
        2.5 * std::f64::consts::PI / omega,
        60,
        &ScanOptions::default(),
    )
    .unwrap();
    let rel = (flop.rabi.value - omega).abs() / omega;
    assert!(rel < 1e-3, "relative error {rel}");
    assert!((flop.amplitude - 1.0).abs() < 1e-6);
}

#[test]
fn table_configuration_conserves_norm_for_one_millisecond() {
    let (cs, cd) = table_configs(true);
    let sys = LabSystem::from_configs(&cs, &cd);
    let mut psi0 = dressed_state(&cs, HalfInt::new(0.5).unwrap()).unwrap();
    psi0.extend(dressed_state(&cd, HalfInt::new(-2.5).unwrap()).unwrap());
    psi0.iter_mut().for_each(|x| *x /= 2f64.sqrt());
    let traj = propagate(&sys, &psi0, 1e-3, 11, 1e-10).unwrap();
    assert!(
        traj.max_norm_drift < 1e-8,
        "norm drift {}",
        traj.max_norm_drift
    );
}

#[test]
fn tolerance_outside_range_rejected() {
    let sys = bare_system();
    let psi0 = basis(sys.dim(), 0);
    for tol in [1e-15, 1e-3] {
        assert!(matches!(
            propagate(&sys, &psi0, 1e-6, 2, tol),
            Err(OracleError::InvalidParameter { .. })
        ));
    }
    assert!(matches!(
        propagate(&sys, &psi0, -1.0, 2, 1e-8),
        Err(OracleError::InvalidParameter { .. })
    ));
    let _ = StaticField::new(1.0);
}
