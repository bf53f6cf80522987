use std::f64::consts::{FRAC_PI_2, TAU};

use dressing_engine::*;
use magnus_corrections::*;
use proptest::prelude::*;
use spin_algebra::SpinValue;

const G_S: f64 = 2.00225664;
const G_D: f64 = 1.2003340;

fn hz(x: f64) -> f64 {
    TAU * x
}

fn table_configs(s_amps: (f64, f64), d_amps: (f64, f64)) -> (DressingConfig, DressingConfig) {
    let s = SpinManifold {
        label: ManifoldLabel::S,
        spin: SpinValue::new(1),
        g_factor: G_S,
    };
    let d = SpinManifold {
        label: ManifoldLabel::D,
        spin: SpinValue::new(5),
        g_factor: G_D,
    };
    let ws = hz(10e6);
    let wd = ws * G_D / G_S;
    let cs = DressingConfig::new(
        s,
        StaticField::new(ws).unwrap(),
        RfLayer::new(hz(10_002_090.0), s_amps.0, 0.0).unwrap(),
        Some(RfLayer::new(hz(72_050.0), s_amps.1, 0.0).unwrap()),
    )
    .unwrap();
    let cd = DressingConfig::new(
        d,
        StaticField::new(wd).unwrap(),
        RfLayer::new(hz(5_994_834.0), d_amps.0, 0.0).unwrap(),
        Some(RfLayer::new(hz(160_589.0), d_amps.1, 0.0).unwrap()),
    )
    .unwrap();
    (cs, cd)
}

#[test]
fn zero_amplitudes_give_zero_shift() {
    assert_eq!(
        bloch_siegert_shift(1e6, 1e6, (0.0, 0.0)).unwrap().coeff,
        0.0
    );
    assert_eq!(cross_field_shift(1e6, 2e6, (0.0, 0.0)).unwrap().coeff, 0.0);
}

#[test]
fn bloch_siegert_substitution() {
    let (a, w) = (3.0e4, 7.0e6);
    let shift = bloch_siegert_shift(w, w, (a, a)).unwrap();
    assert!((shift.coeff - a * a / (8.0 * w)).abs() < 1e-12 * shift.coeff);
    assert_eq!(shift.source, ShiftSource::CounterRotating);
    assert!((shift.validity_ratio - a / (2.0 * w)).abs() < 1e-18);
}

#[test]
fn invalid_and_resonant_inputs() {
    assert!(matches!(
        bloch_siegert_shift(1.0, -2.0, (1.0, 0.0)),
        Err(MagnusError::InvalidFrequency { .. })
    ));
    assert!(matches!(
        cross_field_shift(5.0, 5.0, (1.0, 0.0)),
        Err(MagnusError::ResonantCrossDrive { .. })
    ));
    assert!(matches!(
        cross_field_shift(5.0, -5.0, (1.0, 0.0)),
        Err(MagnusError::ResonantCrossDrive { .. })
    ));
}

#[test]
fn cross_shift_sign_follows_gap() {
    assert!(cross_field_shift(1e6, 2e6, (1e4, 0.0)).unwrap().coeff < 0.0);
    assert!(cross_field_shift(2e6, 1e6, (1e4, 0.0)).unwrap().coeff > 0.0);
}

#[test]
fn felt_amplitude_rescales_by_g_ratio() {
    assert!((felt_amplitude(G_D * 2.0, G_D, G_S) - G_S * 2.0).abs() < 1e-15);
}

#[test]
fn only_s_drives_bookkeeping() {
    let (cs, cd) = table_configs((hz(G_S * 46_805.0), hz(G_S * 3_469.0)), (1e-12, 1e-12));
    let c = corrected_splittings(&cs, &cd).unwrap();
    assert!(c.cross_s.coeff.abs() < 1e-20);
    assert!(c.bloch_siegert_d.coeff.abs() < 1e-20);
    assert!(c.bloch_siegert_s.coeff > 0.0);
    assert!(c.cross_d.coeff < 0.0);
    assert!((c.larmor_s - cs.static_field.larmor - c.bloch_siegert_s.coeff).abs() < 1e-6);
}

#[test]
fn all_amplitudes_zero_leave_splittings() {
    let (cs, cd) = table_configs((1e-30, 1e-30), (1e-30, 1e-30));
    let c = corrected_splittings(&cs, &cd).unwrap();
    assert_eq!(c.larmor_s, cs.static_field.larmor);
    assert_eq!(c.larmor_d, cd.static_field.larmor);
}

#[test]
fn table_scale_shift_sizes() {
    let (cs, cd) = table_configs(
        (hz(G_S * 46_805.0), hz(G_S * 3_469.0)),
        (hz(G_D * 115_600.0), hz(G_D * 6_809.0)),
    );
    let c = corrected_splittings(&cs, &cd).unwrap();
    // Counter-rotating shift of the ground manifold is tens of Hz,
    // the cross shift from both excited-manifold tones about 2.1 kHz.
    assert!((c.bloch_siegert_s.coeff / TAU - 55.0).abs() < 1.0);
    assert!((c.cross_s.coeff / TAU - 2_098.0).abs() < 2.0);
    let before = cd.derived1.splitting;
    let after = c.config_d.derived1.splitting;
    assert!(after > before);
    assert!(c.worst_validity_ratio() < 0.1);
}

#[test]
fn corrected_design_holds_angles_after_shift() {
    let s = SpinManifold {
        label: ManifoldLabel::S,
        spin: SpinValue::new(1),
        g_factor: G_S,
    };
    let field = StaticField::new(hz(1e6)).unwrap();
    let cfg = design_decoupling_corrected(
        s,
        field,
        (hz(100e3), hz(10e3)),
        DecouplingAssignment::ZeemanFirst,
        0.0,
        None,
    )
    .unwrap();
    let bs = bloch_siegert_shift(
        cfg.static_field.larmor,
        cfg.layer1.omega,
        (cfg.layer1.amp, cfg.amp2()),
    )
    .unwrap();
    let shifted = cfg.with_larmor(cfg.static_field.larmor + bs.coeff).unwrap();
    assert!((shifted.theta1() - FRAC_PI_2).abs() < 1e-9);
    assert!((shifted.theta2().cos().powi(2) - 1.0 / 3.0).abs() < 1e-9);
}

proptest! {
    #[test]
    fn quadratic_and_even(
        w0 in 1e5..1e8f64,
        w1 in 1e5..1e8f64,
        a1 in -1e5..1e5f64,
        a2 in -1e5..1e5f64,
        lambda in 0.1..10.0f64,
    ) {
        let bs = bloch_siegert_shift(w0, w1, (a1, a2)).unwrap().coeff;
        prop_assert_eq!(bs, bloch_siegert_shift(w0, w1, (-a1, a2)).unwrap().coeff);
        let scaled = bloch_siegert_shift(w0, w1, (lambda * a1, lambda * a2)).unwrap().coeff;
        prop_assert!((scaled - lambda * lambda * bs).abs() <= 1e-12 * scaled.abs().max(1e-300));
        prop_assume!((w0 - w1).abs() > 1.0);
        let cf = cross_field_shift(w0, w1, (a1, a2)).unwrap().coeff;
        prop_assert_eq!(cf, cross_field_shift(w0, w1, (a1, -a2)).unwrap().coeff);
        let cf_scaled = cross_field_shift(w0, w1, (lambda * a1, lambda * a2)).unwrap().coeff;
        prop_assert!((cf_scaled - lambda * lambda * cf).abs() <= 1e-12 * cf_scaled.abs().max(1e-300));
    }

    #[test]
    fn vanishes_with_growing_gap(a in 1e3..1e5f64, w0 in 1e6..1e7f64) {
        let near = cross_field_shift(w0, 3.0 * w0, (a, 0.0)).unwrap().coeff.abs();
        let far = cross_field_shift(w0, 300.0 * w0, (a, 0.0)).unwrap().coeff.abs();
        prop_assert!(far < 1e-3 * near);
        let bs_near = bloch_siegert_shift(w0, w0, (a, 0.0)).unwrap().coeff;
        let bs_far = bloch_siegert_shift(w0, 1e3 * w0, (a, 0.0)).unwrap().coeff;
        prop_assert!(bs_far < 1e-2 * bs_near);
    }
}
