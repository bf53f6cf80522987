mod common;

use std::f64::consts::TAU;

use common::*;
use magnus_corrections::bloch_siegert_shift;
use numeric_oracle::*;
use proptest::prelude::*;
use spin_algebra::SpinValue;

fn circular_distance(a: f64, b: f64, zone: f64) -> f64 {
    let d = (a - b).rem_euclid(zone);
    d.min(zone - d)
}

#[test]
fn undriven_manifold_has_folded_zeeman_and_quadrupole_levels() {
    let spin = SpinValue::new(5);
    let larmor = hz(1e5);
    let mut drive = ManifoldDrive::new(spin, larmor);
    drive.f_zz = hz(1.3e3);
    let spectrum = drive.quasienergies(DEFAULT_MAX_DENOMINATOR, 200).unwrap();
    let zone = TAU / spectrum.period;
    assert!((zone - larmor).abs() < 1e-9 * larmor);
    let s2 = spin.casimir();
    for m in spin.projections() {
        let m = m.value();
        let e = m * larmor + 1.5 * drive.f_zz * (s2 - 3.0 * m * m);
        let nearest = spectrum
            .quasi_energies
            .iter()
            .map(|q| circular_distance(*q, e, zone))
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-6 * larmor, "m = {m}: {nearest}");
    }
    assert!(spectrum.unitarity_error < 1e-12);
}

#[test]
fn resonant_spin_half_splitting_matches_bloch_siegert() {
    let larmor = hz(1e6);
    let amp = hz(1e4);
    let omega1 = larmor + 1e-3 * larmor;
    let analytic = bloch_siegert_shift(larmor, omega1, (amp, 0.0))
        .unwrap()
        .coeff;
    let numeric = resonant_shift_from_floquet(larmor, omega1, amp, analytic, 2000).unwrap();
    assert!(
        (numeric - analytic).abs() < 0.05 * analytic.abs(),
        "{numeric} vs {analytic}"
    );
}

#[test]
fn rationalize_finds_common_fundamental() {
    let r = rationalize(&[hz(3e3), hz(2e3)], 1000).unwrap();
    assert_eq!(r.multiples, vec![3, 2]);
    assert!((r.fundamental - hz(1e3)).abs() < 1e-9);
    assert!(r.max_relative_error < 1e-15);
}

#[test]
fn incommensurate_frequencies_have_no_exact_period() {
    let result = exact_period(&[1.0, std::f64::consts::SQRT_2], 1000, 1e-12);
    assert!(
        matches!(result, Err(OracleError::NoExactPeriod { .. })),
        "{result:?}"
    );
}

proptest! {
    #[test]
    fn fold_lands_in_first_zone_and_preserves_phase(e in -1e4..1e4f64, period in 1e-3..10.0f64) {
        let f = fold_quasi_energy(e, period);
        let half = std::f64::consts::PI / period;
        prop_assert!((-half..half).contains(&f));
        prop_assert!(circular_distance(f, e, TAU / period) < 1e-9 * (1.0 + e.abs()));
    }
}
