use std::f64::consts::{FRAC_PI_2, PI, TAU};

use dressing_engine::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use shift_suppression::*;
use spin_algebra::{spin_operators, CMatrix, SpinValue};

fn manifold(two_s: u32) -> SpinManifold {
    SpinManifold {
        label: ManifoldLabel::D,
        spin: SpinValue::new(two_s),
        g_factor: 1.2003340,
    }
}

/// Secular (m-diagonal) part of Tr{Q F} with
/// `Q_ij = S(S+1)δ_ij − (3/2)(S_i S_j + S_j S_i)` built from raw matrices.
fn secular_tr_qf(spin: SpinValue, f: [[f64; 3]; 3]) -> Vec<f64> {
    let ops = spin_operators(spin);
    let s = [&ops.sx, &ops.sy, &ops.sz];
    let n = spin.dim();
    let mut total = CMatrix::zeros(n, n);
    for i in 0..3 {
        for j in 0..3 {
            let mut q = (s[i] * s[j] + s[j] * s[i]) * C64::from(-1.5);
            if i == j {
                q += CMatrix::identity(n, n) * C64::from(spin.casimir());
            }
            total += q * C64::from(f[i][j]);
        }
    }
    (0..n).map(|k| total[(k, k)].re).collect()
}

#[test]
fn zeeman_factor_examples() {
    assert_eq!(zeeman_suppression(0.0, 0.0), 1.0);
    assert!(zeeman_suppression(FRAC_PI_2, 1.1).abs() < 1e-16);
    assert!(zeeman_suppression(magic_angle(), FRAC_PI_2).abs() < 1e-16);
    assert!(zeeman_suppression(FRAC_PI_2, magic_angle()).abs() < 1e-16);
}

#[test]
fn quadrupole_factor_examples() {
    assert!((quadrupole_suppression(0.0, 0.0) - 1.0).abs() < 1e-15);
    assert!(quadrupole_suppression(magic_angle(), 0.7).abs() < 1e-15);
    assert!((quadrupole_suppression(FRAC_PI_2, FRAC_PI_2) - 0.25).abs() < 1e-15);
}

#[test]
fn spin_half_has_no_differential_quadrupole_shift() {
    let diag = dressed_quadrupole_operator(SpinValue::new(1), 3.0, 0.4, 1.2);
    assert_eq!(diag[0], diag[1]);
    assert!(diag[0].abs() < 1e-15);
}

#[test]
fn five_halves_bare_quadrupole_entries() {
    let diag = dressed_quadrupole_operator(SpinValue::new(5), 1.0, 0.0, 0.0);
    let expected: Vec<f64> = [2.5f64, 1.5, 0.5, -0.5, -1.5, -2.5]
        .iter()
        .map(|m| 1.5 * (35.0 / 4.0 - 3.0 * m * m))
        .collect();
    for (a, b) in diag.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-13);
    }
    let oracle = secular_tr_qf(SpinValue::new(5), FieldGradient::axial(1.0).tensor());
    for (a, b) in diag.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn magic_angle_nulls_quadrupole_operator() {
    for (t1, t2) in [(magic_angle(), 0.3), (1.9, magic_angle())] {
        let diag = dressed_quadrupole_operator(SpinValue::new(5), 1e4, t1, t2);
        assert!(diag.iter().all(|x| x.abs() < 1e-12 * 1e4));
    }
}

#[test]
fn zeeman_operator_limits() {
    let field = StaticField::new(TAU * 6e6).unwrap();
    let layer1 = RfLayer::new(TAU * 6e6 - 1.0, 1e-9, 0.0).unwrap();
    let cfg = DressingConfig::new(manifold(5), field, layer1, None).unwrap();
    assert_eq!(dressed_zeeman_operator(&cfg, 0.0).coefficient, 0.0);
    let full = dressed_zeeman_operator(&cfg, 1e-9).coefficient;
    let bare = 1.2003340 * TAU * BOHR_MAGNETON_HZ_PER_TESLA * 1e-9;
    assert!((full - bare).abs() < 1e-12 * bare);
    let op = dressed_zeeman_operator(&cfg, 1e-9);
    assert!((op.diagonal()[0] - 2.5 * full).abs() < 1e-12 * bare);
}

#[test]
fn designed_configs_null_both_factors() {
    let field = StaticField::new(TAU * 1e7).unwrap();
    for assignment in [
        DecouplingAssignment::ZeemanFirst,
        DecouplingAssignment::QuadrupoleFirst,
    ] {
        let cfg =
            design_decoupling(manifold(5), field, (TAU * 2e5, TAU * 1e4), assignment, 0.3).unwrap();
        let report = perturbation_report(&cfg, &FieldGradient::axial(1.0));
        assert!(report.zeeman_factor.abs() < 1e-12);
        assert!(report.quadrupole_factor.abs() < 1e-12);
        assert!(report.quadrupole_operator.iter().all(|x| x.abs() < 1e-11));
    }
}

#[test]
fn gradient_validation() {
    assert!(FieldGradient::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    assert!(FieldGradient::new([[1.0, 0.5, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.0]]).is_err());
    assert_eq!(
        FieldGradient::new(FieldGradient::axial(2.0).tensor())
            .unwrap()
            .f_zz(),
        2.0
    );
}

proptest! {
    #[test]
    fn factors_are_symmetric(a in 0.0..PI, b in 0.0..PI) {
        prop_assert_eq!(zeeman_suppression(a, b), zeeman_suppression(b, a));
        prop_assert_eq!(quadrupole_suppression(a, b), quadrupole_suppression(b, a));
        prop_assert!(zeeman_suppression(a, b).abs() <= 1.0);
        prop_assert!(quadrupole_suppression(a, b).abs() <= 1.0 + 1e-15);
    }

    #[test]
    fn only_fzz_survives_rotating_wave(
        two_s in 1u32..8,
        fzz in -5.0..5.0f64,
        fxx in -5.0..5.0f64,
        off in proptest::collection::vec(-5.0..5.0f64, 3),
    ) {
        let spin = SpinValue::new(two_s);
        let fyy = -fzz - fxx;
        let f = [[fxx, off[0], off[1]], [off[0], fyy, off[2]], [off[1], off[2], fzz]];
        let grad = FieldGradient::new(f).unwrap();
        let oracle = secular_tr_qf(spin, grad.tensor());
        let analytic = dressed_quadrupole_operator(spin, grad.f_zz(), 0.0, 0.0);
        for (a, b) in analytic.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }
}
