use num_complex::Complex64 as C64;
use proptest::prelude::*;
use spin_algebra::{
    expm, rotation_unitary, spin_operators, CMatrix, HalfInt, SpinError, SpinValue,
};

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Plain Taylor series with repeated halving, independent of the Padé path.
fn taylor_expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let halvings = 8;
    let scaled = a * C64::from(0.5f64.powi(halvings));
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..40 {
        term = &term * &scaled * C64::from(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..halvings {
        sum = &sum * &sum;
    }
    sum
}

#[test]
fn spin_half_matches_pauli() {
    let ops = spin_operators(SpinValue::new(1));
    assert_eq!(ops.sz[(0, 0)], C64::from(0.5));
    assert_eq!(ops.sz[(1, 1)], C64::from(-0.5));
    assert_eq!(ops.s_plus[(0, 1)], C64::from(1.0));
    assert_eq!(ops.s_plus[(1, 0)], C64::from(0.0));
}

#[test]
fn spin_five_halves_sz_diagonal() {
    let spin = SpinValue::new(5);
    let ops = spin_operators(spin);
    assert_eq!(ops.sz.nrows(), 6);
    for (i, m) in [2.5, 1.5, 0.5, -0.5, -1.5, -2.5].iter().enumerate() {
        assert_eq!(ops.sz[(i, i)], C64::from(*m));
    }
}

#[test]
fn spin_one_commutator() {
    let ops = spin_operators(SpinValue::new(2));
    let comm = &ops.sx * &ops.sy - &ops.sy * &ops.sx - &ops.sz * C64::i();
    assert!(max_abs(&comm) < 1e-15);
}

#[test]
fn identity_rotation() {
    let u = rotation_unitary(SpinValue::new(3), [0.6, 0.0, 0.8], 0.0).unwrap();
    assert!(max_abs(&(u - CMatrix::identity(4, 4))) < 1e-15);
}

#[test]
fn spin_half_y_rotation_half_angle() {
    let theta = 0.8;
    let u = rotation_unitary(SpinValue::new(1), [0.0, 1.0, 0.0], theta).unwrap();
    let (s, c) = (theta / 2.0).sin_cos();
    // exp(iθσ_y/2) = cos + iσ_y sin
    assert!((u[(0, 0)] - C64::from(c)).norm() < 1e-14);
    assert!((u[(0, 1)] - C64::from(s)).norm() < 1e-14);
    assert!((u[(1, 0)] - C64::from(-s)).norm() < 1e-14);
    assert!((u[(1, 1)] - C64::from(c)).norm() < 1e-14);
}

#[test]
fn non_unit_axis_rejected() {
    let err = rotation_unitary(SpinValue::new(1), [1.0, 1.0, 0.0], 0.3).unwrap_err();
    assert!(matches!(err, SpinError::NonUnitAxis { .. }));
}

#[test]
fn rotation_conjugates_sz() {
    // e^{iθS_y} S_z e^{-iθS_y} = cosθ S_z - sinθ S_x
    let spin = SpinValue::new(5);
    let ops = spin_operators(spin);
    let theta = 0.73;
    let u = rotation_unitary(spin, [0.0, 1.0, 0.0], theta).unwrap();
    let lhs = &u * &ops.sz * u.adjoint();
    let rhs = &ops.sz * C64::from(theta.cos()) - &ops.sx * C64::from(theta.sin());
    assert!(max_abs(&(lhs - rhs)) < 1e-12);
}

#[test]
fn half_int_parsing() {
    assert_eq!(HalfInt::new(-1.5).unwrap().twice(), -3);
    assert!(HalfInt::new(0.3).is_err());
    assert_eq!(HalfInt::from_twice(-5).to_string(), "-5/2");
    assert_eq!(HalfInt::from_twice(4).to_string(), "2");
}

fn unit_axis(phi: f64, cos_t: f64) -> [f64; 3] {
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    [sin_t * phi.cos(), sin_t * phi.sin(), cos_t]
}

proptest! {
    #[test]
    fn casimir_identity(two_s in 0u32..12) {
        let spin = SpinValue::new(two_s);
        let ops = spin_operators(spin);
        let s2 = &ops.sx * &ops.sx + &ops.sy * &ops.sy + &ops.sz * &ops.sz;
        let target = CMatrix::identity(spin.dim(), spin.dim()) * C64::from(spin.casimir());
        prop_assert!(max_abs(&(s2 - target)) < 1e-12);
    }

    #[test]
    fn ladder_relations(two_s in 0u32..12) {
        let ops = spin_operators(SpinValue::new(two_s));
        let plus = &ops.sx + &ops.sy * C64::i();
        let minus = &ops.sx - &ops.sy * C64::i();
        prop_assert!(max_abs(&(plus - &ops.s_plus)) < 1e-14);
        prop_assert!(max_abs(&(minus - &ops.s_minus)) < 1e-14);
        let cyc = &ops.sy * &ops.sz - &ops.sz * &ops.sy - &ops.sx * C64::i();
        prop_assert!(max_abs(&cyc) < 1e-12);
    }

    #[test]
    fn rotation_matches_series_exponential(
        two_s in 1u32..10,
        phi in 0.0..std::f64::consts::TAU,
        cos_t in -1.0..1.0f64,
        theta in -7.0..7.0f64,
    ) {
        let spin = SpinValue::new(two_s);
        let axis = unit_axis(phi, cos_t);
        let u = rotation_unitary(spin, axis, theta).unwrap();
        let gen = spin_operators(spin).along(axis) * C64::new(0.0, theta);
        prop_assert!(max_abs(&(&u - taylor_expm(&gen))) < 1e-10);
        let unitarity = &u * u.adjoint() - CMatrix::identity(spin.dim(), spin.dim());
        prop_assert!(max_abs(&unitarity) < 1e-12);
    }

    #[test]
    fn expm_inverse(seed in proptest::collection::vec(-3.0..3.0f64, 32)) {
        let a = CMatrix::from_fn(4, 4, |i, j| C64::new(seed[4 * i + j], seed[16 + 4 * i + j]));
        let prod = expm(&a) * expm(&(-&a));
        prop_assert!(max_abs(&(prod - CMatrix::identity(4, 4))) < 1e-9);
    }
}
