#![allow(dead_code)]

use std::f64::consts::TAU;

use dressing_engine::{DressingConfig, ManifoldLabel, RfLayer, SpinManifold, StaticField};
use num_complex::Complex64 as C64;
use spin_algebra::{HalfInt, SpinValue};

pub const G_S: f64 = 2.00225664;
pub const G_D: f64 = 1.2003340;

pub fn hz(f: f64) -> f64 {
    TAU * f
}

pub fn h(x: f64) -> HalfInt {
    HalfInt::new(x).unwrap()
}

pub fn s_manifold() -> SpinManifold {
    SpinManifold {
        label: ManifoldLabel::S,
        spin: SpinValue::new(1),
        g_factor: G_S,
    }
}

pub fn d_manifold() -> SpinManifold {
    SpinManifold {
        label: ManifoldLabel::D,
        spin: SpinValue::new(5),
        g_factor: G_D,
    }
}

/// Both manifolds dressed with the tabulated Ca+ drives; `double` keeps the sideband tones.
pub fn table_configs(double: bool) -> (DressingConfig, DressingConfig) {
    let ws = hz(10e6);
    let wd = ws * G_D / G_S;
    let l2 = |w: f64, a: f64| double.then(|| RfLayer::new(hz(w), hz(a), 0.0).unwrap());
    let cs = DressingConfig::new(
        s_manifold(),
        StaticField::new(ws).unwrap(),
        RfLayer::new(hz(10_002_090.0), hz(G_S * 46_805.0), 0.0).unwrap(),
        l2(72_050.0, G_S * 3_469.0),
    )
    .unwrap();
    let cd = DressingConfig::new(
        d_manifold(),
        StaticField::new(wd).unwrap(),
        RfLayer::new(hz(5_994_834.0), hz(G_D * 115_600.0), 0.0).unwrap(),
        l2(160_589.0, G_D * 6_809.0),
    )
    .unwrap();
    (cs, cd)
}

pub fn basis(dim: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::default(); dim];
    v[k] = C64::new(1.0, 0.0);
    v
}
