#![allow(dead_code)]

use std::f64::consts::TAU;

use spin_algebra::SpinValue;
use transition_comb::*;

pub const SPINS: (SpinValue, SpinValue) = (SpinValue::new(1), SpinValue::new(5));

pub fn hz(x: f64) -> f64 {
    TAU * x
}

pub fn manifold(
    spin: SpinValue,
    t1: f64,
    t2: f64,
    alpha: f64,
    freqs: (f64, Option<f64>, f64, f64),
) -> DressedManifold {
    DressedManifold {
        spin,
        angles: ManifoldAngles {
            theta1: t1,
            theta2: t2,
            alpha,
        },
        freqs: LayerFrequencies {
            splitting1: freqs.0,
            splitting2: freqs.1,
            omega1: freqs.2,
            omega2: freqs.3,
        },
    }
}

/// Generic doubly dressed Ca-like setup.
pub fn double_setup(alpha_s: f64, alpha_d: f64) -> CombSetup {
    CombSetup::new(
        manifold(
            SPINS.0,
            1.3,
            0.7,
            alpha_s,
            (
                hz(46_900.0),
                Some(hz(5_100.0)),
                hz(10_002_090.0),
                hz(47_300.0),
            ),
        ),
        manifold(
            SPINS.1,
            1.45,
            1.1,
            alpha_d,
            (
                hz(69_750.0),
                Some(hz(7_900.0)),
                hz(5_994_834.0),
                hz(70_100.0),
            ),
        ),
    )
}

/// Single-layer setup with the angles fitted to the reference ratio column
/// and calibrated splittings.
pub fn table_setup() -> CombSetup {
    let mut setup = CombSetup::new(
        manifold(
            SPINS.0,
            1.529_946_5,
            0.0,
            0.0,
            (hz(46_895.0), None, hz(10_002_090.0), 0.0),
        ),
        manifold(
            SPINS.1,
            1.567_899_35,
            0.0,
            0.0,
            (hz(69_380.0), None, hz(5_994_834.0), 0.0),
        ),
    );
    setup.carrier_offset = hz(-924.5);
    setup
}

pub fn idx(q: [f64; 6]) -> TransitionIndex {
    TransitionIndex::from_f64(SPINS, q).unwrap()
}
