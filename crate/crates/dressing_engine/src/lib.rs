//! Per-layer dressing algebra for one spin manifold driven by up to two rf
//! layers, the inverse problem of picking detunings for target mixing
//! angles, and least-squares calibration of dressed splittings from
//! measured single-layer resonances.
//!
//! All frequencies are angular (rad/s). Rf amplitudes are the product
//! `g·Ω` so a resonant first layer splits the levels by `amp/2` and a
//! resonant second layer by `amp/4`.

mod calibrate;
mod layer;
mod manifold;

pub use calibrate::{calibrate_splittings, Calibration, CalibrationLine, CalibrationModel};
pub use layer::{derive_layer, solve_delta_for_angle, DressedLayerResult, LayerIndex, RfLayer};
pub use manifold::{
    design_at_larmor, design_decoupling, magic_angle, DecouplingAssignment, DressingConfig,
    HierarchyReport, ManifoldLabel, SpinManifold, StaticField, BOHR_MAGNETON_HZ_PER_TESLA,
    DEFAULT_HIERARCHY_THRESHOLD,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DressingError {
    #[error("degenerate {layer:?} layer: zero amplitude and zero detuning leave the mixing angle undefined")]
    DegenerateLayer { layer: LayerIndex },
    #[error("mixing angle {theta} needs an infinite detuning")]
    UnreachableAngle { theta: f64 },
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("calibration needs {needed} independent lines, got rank {rank}")]
    CalibrationDegenerate { rank: usize, needed: usize },
    #[error("calibration needs at least {needed} lines, got {got}")]
    TooFewLines { got: usize, needed: usize },
}
