//! The comb of laser resonances between two doubly dressed spin manifolds.
//!
//! A line is labelled by six projections `(m, M, m̄, M̄, m̄̄, M̄̄)`: bare, first
//! dressed and second dressed, lowercase for the lower manifold `s` and
//! uppercase for the upper manifold `d`. Its strength is the bare coupling
//! `Ω_mM` times four Wigner-d factors and drive phases; its position follows
//! from the dressed splittings and rf frequencies.

mod angles;
mod comb;
mod index;
mod setup;

pub use angles::{fit_single_layer_angles, AngleFit, RatioObservation};
pub use comb::{
    effective_detuning, effective_rabi, enumerate_comb, merge_degenerate, neighbor_gaps,
    rabi_ratio, resonance_detuning, MergedLine, NeighborReport, SpectralLine,
};
pub use index::{BareCoupling, IndexFilter, TransitionIndex};
pub use setup::{
    CombMode, CombSetup, DressedManifold, LaserDrive, LayerFrequencies, ManifoldAngles,
};

use spin_algebra::HalfInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombError {
    #[error("bare selection rule |M - m| <= 2 violated by m = {m}, M = {big_m}")]
    SelectionRule { m: HalfInt, big_m: HalfInt },
    #[error("projection {value} out of range for spin {spin}")]
    OutOfRange { value: HalfInt, spin: HalfInt },
    #[error("{0} is not a half-integer")]
    NotHalfInteger(f64),
    #[error("need at least two lines, got {got}")]
    InsufficientLines { got: usize },
    #[error("line {0:?} is not part of the list")]
    MissingLine(Box<TransitionIndex>),
    #[error("double-layer comb requested but a manifold has no second layer")]
    MissingSecondLayer,
    #[error("angle fit failed: {0}")]
    Fit(#[from] curve_fit::FitError),
}
