//! Angular-momentum building blocks: spin operator matrices, rotation
//! unitaries `exp(iθ n·S)` and Wigner small-d matrices.
//!
//! Every matrix uses the basis ordered from `m = +S` down to `m = -S`, so
//! row/column `i` corresponds to `m = S - i`.

mod expm;
mod half_int;
mod operators;
mod wigner;

pub use expm::{expm, CMatrix};
pub use half_int::HalfInt;
pub use operators::{rotation_unitary, spin_operators, SpinOperators, SpinValue};
pub use wigner::{wigner_d, WignerDMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("rotation axis must be a unit vector (|n| = {norm})")]
    NonUnitAxis { norm: f64 },
    #[error("{value} is not a half-integer")]
    NotHalfInteger { value: f64 },
    #[error("projection {m} lies outside the spin-{s} multiplet")]
    ProjectionOutOfRange { m: HalfInt, s: HalfInt },
}
