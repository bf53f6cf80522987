//! Suppression of Zeeman and quadrupole shifts by two dressing layers.
//!
//! After both rotating-wave steps only the component of a perturbation
//! along the final quantization axis survives. A slow field fluctuation
//! `δB_z` is scaled by `cosθ_1 cosθ_2`, and the rank-2 quadrupole shift by
//! `¼(1−3cos²θ_1)(1−3cos²θ_2)`.

use std::f64::consts::TAU;

use dressing_engine::{DressingConfig, BOHR_MAGNETON_HZ_PER_TESLA};
use spin_algebra::{HalfInt, SpinValue};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuppressionError {
    #[error("field-gradient tensor is not symmetric (|F_ij - F_ji| = {asymmetry})")]
    NotSymmetric { asymmetry: f64 },
    #[error("field-gradient tensor is not trace-free (trace {trace})")]
    NotTraceFree { trace: f64 },
}

/// Electric-field gradient `F_ij = ∂E_j/∂x_i`, in angular-frequency units
/// per unit quadrupole moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGradient {
    tensor: [[f64; 3]; 3],
}

impl FieldGradient {
    pub fn new(tensor: [[f64; 3]; 3]) -> Result<Self, SuppressionError> {
        let scale = tensor
            .iter()
            .flatten()
            .fold(0.0f64, |a, x| a.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        let mut asymmetry = 0.0f64;
        for i in 0..3 {
            for j in 0..i {
                asymmetry = asymmetry.max((tensor[i][j] - tensor[j][i]).abs());
            }
        }
        if asymmetry > 1e-9 * scale {
            return Err(SuppressionError::NotSymmetric { asymmetry });
        }
        let trace = tensor[0][0] + tensor[1][1] + tensor[2][2];
        if trace.abs() > 1e-9 * scale {
            return Err(SuppressionError::NotTraceFree { trace });
        }
        Ok(FieldGradient { tensor })
    }

    /// Axially symmetric gradient with the given `F_zz`.
    pub fn axial(f_zz: f64) -> Self {
        FieldGradient {
            tensor: [
                [-f_zz / 2.0, 0.0, 0.0],
                [0.0, -f_zz / 2.0, 0.0],
                [0.0, 0.0, f_zz],
            ],
        }
    }

    pub fn tensor(&self) -> [[f64; 3]; 3] {
        self.tensor
    }

    pub fn f_zz(&self) -> f64 {
        self.tensor[2][2]
    }
}

pub fn zeeman_suppression(theta1: f64, theta2: f64) -> f64 {
    theta1.cos() * theta2.cos()
}

pub fn quadrupole_suppression(theta1: f64, theta2: f64) -> f64 {
    let (c1, c2) = (theta1.cos(), theta2.cos());
    0.25 * (1.0 - 3.0 * c1 * c1) * (1.0 - 3.0 * c2 * c2)
}

/// `coefficient · S_z` in the doubly dressed basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedZeemanOperator {
    pub spin: SpinValue,
    pub coefficient: f64,
}

impl DressedZeemanOperator {
    pub fn diagonal(&self) -> Vec<f64> {
        self.spin
            .projections()
            .map(|m| self.coefficient * m.value())
            .collect()
    }

    /// Splitting change between adjacent dressed levels.
    pub fn splitting_shift(&self) -> f64 {
        self.coefficient
    }
}

pub fn dressed_zeeman_operator(config: &DressingConfig, delta_bz: f64) -> DressedZeemanOperator {
    let bare = config.manifold.g_factor * TAU * BOHR_MAGNETON_HZ_PER_TESLA * delta_bz;
    DressedZeemanOperator {
        spin: config.manifold.spin,
        coefficient: zeeman_suppression(config.theta1(), config.theta2()) * bare,
    }
}

/// Diagonal of the dressed quadrupole shift, `m̄̄` descending from `+S`.
pub fn dressed_quadrupole_operator(
    spin: SpinValue,
    f_zz: f64,
    theta1: f64,
    theta2: f64,
) -> Vec<f64> {
    let factor = quadrupole_suppression(theta1, theta2);
    let s2 = spin.casimir();
    spin.projections()
        .map(|m: HalfInt| {
            let m = m.value();
            factor * 1.5 * f_zz * (s2 - 3.0 * m * m)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub zeeman_factor: f64,
    pub quadrupole_factor: f64,
    /// Dressed Zeeman coefficient per tesla of `δB_z`, rad/s.
    pub zeeman_operator_coeff: f64,
    pub quadrupole_operator: Vec<f64>,
}

pub fn perturbation_report(
    config: &DressingConfig,
    gradient: &FieldGradient,
) -> PerturbationReport {
    let (t1, t2) = (config.theta1(), config.theta2());
    PerturbationReport {
        zeeman_factor: zeeman_suppression(t1, t2),
        quadrupole_factor: quadrupole_suppression(t1, t2),
        zeeman_operator_coeff: dressed_zeeman_operator(config, 1.0).coefficient,
        quadrupole_operator: dressed_quadrupole_operator(
            config.manifold.spin,
            gradient.f_zz(),
            t1,
            t2,
        ),
    }
}
