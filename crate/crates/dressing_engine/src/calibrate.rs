use nalgebra::{DMatrix, DVector};
use spin_algebra::HalfInt;

use crate::DressingError;

/// One measured single-layer resonance `(m, M, m̄, M̄) → Δ_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationLine {
    pub m: HalfInt,
    pub big_m: HalfInt,
    pub m_bar: HalfInt,
    pub big_m_bar: HalfInt,
    pub detuning: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationModel {
    /// `Δ_L = M̄ω̄_0^d + Mω_1^d − m̄ω̄_0^s − mω_1^s`.
    SplittingsOnly,
    /// The same model plus one common detuning offset.
    WithOffset,
}

impl CalibrationModel {
    fn unknowns(self) -> usize {
        match self {
            CalibrationModel::SplittingsOnly => 2,
            CalibrationModel::WithOffset => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub splitting_s: f64,
    pub splitting_d: f64,
    pub offset: f64,
    pub residuals: Vec<f64>,
    pub model: CalibrationModel,
}

impl Calibration {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, r| a.max(r.abs()))
    }

    pub fn predict(&self, line: &CalibrationLine, omega1_s: f64, omega1_d: f64) -> f64 {
        line.big_m_bar.value() * self.splitting_d + line.big_m.value() * omega1_d
            - line.m_bar.value() * self.splitting_s
            - line.m.value() * omega1_s
            + self.offset
    }
}

/// Least-squares dressed splittings from single-layer resonances with known
/// first-layer drive frequencies.
pub fn calibrate_splittings(
    lines: &[CalibrationLine],
    omega1_s: f64,
    omega1_d: f64,
    model: CalibrationModel,
) -> Result<Calibration, DressingError> {
    let k = model.unknowns();
    if lines.len() < k {
        return Err(DressingError::TooFewLines {
            got: lines.len(),
            needed: k,
        });
    }
    let n = lines.len();
    let mut a = DMatrix::zeros(n, k);
    let mut b = DVector::zeros(n);
    for (i, l) in lines.iter().enumerate() {
        a[(i, 0)] = -l.m_bar.value();
        a[(i, 1)] = l.big_m_bar.value();
        if k == 3 {
            a[(i, 2)] = 1.0;
        }
        b[i] = l.detuning - l.big_m.value() * omega1_d + l.m.value() * omega1_s;
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > 1e-10 * smax)
        .count();
    if rank < k {
        return Err(DressingError::CalibrationDegenerate { rank, needed: k });
    }
    let x = svd
        .solve(&b, 1e-12 * smax)
        .map_err(|_| DressingError::CalibrationDegenerate { rank, needed: k })?;
    let residuals = (&a * &x - &b).iter().copied().collect();
    Ok(Calibration {
        splitting_s: x[0],
        splitting_d: x[1],
        offset: if k == 3 { x[2] } else { 0.0 },
        residuals,
        model,
    })
}
