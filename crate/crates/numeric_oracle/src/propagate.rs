use num_complex::Complex64 as C64;

use crate::dop853::{Dop853, Dop853Options, IntegrationStats};
use crate::hamiltonian::DrivenHamiltonian;
use crate::lab::LabSystem;
use crate::OracleError;

pub const MIN_TOLERANCE: f64 = 1e-14;
pub const MAX_TOLERANCE: f64 = 1e-4;
const INITIAL_TIGHTENING: f64 = 16.0;
const DRIFT_BUDGET: f64 = 10.0;
const MAX_ATTEMPTS: usize = 3;
const PILOT_FRACTION: f64 = 1.0 / 32.0;

fn norm_drift(initial_norm: f64, state: &[C64]) -> f64 {
    (state.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() - initial_norm).abs()
}

/// Per-step tolerance expected to keep the drift over `[0, end]` within
/// half of `budget`, extrapolated linearly from a short pilot run.
fn piloted_tolerance(
    h: &DrivenHamiltonian,
    initial: &[C64],
    end: f64,
    step_tol: f64,
    budget: f64,
) -> Result<f64, OracleError> {
    let pilot_end = end * PILOT_FRACTION;
    if !(pilot_end > 0.0) {
        return Ok(step_tol);
    }
    let norm0 = initial.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let mut solver = Dop853::new(h.rhs(), h.dim, Dop853Options::with_tolerance(step_tol));
    let state = solver.integrate(0.0, initial, &[pilot_end])?;
    let predicted = norm_drift(norm0, &state[0]) / PILOT_FRACTION;
    if predicted <= budget / 2.0 {
        return Ok(step_tol);
    }
    Ok((step_tol * budget / (2.0 * predicted)).max(MIN_TOLERANCE))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Lab-frame state vectors.
    pub amplitudes: Vec<Vec<C64>>,
    pub populations: Vec<Vec<f64>>,
    pub max_norm_drift: f64,
    pub stats: IntegrationStats,
}

impl Trajectory {
    pub fn final_state(&self) -> &[C64] {
        self.amplitudes.last().map_or(&[], |v| v.as_slice())
    }
}

pub fn check_tolerance(tolerance: f64) -> Result<(), OracleError> {
    if !(tolerance > MIN_TOLERANCE && tolerance < MAX_TOLERANCE) {
        return Err(OracleError::InvalidParameter {
            name: "tolerance",
            value: tolerance,
        });
    }
    Ok(())
}

/// Propagates `initial` (lab frame, `t = 0`) and samples at each of `times`.
///
/// `tolerance` is a global target: the per-step tolerance starts tighter, is
/// lowered by a pilot run over the first part of the span when the drift
/// extrapolates past ten times `tolerance`, and is reduced further, with a
/// rerun, while the measured drift still exceeds that.
pub fn propagate_hamiltonian(
    h: &DrivenHamiltonian,
    initial: &[C64],
    times: &[f64],
    tolerance: f64,
) -> Result<Trajectory, OracleError> {
    check_tolerance(tolerance)?;
    if initial.len() != h.dim {
        return Err(OracleError::DimensionMismatch {
            expected: h.dim,
            got: initial.len(),
        });
    }
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(OracleError::InvalidParameter {
            name: "time",
            value: *t,
        });
    }
    let norm0: f64 = initial.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let budget = DRIFT_BUDGET * tolerance;
    let end = times.iter().cloned().fold(0.0, f64::max);
    let mut step_tol = piloted_tolerance(h, initial, end, tolerance / INITIAL_TIGHTENING, budget)?;
    let mut attempt = 0;
    loop {
        attempt += 1;
        let mut solver = Dop853::new(h.rhs(), h.dim, Dop853Options::with_tolerance(step_tol));
        let framed = solver.integrate(0.0, initial, times)?;
        let stats = solver.stats;
        let amplitudes: Vec<Vec<C64>> = times
            .iter()
            .zip(&framed)
            .map(|(t, phi)| h.to_lab(*t, phi))
            .collect();
        let populations: Vec<Vec<f64>> = amplitudes
            .iter()
            .map(|v| v.iter().map(|x| x.norm_sqr()).collect())
            .collect();
        let max_norm_drift = amplitudes
            .iter()
            .map(|v| norm_drift(norm0, v))
            .fold(0.0, f64::max);
        if max_norm_drift <= budget || attempt == MAX_ATTEMPTS || step_tol / 4.0 <= MIN_TOLERANCE {
            return Ok(Trajectory {
                times: times.to_vec(),
                amplitudes,
                populations,
                max_norm_drift,
                stats,
            });
        }
        step_tol =
            (step_tol * budget / (2.0 * max_norm_drift)).clamp(MIN_TOLERANCE, step_tol / 4.0);
    }
}

pub fn propagate_at(
    system: &LabSystem,
    initial: &[C64],
    times: &[f64],
    tolerance: f64,
) -> Result<Trajectory, OracleError> {
    propagate_hamiltonian(&system.hamiltonian()?, initial, times, tolerance)
}

/// Propagates for `duration` with `samples` evenly spaced outputs (including `t = 0`).
pub fn propagate(
    system: &LabSystem,
    initial: &[C64],
    duration: f64,
    samples: usize,
    tolerance: f64,
) -> Result<Trajectory, OracleError> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(OracleError::InvalidParameter {
            name: "duration",
            value: duration,
        });
    }
    let samples = samples.max(2);
    let times: Vec<f64> = (0..samples)
        .map(|k| duration * k as f64 / (samples - 1) as f64)
        .collect();
    propagate_at(system, initial, &times, tolerance)
}
