//! Mølmer–Sørensen gate planning for a bichromatic drive on one dressed
//! transition: sideband detunings, the phase-space loop `α(t)`, the
//! geometric phase `Φ(t)` and a closed-loop gate plan.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use thiserror::Error;
use transition_comb::{resonance_detuning, CombSetup, TransitionIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("MS detuning δ must be nonzero")]
    ResonantSideband,
    #[error("hierarchy violated: {name} = {value} must lie in (0, 1)")]
    HierarchyViolation { name: &'static str, value: f64 },
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionalMode {
    pub nu: f64,
    pub eta: f64,
    pub fock_cutoff: usize,
}

impl MotionalMode {
    pub fn new(nu: f64, eta: f64, fock_cutoff: usize) -> Result<Self, GateError> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(GateError::InvalidParameter {
                name: "mode frequency",
                value: nu,
            });
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(GateError::InvalidParameter {
                name: "Lamb-Dicke parameter",
                value: eta,
            });
        }
        if fock_cutoff < 4 {
            return Err(GateError::InvalidParameter {
                name: "Fock cutoff",
                value: fock_cutoff as f64,
            });
        }
        Ok(MotionalMode {
            nu,
            eta,
            fock_cutoff,
        })
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.eta > 0.3 {
            vec![format!("Lamb-Dicke parameter {} is not small", self.eta)]
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandDetunings {
    pub red: f64,
    pub blue: f64,
}

/// Laser detunings that sit `δ` inside the red and blue motional sidebands
/// of the chosen dressed transition.
pub fn sideband_conditions(
    index: &TransitionIndex,
    setup: &CombSetup,
    mode: &MotionalMode,
    delta: f64,
) -> SidebandDetunings {
    let carrier = resonance_detuning(index, setup);
    SidebandDetunings {
        red: carrier - mode.nu + delta,
        blue: carrier + mode.nu - delta,
    }
}

/// `α(t) = (Ω/δ)(e^{−iδt} − 1)`.
pub fn displacement(t: f64, omega: f64, delta: f64) -> Result<C64, GateError> {
    if delta == 0.0 {
        return Err(GateError::ResonantSideband);
    }
    Ok((C64::from_polar(1.0, -delta * t) - 1.0) * (omega / delta))
}

/// `Φ(t) = (Ω²/δ)[t − sin(δt)/δ]`.
pub fn geometric_phase(t: f64, omega: f64, delta: f64) -> Result<f64, GateError> {
    if delta == 0.0 {
        return Err(GateError::ResonantSideband);
    }
    Ok(omega * omega / delta * (t - (delta * t).sin() / delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyRatios {
    pub omega_over_delta: f64,
    pub delta_over_splitting: f64,
}

impl HierarchyRatios {
    pub fn within(&self, limit: f64) -> bool {
        self.omega_over_delta <= limit && self.delta_over_splitting <= limit
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatePlan {
    pub omega: f64,
    pub delta: f64,
    pub n_loops: u32,
    pub k_phase: u32,
    pub n_ions: u32,
    pub duration: f64,
    pub hierarchy: HierarchyRatios,
    /// True when Ω was moved off the requested ratio to close the loops.
    pub omega_adjusted: bool,
}

impl GatePlan {
    pub fn final_displacement(&self) -> C64 {
        displacement(self.duration, self.omega, self.delta).expect("plan has δ ≠ 0")
    }

    pub fn final_phase(&self) -> f64 {
        geometric_phase(self.duration, self.omega, self.delta).expect("plan has δ ≠ 0")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRequest {
    pub omega_over_delta: f64,
    pub delta_over_splitting: f64,
    pub n_loops: Option<u32>,
    pub k_phase: Option<u32>,
    pub n_ions: u32,
}

impl Default for PlanRequest {
    fn default() -> Self {
        PlanRequest {
            omega_over_delta: 1.0 / 3.0,
            delta_over_splitting: 1.0 / 3.0,
            n_loops: None,
            k_phase: None,
            n_ions: 2,
        }
    }
}

/// Closed-loop plan: `δT = 2πn` and `Φ(T) = 2πK`.
pub fn plan_gate(omega_bbar_d: f64, request: &PlanRequest) -> Result<GatePlan, GateError> {
    if !(omega_bbar_d > 0.0 && omega_bbar_d.is_finite()) {
        return Err(GateError::InvalidParameter {
            name: "dressed splitting",
            value: omega_bbar_d,
        });
    }
    for (name, value) in [
        ("Ω/δ", request.omega_over_delta),
        ("δ/ω̄̄_0", request.delta_over_splitting),
    ] {
        if !(value > 0.0 && value < 1.0) {
            return Err(GateError::HierarchyViolation { name, value });
        }
    }
    let delta = request.delta_over_splitting * omega_bbar_d;
    let k_phase = request.k_phase.unwrap_or(1).max(1);
    let requested_omega = request.omega_over_delta * delta;
    let n_loops = match request.n_loops {
        Some(n) if n > 0 => n,
        Some(n) => {
            return Err(GateError::InvalidParameter {
                name: "loop count",
                value: f64::from(n),
            })
        }
        None => {
            let implied = f64::from(k_phase) / request.omega_over_delta.powi(2);
            implied.round().max(1.0) as u32
        }
    };
    let omega = delta * (f64::from(k_phase) / f64::from(n_loops)).sqrt();
    let omega_adjusted = (omega - requested_omega).abs() > 1e-12 * requested_omega;
    let duration = TAU * f64::from(n_loops) / delta;
    Ok(GatePlan {
        omega,
        delta,
        n_loops,
        k_phase,
        n_ions: request.n_ions,
        duration,
        hierarchy: HierarchyRatios {
            omega_over_delta: omega / delta,
            delta_over_splitting: delta / omega_bbar_d,
        },
        omega_adjusted,
    })
}
