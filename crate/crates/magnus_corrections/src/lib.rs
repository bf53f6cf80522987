//! Leading-order Magnus corrections to the rotating-wave dressing picture.
//!
//! Both corrections are coefficients of `S_z` for the target manifold and are
//! absorbed by shifting its bare Larmor frequency before the dressing layers
//! are derived.

use dressing_engine::{
    design_at_larmor, DecouplingAssignment, DressingConfig, DressingError, SpinManifold,
    StaticField,
};
use thiserror::Error;

/// Above this validity ratio the shift is reported but should not be trusted blindly.
pub const VALIDITY_WARNING: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MagnusError {
    #[error("ω_0 + ω_1 = {sum} must be positive")]
    InvalidFrequency { sum: f64 },
    #[error("cross drive at {omega} is resonant with the target Larmor frequency")]
    ResonantCrossDrive { omega: f64 },
    #[error(transparent)]
    Dressing(#[from] DressingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftSource {
    CounterRotating,
    CrossField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusShift {
    pub coeff: f64,
    pub source: ShiftSource,
    pub validity_ratio: f64,
}

impl MagnusShift {
    pub fn is_trustworthy(&self) -> bool {
        self.validity_ratio < 1.0
    }

    pub fn needs_warning(&self) -> bool {
        self.validity_ratio > VALIDITY_WARNING
    }
}

/// Counter-rotating shift `((gΩ_1)² + (gΩ_2)²) / (8(ω_0 + ω_1))`.
pub fn bloch_siegert_shift(
    larmor: f64,
    omega1: f64,
    amps: (f64, f64),
) -> Result<MagnusShift, MagnusError> {
    let sum = larmor + omega1;
    if !(sum > 0.0) {
        return Err(MagnusError::InvalidFrequency { sum });
    }
    let power = amps.0 * amps.0 + amps.1 * amps.1;
    Ok(MagnusShift {
        coeff: larmor * power / (8.0 * larmor * sum),
        source: ShiftSource::CounterRotating,
        validity_ratio: amps.0.abs().max(amps.1.abs()) / sum,
    })
}

/// Shift of a target manifold from another manifold's first-layer drive,
/// `ω_0 ((gΩ_1)² + (gΩ_2)²) / (4(ω_0² − ω_1²))`, with amplitudes as felt by
/// the target.
pub fn cross_field_shift(
    target_larmor: f64,
    source_omega1: f64,
    felt_amps: (f64, f64),
) -> Result<MagnusShift, MagnusError> {
    let gap_minus = target_larmor - source_omega1;
    let gap_plus = target_larmor + source_omega1;
    if gap_minus == 0.0 || gap_plus == 0.0 {
        return Err(MagnusError::ResonantCrossDrive {
            omega: source_omega1,
        });
    }
    let power = felt_amps.0 * felt_amps.0 + felt_amps.1 * felt_amps.1;
    let max_amp = felt_amps.0.abs().max(felt_amps.1.abs());
    Ok(MagnusShift {
        coeff: target_larmor * 0.25 * power / (gap_minus * gap_plus),
        source: ShiftSource::CrossField,
        validity_ratio: max_amp / gap_minus.abs().min(gap_plus.abs()),
    })
}

/// Amplitude a target manifold feels from a shared field stored as
/// `g_source·Ω`.
pub fn felt_amplitude(source_amp: f64, g_source: f64, g_target: f64) -> f64 {
    source_amp * g_target / g_source
}

fn own_shift(cfg: &DressingConfig) -> Result<MagnusShift, MagnusError> {
    bloch_siegert_shift(
        cfg.static_field.larmor,
        cfg.layer1.omega,
        (cfg.layer1.amp, cfg.amp2()),
    )
}

/// Cross-field shift of `target` from the drives of `source`.
pub fn cross_shift_between(
    target: &DressingConfig,
    source: &DressingConfig,
) -> Result<MagnusShift, MagnusError> {
    let (gs, gt) = (source.manifold.g_factor, target.manifold.g_factor);
    let felt = (
        felt_amplitude(source.layer1.amp, gs, gt),
        felt_amplitude(source.amp2(), gs, gt),
    );
    cross_field_shift(target.static_field.larmor, source.layer1.omega, felt)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedSplittings {
    pub larmor_s: f64,
    pub larmor_d: f64,
    pub bloch_siegert_s: MagnusShift,
    pub cross_s: MagnusShift,
    pub bloch_siegert_d: MagnusShift,
    pub cross_d: MagnusShift,
    /// Input configs re-derived at the shifted Larmor frequencies.
    pub config_s: DressingConfig,
    pub config_d: DressingConfig,
}

impl CorrectedSplittings {
    pub fn worst_validity_ratio(&self) -> f64 {
        [
            self.bloch_siegert_s,
            self.cross_s,
            self.bloch_siegert_d,
            self.cross_d,
        ]
        .iter()
        .fold(0.0, |a, s| a.max(s.validity_ratio))
    }
}

pub fn corrected_splittings(
    s: &DressingConfig,
    d: &DressingConfig,
) -> Result<CorrectedSplittings, MagnusError> {
    let bloch_siegert_s = own_shift(s)?;
    let bloch_siegert_d = own_shift(d)?;
    let cross_s = cross_shift_between(s, d)?;
    let cross_d = cross_shift_between(d, s)?;
    let larmor_s = s.static_field.larmor + bloch_siegert_s.coeff + cross_s.coeff;
    let larmor_d = d.static_field.larmor + bloch_siegert_d.coeff + cross_d.coeff;
    Ok(CorrectedSplittings {
        larmor_s,
        larmor_d,
        bloch_siegert_s,
        cross_s,
        bloch_siegert_d,
        cross_d,
        config_s: s.with_larmor(larmor_s)?,
        config_d: d.with_larmor(larmor_d)?,
    })
}

/// Decoupling design whose angles hold after the Bloch–Siegert shift and,
/// when `other` is given, the cross-field shift from that manifold's drives.
pub fn design_decoupling_corrected(
    manifold: SpinManifold,
    static_field: StaticField,
    amps: (f64, f64),
    assignment: DecouplingAssignment,
    alpha: f64,
    other: Option<&DressingConfig>,
) -> Result<DressingConfig, MagnusError> {
    let mut effective = static_field.larmor;
    let mut cfg = design_at_larmor(manifold, static_field, effective, amps, assignment, alpha)?;
    for _ in 0..50 {
        let mut shift = own_shift(&cfg)?.coeff;
        if let Some(src) = other {
            shift += cross_shift_between(&cfg, src)?.coeff;
        }
        let next = static_field.larmor + shift;
        let converged = (next - effective).abs() <= 1e-15 * next;
        effective = next;
        cfg = design_at_larmor(manifold, static_field, effective, amps, assignment, alpha)?;
        if converged {
            break;
        }
    }
    Ok(cfg)
}
