use crate::DressingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerIndex {
    First,
    Second,
}

impl LayerIndex {
    /// Amplitude divisor: 2 for the first layer, 4 for the second.
    pub fn amp_divisor(self) -> f64 {
        match self {
            LayerIndex::First => 2.0,
            LayerIndex::Second => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfLayer {
    pub omega: f64,
    pub amp: f64,
    pub alpha: f64,
}

impl RfLayer {
    pub fn new(omega: f64, amp: f64, alpha: f64) -> Result<Self, DressingError> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(DressingError::InvalidParameter {
                name: "rf frequency",
                value: omega,
            });
        }
        if !(amp >= 0.0 && amp.is_finite()) {
            return Err(DressingError::InvalidParameter {
                name: "rf amplitude",
                value: amp,
            });
        }
        if !alpha.is_finite() {
            return Err(DressingError::InvalidParameter {
                name: "polarization angle",
                value: alpha,
            });
        }
        Ok(RfLayer { omega, amp, alpha })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedLayerResult {
    pub delta: f64,
    pub theta: f64,
    pub splitting: f64,
    pub rotation_axis: [f64; 3],
}

/// Detuning, mixing angle and splitting of one layer relative to the
/// splitting it dresses (`ω_0` for the first layer, `ω̄_0` for the second).
pub fn derive_layer(
    reference: f64,
    layer: &RfLayer,
    index: LayerIndex,
) -> Result<DressedLayerResult, DressingError> {
    if !(reference > 0.0 && reference.is_finite()) {
        return Err(DressingError::InvalidParameter {
            name: "reference splitting",
            value: reference,
        });
    }
    let delta = reference - layer.omega;
    let half = layer.amp / index.amp_divisor();
    let splitting = delta.hypot(half);
    if splitting == 0.0 {
        return Err(DressingError::DegenerateLayer { layer: index });
    }
    let theta = (delta / splitting).clamp(-1.0, 1.0).acos();
    let (sa, ca) = layer.alpha.sin_cos();
    let rotation_axis = match index {
        LayerIndex::First => [-sa, ca, 0.0],
        LayerIndex::Second => [-ca, -sa, 0.0],
    };
    Ok(DressedLayerResult {
        delta,
        theta,
        splitting,
        rotation_axis,
    })
}

/// Detuning that makes `derive_layer` return `target_theta` at this amplitude.
pub fn solve_delta_for_angle(
    target_theta: f64,
    amp: f64,
    index: LayerIndex,
) -> Result<f64, DressingError> {
    if !(target_theta > 0.0 && target_theta < std::f64::consts::PI) {
        return Err(DressingError::UnreachableAngle {
            theta: target_theta,
        });
    }
    if !(amp > 0.0 && amp.is_finite()) {
        return Err(DressingError::DegenerateLayer { layer: index });
    }
    let half = amp / index.amp_divisor();
    let (s, c) = target_theta.sin_cos();
    Ok(half * c / s)
}
