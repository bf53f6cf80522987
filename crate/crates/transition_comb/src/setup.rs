use dressing_engine::DressingConfig;
use spin_algebra::SpinValue;

use crate::CombError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombMode {
    Single,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerFrequencies {
    /// `ω̄_0`.
    pub splitting1: f64,
    /// `ω̄̄_0`, absent for a single layer.
    pub splitting2: Option<f64>,
    pub omega1: f64,
    pub omega2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedManifold {
    pub spin: SpinValue,
    pub angles: ManifoldAngles,
    pub freqs: LayerFrequencies,
}

impl DressedManifold {
    pub fn from_config(cfg: &DressingConfig) -> Self {
        DressedManifold {
            spin: cfg.manifold.spin,
            angles: ManifoldAngles {
                theta1: cfg.theta1(),
                theta2: cfg.theta2(),
                alpha: cfg.alpha(),
            },
            freqs: LayerFrequencies {
                splitting1: cfg.derived1.splitting,
                splitting2: cfg.derived2.map(|d| d.splitting),
                omega1: cfg.omega1(),
                omega2: cfg.omega2(),
            },
        }
    }

    /// The manifold with its second layer switched off.
    pub fn single_layer(&self) -> Self {
        DressedManifold {
            spin: self.spin,
            angles: ManifoldAngles {
                theta2: 0.0,
                ..self.angles
            },
            freqs: LayerFrequencies {
                splitting2: None,
                omega2: 0.0,
                ..self.freqs
            },
        }
    }

    /// Innermost splitting: `ω̄̄_0` when present, else `ω̄_0`.
    pub fn innermost_splitting(&self) -> f64 {
        self.freqs.splitting2.unwrap_or(self.freqs.splitting1)
    }
}

/// Both manifolds, lower (`s`) first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombSetup {
    pub s: DressedManifold,
    pub d: DressedManifold,
    /// Constant added to every resonance, e.g. a calibrated carrier offset.
    pub carrier_offset: f64,
}

impl CombSetup {
    pub fn new(s: DressedManifold, d: DressedManifold) -> Self {
        CombSetup {
            s,
            d,
            carrier_offset: 0.0,
        }
    }

    pub fn from_configs(s: &DressingConfig, d: &DressingConfig) -> Self {
        Self::new(
            DressedManifold::from_config(s),
            DressedManifold::from_config(d),
        )
    }

    pub fn spins(&self) -> (SpinValue, SpinValue) {
        (self.s.spin, self.d.spin)
    }

    pub fn single_layer(&self) -> Self {
        CombSetup {
            s: self.s.single_layer(),
            d: self.d.single_layer(),
            ..*self
        }
    }

    pub fn for_mode(&self, mode: CombMode) -> Result<Self, CombError> {
        match mode {
            CombMode::Single => Ok(self.single_layer()),
            CombMode::Double => {
                if self.s.freqs.splitting2.is_none() || self.d.freqs.splitting2.is_none() {
                    Err(CombError::MissingSecondLayer)
                } else {
                    Ok(*self)
                }
            }
        }
    }
}

/// Laser detuning `Δ_L = ω_L − ω_sd` from the bare optical transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserDrive {
    pub detuning: f64,
}
