use std::f64::consts::{FRAC_PI_2, TAU};

use spin_algebra::SpinValue;

use crate::{
    derive_layer, solve_delta_for_angle, DressedLayerResult, DressingError, LayerIndex, RfLayer,
};

/// Bohr magneton over Planck's constant.
pub const BOHR_MAGNETON_HZ_PER_TESLA: f64 = 1.399_624_493_61e10;

pub const DEFAULT_HIERARCHY_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldLabel {
    /// Lower (ground) manifold, lowercase indices.
    S,
    /// Upper (excited) manifold, uppercase indices.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinManifold {
    pub label: ManifoldLabel,
    pub spin: SpinValue,
    pub g_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticField {
    pub larmor: f64,
    pub b_tesla: Option<f64>,
    pub g_factor: Option<f64>,
}

impl StaticField {
    pub fn new(larmor: f64) -> Result<Self, DressingError> {
        if !(larmor > 0.0 && larmor.is_finite()) {
            return Err(DressingError::InvalidParameter {
                name: "Larmor frequency",
                value: larmor,
            });
        }
        Ok(StaticField {
            larmor,
            b_tesla: None,
            g_factor: None,
        })
    }

    /// `ω_0 = g μ_B B`.
    pub fn from_field(b_tesla: f64, g_factor: f64) -> Result<Self, DressingError> {
        let larmor = TAU * BOHR_MAGNETON_HZ_PER_TESLA * g_factor * b_tesla;
        let mut field = StaticField::new(larmor)?;
        field.b_tesla = Some(b_tesla);
        field.g_factor = Some(g_factor);
        Ok(field)
    }
}

pub fn magic_angle() -> f64 {
    (1.0 / 3.0f64.sqrt()).acos()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyReport {
    pub threshold: f64,
    /// `2ω_1 / (amp_1/2)`.
    pub ratio1: f64,
    /// `2ω_2 / (amp_2/4)`.
    pub ratio2: Option<f64>,
    /// `ω̄̄_0 < ω_2 < ω_1`.
    pub ordering_ok: bool,
    pub warnings: Vec<String>,
}

impl HierarchyReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }

    /// Largest small parameter, i.e. the inverse of the weakest ratio.
    pub fn worst_inverse_ratio(&self) -> f64 {
        let r2 = self.ratio2.unwrap_or(f64::INFINITY);
        1.0 / self.ratio1.min(r2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressingConfig {
    pub manifold: SpinManifold,
    pub static_field: StaticField,
    pub layer1: RfLayer,
    pub layer2: Option<RfLayer>,
    pub derived1: DressedLayerResult,
    pub derived2: Option<DressedLayerResult>,
    pub hierarchy: HierarchyReport,
}

impl DressingConfig {
    pub fn new(
        manifold: SpinManifold,
        static_field: StaticField,
        layer1: RfLayer,
        layer2: Option<RfLayer>,
    ) -> Result<Self, DressingError> {
        Self::with_threshold(
            manifold,
            static_field,
            layer1,
            layer2,
            DEFAULT_HIERARCHY_THRESHOLD,
        )
    }

    pub fn with_threshold(
        manifold: SpinManifold,
        static_field: StaticField,
        layer1: RfLayer,
        layer2: Option<RfLayer>,
        threshold: f64,
    ) -> Result<Self, DressingError> {
        let derived1 = derive_layer(static_field.larmor, &layer1, LayerIndex::First)?;
        let derived2 = match &layer2 {
            Some(l2) => Some(derive_layer(derived1.splitting, l2, LayerIndex::Second)?),
            None => None,
        };
        let hierarchy = hierarchy_report(&layer1, layer2.as_ref(), derived2.as_ref(), threshold);
        Ok(DressingConfig {
            manifold,
            static_field,
            layer1,
            layer2,
            derived1,
            derived2,
            hierarchy,
        })
    }

    /// Same drives, different bare Larmor frequency.
    pub fn with_larmor(&self, larmor: f64) -> Result<Self, DressingError> {
        let mut field = StaticField::new(larmor)?;
        field.g_factor = self.static_field.g_factor;
        Self::with_threshold(
            self.manifold,
            field,
            self.layer1,
            self.layer2,
            self.hierarchy.threshold,
        )
    }

    pub fn theta1(&self) -> f64 {
        self.derived1.theta
    }

    pub fn theta2(&self) -> f64 {
        self.derived2.map_or(0.0, |d| d.theta)
    }

    pub fn omega1(&self) -> f64 {
        self.layer1.omega
    }

    pub fn omega2(&self) -> f64 {
        self.layer2.map_or(0.0, |l| l.omega)
    }

    pub fn amp2(&self) -> f64 {
        self.layer2.map_or(0.0, |l| l.amp)
    }

    /// Polarization angle of the manifold's rf field.
    pub fn alpha(&self) -> f64 {
        self.layer1.alpha
    }

    /// `ω̄̄_0` when a second layer exists, otherwise `ω̄_0`.
    pub fn innermost_splitting(&self) -> f64 {
        self.derived2
            .map_or(self.derived1.splitting, |d| d.splitting)
    }
}

fn hierarchy_report(
    layer1: &RfLayer,
    layer2: Option<&RfLayer>,
    derived2: Option<&DressedLayerResult>,
    threshold: f64,
) -> HierarchyReport {
    let mut warnings = Vec::new();
    let ratio1 = 2.0 * layer1.omega / (layer1.amp / 2.0);
    if ratio1 < threshold {
        warnings.push(format!(
            "first layer: 2ω_1/(amp_1/2) = {ratio1:.3} below {threshold}"
        ));
    }
    let mut ordering_ok = true;
    let ratio2 = layer2.map(|l2| {
        let r = 2.0 * l2.omega / (l2.amp / 4.0);
        if r < threshold {
            warnings.push(format!(
                "second layer: 2ω_2/(amp_2/4) = {r:.3} below {threshold}"
            ));
        }
        if l2.omega >= layer1.omega {
            ordering_ok = false;
        }
        if let Some(d2) = derived2 {
            if d2.splitting >= l2.omega {
                ordering_ok = false;
            }
        }
        if (l2.alpha - layer1.alpha).abs() > 1e-12 {
            warnings.push(
                "layers use different polarization angles; the first-layer angle is used".into(),
            );
        }
        r
    });
    if !ordering_ok {
        warnings.push("expected ordering ω̄̄_0 < ω_2 < ω_1 is violated".into());
    }
    HierarchyReport {
        threshold,
        ratio1,
        ratio2,
        ordering_ok,
        warnings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecouplingAssignment {
    /// Zeeman shift nulled by the first layer, quadrupole shift by the second.
    ZeemanFirst,
    /// Quadrupole shift nulled by the first layer, Zeeman shift by the second.
    QuadrupoleFirst,
}

impl DecouplingAssignment {
    /// Target mixing angles `(θ_1, θ_2)`.
    pub fn angles(self) -> (f64, f64) {
        match self {
            DecouplingAssignment::ZeemanFirst => (FRAC_PI_2, magic_angle()),
            DecouplingAssignment::QuadrupoleFirst => (magic_angle(), FRAC_PI_2),
        }
    }
}

/// Drive frequencies that put both layers at the angles required by
/// `assignment` for the given amplitudes.
pub fn design_decoupling(
    manifold: SpinManifold,
    static_field: StaticField,
    amps: (f64, f64),
    assignment: DecouplingAssignment,
    alpha: f64,
) -> Result<DressingConfig, DressingError> {
    design_at_larmor(
        manifold,
        static_field,
        static_field.larmor,
        amps,
        assignment,
        alpha,
    )
}

/// As [`design_decoupling`], but the detunings are referenced to
/// `effective_larmor` (for instance a Magnus-shifted Larmor frequency) while
/// the returned config keeps the bare static field.
pub fn design_at_larmor(
    manifold: SpinManifold,
    static_field: StaticField,
    effective_larmor: f64,
    amps: (f64, f64),
    assignment: DecouplingAssignment,
    alpha: f64,
) -> Result<DressingConfig, DressingError> {
    let (t1, t2) = assignment.angles();
    if !(amps.0 > 0.0) {
        return Err(DressingError::DegenerateLayer {
            layer: LayerIndex::First,
        });
    }
    if !(amps.1 > 0.0) {
        return Err(DressingError::DegenerateLayer {
            layer: LayerIndex::Second,
        });
    }
    let delta1 = solve_delta_for_angle(t1, amps.0, LayerIndex::First)?;
    let layer1 = RfLayer::new(effective_larmor - delta1, amps.0, alpha)?;
    let splitting1 = delta1.hypot(amps.0 / 2.0);
    let delta2 = solve_delta_for_angle(t2, amps.1, LayerIndex::Second)?;
    let layer2 = RfLayer::new(splitting1 - delta2, amps.1, alpha)?;
    DressingConfig::new(manifold, static_field, layer1, Some(layer2))
}
