//! JSON experiment configuration. Frequencies are stored in Hz and converted
//! to rad/s on load.

use std::f64::consts::TAU;
use std::path::Path;

use dressing_engine::{
    DressingConfig, ManifoldLabel, RfLayer, SpinManifold, StaticField, BOHR_MAGNETON_HZ_PER_TESLA,
};
use ms_gate::MotionalMode;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use spin_algebra::{HalfInt, SpinValue};
use transition_comb::BareCoupling;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub static_field: StaticFieldSpec,
    /// Lower manifold first.
    pub manifolds: [ManifoldSpec; 2],
    pub laser: LaserSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSpec>,
    #[serde(default)]
    pub oracle: OracleSpec,
}

/// Either the lower manifold's Larmor frequency or the field in tesla.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticFieldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub larmor_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_tesla: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSpec {
    S,
    D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub label: LabelSpec,
    pub two_s: u32,
    pub g_factor: f64,
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    pub omega_hz: f64,
    pub amp_hz: f64,
    /// Whether `amp_hz` already contains the g-factor. Required.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amp_includes_g: Option<bool>,
    #[serde(default)]
    pub alpha_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserSpec {
    pub couplings: CouplingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CouplingSpec {
    /// `"normalized"`: unit coupling on every allowed pair.
    Preset(String),
    List(Vec<PairCoupling>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCoupling {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub re_hz: f64,
    #[serde(default)]
    pub im_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub nu_hz: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub tolerance: f64,
    pub fock_cutoff: usize,
}

impl Default for OracleSpec {
    fn default() -> Self {
        OracleSpec {
            tolerance: 1e-10,
            fock_cutoff: 8,
        }
    }
}

/// A validated configuration with everything converted to rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub raw: ExperimentConfig,
    pub s: DressingConfig,
    pub d: DressingConfig,
    pub coupling: BareCoupling,
    pub mode: Option<MotionalMode>,
    pub oracle: OracleSpec,
    pub warnings: Vec<String>,
}

impl LoadedConfig {
    pub fn double_layer(&self) -> bool {
        self.s.layer2.is_some() && self.d.layer2.is_some()
    }
}

pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Schema {
            path: origin.to_path_buf(),
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw = parse_config(&text, path)?;
    validate(raw)
}

/// Canonical JSON text of a configuration file.
pub fn normalize(text: &str) -> Result<String, CliError> {
    let raw = parse_config(text, Path::new("<input>"))?;
    dump(&raw)
}

pub fn dump(raw: &ExperimentConfig) -> Result<String, CliError> {
    serde_json::to_string_pretty(raw).map_err(|e| CliError::Output(e.to_string()))
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Validation(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn manifold_label(label: LabelSpec) -> ManifoldLabel {
    match label {
        LabelSpec::S => ManifoldLabel::S,
        LabelSpec::D => ManifoldLabel::D,
    }
}

fn build_layers(spec: &ManifoldSpec, at: &str) -> Result<Vec<RfLayer>, CliError> {
    if spec.layers.is_empty() || spec.layers.len() > 2 {
        return Err(CliError::Validation(format!(
            "{at}.layers must hold one or two layers, got {}",
            spec.layers.len()
        )));
    }
    spec.layers
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let here = format!("{at}.layers[{i}]");
            let includes_g = l.amp_includes_g.ok_or_else(|| {
                CliError::Validation(format!(
                    "{here}.amp_includes_g is required: a quoted drive amplitude may be either the bare Rabi \
                     frequency or already multiplied by the g-factor (the Ca+ reference table does not say which), \
                     so the file must state it"
                ))
            })?;
            let omega = positive(&format!("{here}.omega_hz"), l.omega_hz)?;
            let amp = positive(&format!("{here}.amp_hz"), l.amp_hz)?;
            if !l.alpha_rad.is_finite() {
                return Err(CliError::Validation(format!("{here}.alpha_rad must be finite")));
            }
            let scale = if includes_g { 1.0 } else { spec.g_factor };
            RfLayer::new(TAU * omega, TAU * amp * scale, l.alpha_rad)
                .map_err(|e| CliError::Validation(format!("{here}: {e}")))
        })
        .collect()
}

fn build_coupling(
    spec: &CouplingSpec,
    spins: (SpinValue, SpinValue),
) -> Result<BareCoupling, CliError> {
    match spec {
        CouplingSpec::Preset(name) if name == "normalized" => Ok(BareCoupling::normalized(spins)),
        CouplingSpec::Preset(name) => Err(CliError::Validation(format!(
            "laser.couplings: unknown preset `{name}` (expected \"normalized\" or a list)"
        ))),
        CouplingSpec::List(pairs) => {
            let mut c = BareCoupling::empty(spins);
            for (i, p) in pairs.iter().enumerate() {
                let half = |v: f64, what: &str| {
                    HalfInt::new(v).map_err(|e| {
                        CliError::Validation(format!("laser.couplings[{i}].{what}: {e}"))
                    })
                };
                if !(p.re_hz.is_finite() && p.im_hz.is_finite()) {
                    return Err(CliError::Validation(format!(
                        "laser.couplings[{i}] must be finite"
                    )));
                }
                c.set(
                    half(p.m, "m")?,
                    half(p.big_m, "M")?,
                    C64::new(TAU * p.re_hz, TAU * p.im_hz),
                )
                .map_err(|e| CliError::Validation(format!("laser.couplings[{i}]: {e}")))?;
            }
            Ok(c)
        }
    }
}

pub fn validate(raw: ExperimentConfig) -> Result<LoadedConfig, CliError> {
    if raw.schema_version != SCHEMA_VERSION {
        return Err(CliError::Validation(format!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    let [ms, md] = &raw.manifolds;
    if ms.label != LabelSpec::S || md.label != LabelSpec::D {
        return Err(CliError::Validation(
            "manifolds must be listed as [s, d]".into(),
        ));
    }
    let mut manifolds = Vec::with_capacity(2);
    for (i, m) in raw.manifolds.iter().enumerate() {
        if m.two_s == 0 {
            return Err(CliError::Validation(format!(
                "manifolds[{i}].two_s must be at least 1"
            )));
        }
        positive(&format!("manifolds[{i}].g_factor"), m.g_factor)?;
        manifolds.push(SpinManifold {
            label: manifold_label(m.label),
            spin: SpinValue::new(m.two_s),
            g_factor: m.g_factor,
        });
    }
    let fields = match (raw.static_field.larmor_hz, raw.static_field.b_tesla) {
        (Some(hz), None) => {
            let larmor = TAU * positive("static_field.larmor_hz", hz)?;
            let b = hz / (BOHR_MAGNETON_HZ_PER_TESLA * ms.g_factor);
            let field = |g: f64| -> Result<StaticField, CliError> {
                let mut f = StaticField::new(larmor * g / ms.g_factor)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                f.b_tesla = Some(b);
                f.g_factor = Some(g);
                Ok(f)
            };
            [field(ms.g_factor)?, field(md.g_factor)?]
        }
        (None, Some(b)) => {
            let b = positive("static_field.b_tesla", b)?;
            let field = |g: f64| {
                StaticField::from_field(b, g).map_err(|e| CliError::Validation(e.to_string()))
            };
            [field(ms.g_factor)?, field(md.g_factor)?]
        }
        _ => {
            return Err(CliError::Validation(
                "static_field needs exactly one of larmor_hz (lower manifold) or b_tesla".into(),
            ))
        }
    };
    let mut configs = Vec::with_capacity(2);
    let mut warnings = Vec::new();
    for (i, m) in raw.manifolds.iter().enumerate() {
        let at = format!("manifolds[{i}]");
        let layers = build_layers(m, &at)?;
        let cfg = DressingConfig::new(manifolds[i], fields[i], layers[0], layers.get(1).copied())
            .map_err(|e| CliError::Validation(format!("{at}: {e}")))?;
        warnings.extend(cfg.hierarchy.warnings.iter().map(|w| format!("{at}: {w}")));
        configs.push(cfg);
    }
    let d = configs.pop().expect("two manifolds");
    let s = configs.pop().expect("two manifolds");
    let coupling = build_coupling(&raw.laser.couplings, (s.manifold.spin, d.manifold.spin))?;
    positive("oracle.tolerance", raw.oracle.tolerance)?;
    let mode = match &raw.mode {
        Some(m) => Some(
            MotionalMode::new(TAU * m.nu_hz, m.eta, raw.oracle.fock_cutoff)
                .map_err(|e| CliError::Validation(format!("mode: {e}")))?,
        ),
        None => None,
    };
    if let Some(mode) = &mode {
        warnings.extend(mode.warnings().into_iter().map(|w| format!("mode: {w}")));
    }
    let oracle = raw.oracle.clone();
    Ok(LoadedConfig {
        raw,
        s,
        d,
        coupling,
        mode,
        oracle,
        warnings,
    })
}

impl LoadedConfig {
    pub fn spins(&self) -> (SpinValue, SpinValue) {
        (self.s.manifold.spin, self.d.manifold.spin)
    }
}
