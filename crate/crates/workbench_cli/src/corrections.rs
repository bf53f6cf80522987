use dressing_engine::DressingConfig;
use magnus_corrections::corrected_splittings;

use crate::{CliError, LoadedConfig};

/// The configs used for predictions: as loaded, or re-derived at the
/// Bloch–Siegert and cross-field shifted Larmor frequencies.
pub fn prediction_configs(
    cfg: &LoadedConfig,
    corrections: bool,
) -> Result<(DressingConfig, DressingConfig), CliError> {
    if corrections {
        let c = corrected_splittings(&cfg.s, &cfg.d)
            .map_err(|e| CliError::computation("Magnus corrections", e))?;
        Ok((c.config_s, c.config_d))
    } else {
        Ok((cfg.s.clone(), cfg.d.clone()))
    }
}
