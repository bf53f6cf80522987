//! Configuration loading, report generation and deterministic output for the
//! `cddcomb` command-line tool.

pub mod commands;
mod config;
mod corrections;
mod error;
pub mod output;
pub mod table2;
pub mod verify;

pub use config::{
    dump, load_config, normalize, parse_config, validate, CouplingSpec, ExperimentConfig,
    LabelSpec, LaserSpec, LayerSpec, LoadedConfig, ManifoldSpec, ModeSpec, OracleSpec,
    PairCoupling, StaticFieldSpec, SCHEMA_VERSION,
};
pub use corrections::prediction_configs;
pub use error::CliError;

/// Bundled Ca⁺ case-study configuration.
pub const BUNDLED_TABLE1: &str = include_str!("../data/ca40_table1.json");
