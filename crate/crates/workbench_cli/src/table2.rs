//! The 24-line single-layer reference data set for Ca⁺ and its comparison
//! against calibrated predictions.

use std::f64::consts::TAU;

use dressing_engine::{calibrate_splittings, Calibration, CalibrationLine, CalibrationModel};
use serde::Deserialize;
use spin_algebra::{wigner_d, HalfInt};
use transition_comb::{
    fit_single_layer_angles, rabi_ratio, resonance_detuning, AngleFit, CombMode, CombSetup,
    RatioObservation, TransitionIndex,
};

use crate::corrections::prediction_configs;
use crate::{CliError, LoadedConfig};

pub const BUNDLED_TABLE2: &str = include_str!("../data/ca40_table2.csv");

/// Zero-based rows used to calibrate the splittings and the common offset.
pub const CALIBRATION_ROWS: [usize; 4] = [0, 1, 10, 23];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceLine {
    pub m: HalfInt,
    pub big_m: HalfInt,
    pub m_bar: HalfInt,
    pub big_m_bar: HalfInt,
    /// Calculated resonance, rad/s.
    pub detuning_calc: f64,
    /// Measured resonance, rad/s.
    pub detuning_exp: f64,
    pub ratio_calc: f64,
    /// Measured effective Rabi frequency, rad/s.
    pub rabi_exp: f64,
}

#[derive(Deserialize)]
struct Row {
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    mbar: f64,
    #[serde(rename = "Mbar")]
    big_m_bar: f64,
    detuning_calc_mhz: f64,
    detuning_exp_mhz: f64,
    ratio_calc: f64,
    rabi_exp_khz: f64,
}

fn half(v: f64, what: &str, row: usize) -> Result<HalfInt, CliError> {
    HalfInt::new(v).map_err(|e| CliError::Validation(format!("row {row} column {what}: {e}")))
}

/// Parses the reference layout (`m,M,mbar,Mbar,detuning_calc_mhz,
/// detuning_exp_mhz,ratio_calc,rabi_exp_khz`).
pub fn parse_reference(text: &str) -> Result<Vec<ReferenceLine>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<Row>().enumerate() {
        let r =
            rec.map_err(|e| CliError::Validation(format!("reference table row {}: {e}", i + 1)))?;
        out.push(ReferenceLine {
            m: half(r.m, "m", i + 1)?,
            big_m: half(r.big_m, "M", i + 1)?,
            m_bar: half(r.mbar, "mbar", i + 1)?,
            big_m_bar: half(r.big_m_bar, "Mbar", i + 1)?,
            detuning_calc: TAU * r.detuning_calc_mhz * 1e6,
            detuning_exp: TAU * r.detuning_exp_mhz * 1e6,
            ratio_calc: r.ratio_calc,
            rabi_exp: TAU * r.rabi_exp_khz * 1e3,
        });
    }
    Ok(out)
}

pub fn bundled_reference() -> Vec<ReferenceLine> {
    parse_reference(BUNDLED_TABLE2).expect("bundled reference table parses")
}

impl ReferenceLine {
    pub fn calibration_line(&self, detuning: f64) -> CalibrationLine {
        CalibrationLine {
            m: self.m,
            big_m: self.big_m,
            m_bar: self.m_bar,
            big_m_bar: self.big_m_bar,
            detuning,
        }
    }

    pub fn index(&self, cfg: &LoadedConfig) -> Result<TransitionIndex, CliError> {
        TransitionIndex::single(cfg.spins(), self.m, self.big_m, self.m_bar, self.big_m_bar)
            .map_err(|e| CliError::Validation(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceComparison {
    pub line: ReferenceLine,
    pub index: TransitionIndex,
    /// Prediction with calibrated splittings, rad/s.
    pub detuning: f64,
    /// `|Ω̄/Ω_mM|` from the configured angles.
    pub ratio_config: f64,
    /// `|Ω̄/Ω_mM|` from the least-squares angles.
    pub ratio_fit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceReport {
    pub calibration: Calibration,
    pub calibration_rows: Vec<usize>,
    pub angle_fit: AngleFit,
    pub rows: Vec<ReferenceComparison>,
    pub max_detuning_error: f64,
    pub max_ratio_error_config: f64,
    pub max_ratio_error_fit: f64,
    /// `|Δ_1^s| / ω̄_0^s` from the configured drive and the calibrated splitting.
    pub detuning_over_splitting_s: f64,
    /// Largest `|calc − exp|` of the resonances, rad/s.
    pub max_detuning_vs_measured: f64,
    /// Largest deviation of the fitted ratios from the measured Rabi
    /// frequencies divided by the least-squares bare coupling of their `(m, M)` group.
    pub max_ratio_vs_measured: f64,
}

/// Calibrates the splittings (with a common offset) from `calibration_rows`
/// of `lines` and predicts every resonance and coupling ratio.
pub fn reference_report(
    cfg: &LoadedConfig,
    lines: &[ReferenceLine],
    calibration_rows: &[usize],
    corrections: bool,
) -> Result<ReferenceReport, CliError> {
    let (ps, pd) = prediction_configs(cfg, corrections)?;
    let calib_lines = calibration_rows
        .iter()
        .map(|&i| {
            lines
                .get(i)
                .map(|l| l.calibration_line(l.detuning_calc))
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "calibration row {} is outside the table ({} rows)",
                        i + 1,
                        lines.len()
                    ))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let calibration = calibrate_splittings(
        &calib_lines,
        ps.omega1(),
        pd.omega1(),
        CalibrationModel::WithOffset,
    )
    .map_err(|e| CliError::computation("calibration", e))?;

    let base = CombSetup::from_configs(&ps, &pd)
        .for_mode(CombMode::Single)
        .map_err(|e| CliError::computation("setup", e))?;
    let mut calibrated = base;
    calibrated.s.freqs.splitting1 = calibration.splitting_s;
    calibrated.d.freqs.splitting1 = calibration.splitting_d;
    calibrated.carrier_offset = calibration.offset;

    let spins = cfg.spins();
    let indices = lines
        .iter()
        .map(|l| l.index(cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let observations: Vec<RatioObservation> = indices
        .iter()
        .zip(lines)
        .map(|(index, l)| RatioObservation {
            index: *index,
            ratio_abs: l.ratio_calc,
        })
        .collect();
    let angle_fit = fit_single_layer_angles(&observations, spins)
        .map_err(|e| CliError::computation("angle fit", e))?;
    let ds = wigner_d(spins.0, angle_fit.theta_s);
    let dd = wigner_d(spins.1, angle_fit.theta_d);

    let rows: Vec<ReferenceComparison> = indices
        .iter()
        .zip(lines)
        .map(|(index, line)| ReferenceComparison {
            line: *line,
            index: *index,
            detuning: resonance_detuning(index, &calibrated),
            ratio_config: rabi_ratio(index, &base).norm(),
            ratio_fit: (ds.get(index.m_bar, index.m) * dd.get(index.big_m, index.big_m_bar)).abs(),
        })
        .collect();
    let max_of = |f: &dyn Fn(&ReferenceComparison) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let max_detuning_error = max_of(&|r| (r.detuning - r.line.detuning_calc).abs());
    let max_ratio_error_config = max_of(&|r| (r.ratio_config - r.line.ratio_calc).abs());
    let max_ratio_error_fit = max_of(&|r| (r.ratio_fit - r.line.ratio_calc).abs());
    let max_detuning_vs_measured = max_of(&|r| (r.line.detuning_calc - r.line.detuning_exp).abs());
    let detuning_over_splitting_s =
        (cfg.s.static_field.larmor - cfg.s.omega1()).abs() / calibration.splitting_s;
    Ok(ReferenceReport {
        calibration,
        calibration_rows: calibration_rows.to_vec(),
        angle_fit,
        max_ratio_vs_measured: ratio_vs_measured(&rows),
        rows,
        max_detuning_error,
        max_ratio_error_config,
        max_ratio_error_fit,
        detuning_over_splitting_s,
        max_detuning_vs_measured,
    })
}

fn ratio_vs_measured(rows: &[ReferenceComparison]) -> f64 {
    let mut groups: Vec<(HalfInt, HalfInt)> =
        rows.iter().map(|r| (r.index.m, r.index.big_m)).collect();
    groups.sort();
    groups.dedup();
    let mut worst: f64 = 0.0;
    for g in groups {
        let members: Vec<&ReferenceComparison> = rows
            .iter()
            .filter(|r| (r.index.m, r.index.big_m) == g)
            .collect();
        let num: f64 = members.iter().map(|r| r.ratio_fit * r.line.rabi_exp).sum();
        let den: f64 = members.iter().map(|r| r.ratio_fit * r.ratio_fit).sum();
        if den > 0.0 {
            let bare = num / den;
            worst = members
                .iter()
                .map(|r| (r.line.rabi_exp / bare - r.ratio_fit).abs())
                .fold(worst, f64::max);
        }
    }
    worst
}
