//! Subcommand implementations. Each returns the rendered output and any
//! warnings; nothing is written here.

use std::f64::consts::TAU;

use dressing_engine::{CalibrationLine, CalibrationModel, DecouplingAssignment, DressingConfig};
use magnus_corrections::{corrected_splittings, design_decoupling_corrected};
use ms_gate::{plan_gate, PlanRequest};
use numeric_oracle::{simulate_two_ion_gate, TwoIonParams};
use serde_json::{json, Value};
use shift_suppression::{perturbation_report, FieldGradient};
use spin_algebra::HalfInt;
use transition_comb::{enumerate_comb, CombMode, CombSetup, IndexFilter};

use crate::corrections::prediction_configs;
use crate::output::{envelope, json_text, Cell, Table};
use crate::table2::{bundled_reference, reference_report, CALIBRATION_ROWS};
use crate::verify::{magnus_vs_floquet, verify_random, MagnusCheck, VerifyRequest};
use crate::{CliError, LoadedConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub warnings: Vec<String>,
    /// Nonzero when the command ran but a check failed.
    pub status: i32,
}

impl CommandOutput {
    fn ok(text: String, warnings: Vec<String>) -> Self {
        CommandOutput {
            text,
            warnings,
            status: 0,
        }
    }
}

fn hz(x: f64) -> f64 {
    x / TAU
}

fn render(table: &Table, format: Format, summary: Option<Value>) -> Result<String, CliError> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut body = serde_json::Map::new();
            if let Some(Value::Object(s)) = summary {
                body.extend(s);
            }
            body.insert("rows".into(), table.to_json_rows());
            json_text(&envelope(table.kind, Value::Object(body)))
        }
    }
}

fn half(x: HalfInt) -> Cell {
    Cell::Num(x.value())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumArgs {
    pub mode: Option<CombMode>,
    pub filter: IndexFilter,
    /// `None` picks the default: off, or on for the reference table.
    pub corrections: Option<bool>,
    pub table2: bool,
    pub format: Format,
}

pub fn default_mode(cfg: &LoadedConfig) -> CombMode {
    if cfg.double_layer() {
        CombMode::Double
    } else {
        CombMode::Single
    }
}

pub fn spectrum(cfg: &LoadedConfig, args: &SpectrumArgs) -> Result<CommandOutput, CliError> {
    if args.table2 {
        return reference_table(cfg, args.corrections.unwrap_or(true), args.format);
    }
    let mode = args.mode.unwrap_or_else(|| default_mode(cfg));
    let (ps, pd) = prediction_configs(cfg, args.corrections.unwrap_or(false))?;
    let setup = CombSetup::from_configs(&ps, &pd);
    let lines = enumerate_comb(&setup, &cfg.coupling, mode, &args.filter)
        .map_err(|e| CliError::computation("spectrum", e))?;
    let mut warnings = cfg.warnings.clone();
    if lines.is_empty() {
        warnings.push("the filter selects no lines".into());
    }
    let table = Table {
        kind: "spectrum",
        columns: vec![
            "m",
            "M",
            "mbar",
            "Mbar",
            "mbbar",
            "Mbbar",
            "detuning_hz",
            "rabi_ratio_abs",
            "rabi_phase_rad",
        ],
        rows: lines
            .iter()
            .map(|l| {
                let i = l.index;
                vec![
                    half(i.m),
                    half(i.big_m),
                    half(i.m_bar),
                    half(i.big_m_bar),
                    half(i.m_bbar),
                    half(i.big_m_bbar),
                    Cell::Num(hz(l.detuning)),
                    Cell::Num(l.ratio.norm()),
                    Cell::Num(if l.ratio.norm() > 0.0 {
                        l.ratio.arg()
                    } else {
                        0.0
                    }),
                ]
            })
            .collect(),
    };
    let summary = json!({
        "mode": match mode { CombMode::Single => "single", CombMode::Double => "double" },
        "corrections": args.corrections.unwrap_or(false),
        "line_count": lines.len(),
    });
    Ok(CommandOutput::ok(
        render(&table, args.format, Some(summary))?,
        warnings,
    ))
}

fn reference_table(
    cfg: &LoadedConfig,
    corrections: bool,
    format: Format,
) -> Result<CommandOutput, CliError> {
    let lines = bundled_reference();
    let report = reference_report(cfg, &lines, &CALIBRATION_ROWS, corrections)?;
    let table = Table {
        kind: "table2",
        columns: vec![
            "row",
            "m",
            "M",
            "mbar",
            "Mbar",
            "detuning_hz",
            "detuning_ref_hz",
            "detuning_error_hz",
            "detuning_measured_hz",
            "rabi_ratio_abs",
            "rabi_ratio_fit",
            "ratio_ref",
            "rabi_measured_hz",
        ],
        rows: report
            .rows
            .iter()
            .enumerate()
            .map(|(k, r)| {
                vec![
                    Cell::Int(k as i64 + 1),
                    half(r.index.m),
                    half(r.index.big_m),
                    half(r.index.m_bar),
                    half(r.index.big_m_bar),
                    Cell::Num(hz(r.detuning)),
                    Cell::Num(hz(r.line.detuning_calc)),
                    Cell::Num(hz(r.detuning - r.line.detuning_calc)),
                    Cell::Num(hz(r.line.detuning_exp)),
                    Cell::Num(r.ratio_config),
                    Cell::Num(r.ratio_fit),
                    Cell::Num(r.line.ratio_calc),
                    Cell::Num(hz(r.line.rabi_exp)),
                ]
            })
            .collect(),
    };
    let c = &report.calibration;
    let summary = json!({
        "corrections": corrections,
        "calibration_rows": report.calibration_rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
        "splitting_s_hz": hz(c.splitting_s),
        "splitting_d_hz": hz(c.splitting_d),
        "offset_hz": hz(c.offset),
        "max_detuning_error_hz": hz(report.max_detuning_error),
        "theta_s_fit_rad": report.angle_fit.theta_s,
        "theta_d_fit_rad": report.angle_fit.theta_d,
        "max_ratio_error_fit": report.max_ratio_error_fit,
        "max_ratio_error_config": report.max_ratio_error_config,
        "abs_cos_theta_s_fit": report.angle_fit.theta_s.cos().abs(),
        "detuning_over_splitting_s": report.detuning_over_splitting_s,
    });
    Ok(CommandOutput::ok(
        render(&table, format, Some(summary))?,
        cfg.warnings.clone(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuppressArgs {
    pub design: Option<DecouplingAssignment>,
    /// Axial field-gradient coefficient, Hz.
    pub f_zz_hz: f64,
    pub corrections: bool,
}

fn layer_json(cfg: &DressingConfig) -> Value {
    let layer = |l: &dressing_engine::RfLayer| json!({"omega_hz": hz(l.omega), "amp_hz": hz(l.amp), "alpha_rad": l.alpha});
    let mut layers = vec![layer(&cfg.layer1)];
    if let Some(l2) = &cfg.layer2 {
        layers.push(layer(l2));
    }
    Value::Array(layers)
}

pub fn suppress(cfg: &LoadedConfig, args: &SuppressArgs) -> Result<CommandOutput, CliError> {
    let (s, d) = match args.design {
        None => (cfg.s.clone(), cfg.d.clone()),
        Some(assignment) => {
            let design =
                |c: &DressingConfig, other: &DressingConfig| -> Result<DressingConfig, CliError> {
                    let amp2 = c.layer2.map(|l| l.amp).ok_or_else(|| {
                        CliError::Validation(
                            "a decoupling design needs two layers on every manifold".into(),
                        )
                    })?;
                    design_decoupling_corrected(
                        c.manifold,
                        c.static_field,
                        (c.layer1.amp, amp2),
                        assignment,
                        c.layer1.alpha,
                        args.corrections.then_some(other),
                    )
                    .map_err(|e| CliError::computation("decoupling design", e))
                };
            let (mut s, mut d) = (cfg.s.clone(), cfg.d.clone());
            for _ in 0..if args.corrections { 6 } else { 1 } {
                (s, d) = (design(&s, &d)?, design(&d, &s)?);
            }
            (s, d)
        }
    };
    let (es, ed) = if args.corrections {
        let c = corrected_splittings(&s, &d)
            .map_err(|e| CliError::computation("Magnus corrections", e))?;
        (c.config_s, c.config_d)
    } else {
        (s.clone(), d.clone())
    };
    let gradient = FieldGradient::axial(TAU * args.f_zz_hz);
    let manifold = |c: &DressingConfig, effective: &DressingConfig, label: &str| {
        let r = perturbation_report(effective, &gradient);
        json!({
            "label": label,
            "theta1_rad": effective.theta1(),
            "theta2_rad": effective.theta2(),
            "zeeman_factor": r.zeeman_factor,
            "quadrupole_factor": r.quadrupole_factor,
            "zeeman_coeff_hz_per_tesla": hz(r.zeeman_operator_coeff),
            "quadrupole_diagonal_hz": r.quadrupole_operator.iter().map(|x| hz(*x)).collect::<Vec<_>>(),
            "layers": layer_json(c),
        })
    };
    let design = args.design.map(|a| match a {
        DecouplingAssignment::ZeemanFirst => "zeeman-first",
        DecouplingAssignment::QuadrupoleFirst => "quadrupole-first",
    });
    let body = json!({
        "design": design,
        "f_zz_hz": args.f_zz_hz,
        "manifolds": [manifold(&s, &es, "s"), manifold(&d, &ed, "d")],
    });
    Ok(CommandOutput::ok(
        json_text(&envelope("suppress", body))?,
        cfg.warnings.clone(),
    ))
}

/// Calibration lines from CSV with columns `m,M,mbar,Mbar` and either
/// `detuning_hz` or `detuning_calc_mhz`.
pub fn parse_calibration_lines(text: &str) -> Result<Vec<CalibrationLine>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Validation(format!("calibration lines: {e}")))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let need = |name: &str| {
        col(name).ok_or_else(|| {
            CliError::Validation(format!("calibration lines: missing column `{name}`"))
        })
    };
    let (cm, cbm, cmb, cbmb) = (need("m")?, need("M")?, need("mbar")?, need("Mbar")?);
    let (cdet, scale) = match (col("detuning_hz"), col("detuning_calc_mhz")) {
        (Some(c), _) => (c, TAU),
        (None, Some(c)) => (c, TAU * 1e6),
        (None, None) => {
            return Err(CliError::Validation(
                "calibration lines: need a `detuning_hz` or `detuning_calc_mhz` column".into(),
            ))
        }
    };
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec =
            rec.map_err(|e| CliError::Validation(format!("calibration lines row {}: {e}", i + 1)))?;
        let num = |c: usize| -> Result<f64, CliError> {
            rec.get(c).unwrap_or("").parse::<f64>().map_err(|e| {
                CliError::Validation(format!(
                    "calibration lines row {} column {}: {e}",
                    i + 1,
                    &headers[c]
                ))
            })
        };
        let h = |c: usize| -> Result<HalfInt, CliError> {
            HalfInt::new(num(c)?)
                .map_err(|e| CliError::Validation(format!("calibration lines row {}: {e}", i + 1)))
        };
        out.push(CalibrationLine {
            m: h(cm)?,
            big_m: h(cbm)?,
            m_bar: h(cmb)?,
            big_m_bar: h(cbmb)?,
            detuning: num(cdet)? * scale,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrateArgs {
    /// CSV text of the lines; the bundled reference table when `None`.
    pub lines: Option<String>,
    /// One-based rows to use; all when empty.
    pub rows: Vec<usize>,
    pub model: CalibrationModel,
}

pub fn calibrate(cfg: &LoadedConfig, args: &CalibrateArgs) -> Result<CommandOutput, CliError> {
    let all = parse_calibration_lines(
        args.lines
            .as_deref()
            .unwrap_or(crate::table2::BUNDLED_TABLE2),
    )?;
    let selected: Vec<CalibrationLine> = if args.rows.is_empty() {
        all.clone()
    } else {
        args.rows
            .iter()
            .map(|&r| {
                r.checked_sub(1)
                    .and_then(|i| all.get(i).copied())
                    .ok_or_else(|| {
                        CliError::Validation(format!("row {r} is outside 1..={}", all.len()))
                    })
            })
            .collect::<Result<_, _>>()?
    };
    let cal = dressing_engine::calibrate_splittings(
        &selected,
        cfg.s.omega1(),
        cfg.d.omega1(),
        args.model,
    )
    .map_err(|e| CliError::computation("calibration", e))?;
    let predicted_all: Vec<f64> = all
        .iter()
        .map(|l| hz(cal.predict(l, cfg.s.omega1(), cfg.d.omega1()) - l.detuning))
        .collect();
    let body = json!({
        "model": match args.model { CalibrationModel::SplittingsOnly => "splittings", CalibrationModel::WithOffset => "offset" },
        "rows": if args.rows.is_empty() { (1..=all.len()).collect::<Vec<_>>() } else { args.rows.clone() },
        "splitting_s_hz": hz(cal.splitting_s),
        "splitting_d_hz": hz(cal.splitting_d),
        "offset_hz": hz(cal.offset),
        "residuals_hz": cal.residuals.iter().map(|r| hz(*r)).collect::<Vec<_>>(),
        "max_abs_residual_hz": hz(cal.max_abs_residual()),
        "all_rows_error_hz": predicted_all,
        "configured_splitting_s_hz": hz(cfg.s.derived1.splitting),
        "configured_splitting_d_hz": hz(cfg.d.derived1.splitting),
    });
    Ok(CommandOutput::ok(
        json_text(&envelope("calibration", body))?,
        cfg.warnings.clone(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateArgs {
    /// `ω̄̄_0^d` in Hz; the configured innermost upper splitting when `None`.
    pub splitting_hz: Option<f64>,
    pub request: PlanRequest,
    pub corrections: bool,
    /// Run the two-ion oracle on the plan with the configured mode.
    pub simulate: bool,
}

pub fn gate(cfg: &LoadedConfig, args: &GateArgs) -> Result<CommandOutput, CliError> {
    let splitting = match args.splitting_hz {
        Some(h) if h > 0.0 && h.is_finite() => TAU * h,
        Some(h) => {
            return Err(CliError::Validation(format!(
                "--splitting-hz must be positive, got {h}"
            )))
        }
        None => prediction_configs(cfg, args.corrections)?
            .1
            .innermost_splitting(),
    };
    let plan =
        plan_gate(splitting, &args.request).map_err(|e| CliError::computation("gate plan", e))?;
    let disp = plan.final_displacement();
    let mut body = json!({
        "splitting_hz": hz(splitting),
        "omega_hz": hz(plan.omega),
        "delta_hz": hz(plan.delta),
        "n_loops": plan.n_loops,
        "k_phase": plan.k_phase,
        "n_ions": plan.n_ions,
        "duration_ms": plan.duration * 1e3,
        "omega_over_delta": plan.hierarchy.omega_over_delta,
        "delta_over_splitting": plan.hierarchy.delta_over_splitting,
        "omega_adjusted": plan.omega_adjusted,
        "final_displacement_abs": disp.norm(),
        "final_phase_over_2pi": plan.final_phase() / TAU,
    });
    let mut warnings = cfg.warnings.clone();
    if plan.omega_adjusted {
        warnings.push("Ω was moved off the requested ratio so that the loops close".into());
    }
    if args.simulate {
        let mode = cfg
            .mode
            .ok_or_else(|| CliError::Validation("--simulate needs a `mode` block".into()))?;
        let params = TwoIonParams::from_plan(&plan, mode.nu, mode.eta, cfg.oracle.fock_cutoff);
        let r = simulate_two_ion_gate(&params, cfg.oracle.tolerance)
            .map_err(|e| CliError::computation("two-ion oracle", e))?;
        body["oracle"] = json!({
            "fidelity": r.fidelity,
            "populations": r.populations,
            "motional_excitation": r.motional_excitation,
            "max_norm_drift": r.max_norm_drift,
        });
    }
    Ok(CommandOutput::ok(
        json_text(&envelope("gate_plan", body))?,
        warnings,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyArgs {
    pub mode: CombMode,
    pub hierarchy: f64,
    pub seed: u64,
    pub lines: usize,
    /// Also compare the configured lower-manifold shifts with Floquet.
    pub magnus: bool,
}

pub const MAGNUS_LIMIT: f64 = 0.10;

fn magnus_json(m: &MagnusCheck) -> Value {
    json!({
        "amplitude_scale": m.amplitude_scale,
        "bloch_siegert_hz": hz(m.bloch_siegert.analytic),
        "bloch_siegert_floquet_hz": hz(m.bloch_siegert.floquet),
        "bloch_siegert_relative_error": m.bloch_siegert.relative_error(),
        "cross_hz": hz(m.cross.analytic),
        "cross_floquet_hz": hz(m.cross.floquet),
        "cross_relative_error": m.cross.relative_error(),
    })
}

pub fn verify(cfg: &LoadedConfig, args: &VerifyArgs) -> Result<CommandOutput, CliError> {
    let req = VerifyRequest {
        mode: args.mode,
        hierarchy: args.hierarchy,
        seed: args.seed,
        lines: args.lines,
        tolerance: cfg.oracle.tolerance,
    };
    let report = verify_random(&req)?;
    let mut failures = Vec::new();
    if !report.passed() {
        failures.push(format!(
            "line checks: max center error {:.3e}, max Rabi error {:.3e}, limit {}",
            report.max_center_error,
            report.max_rabi_error,
            req.limit()
        ));
    }
    let lines: Vec<Value> = report
        .lines
        .iter()
        .map(|l| {
            json!({
                "index": l.index.as_f64(),
                "ratio_abs": l.ratio,
                "predicted_center_hz": hz(l.predicted_center),
                "simulated_center_hz": hz(l.simulated_center),
                "center_ci95_hz": hz(l.center_ci95),
                "uncorrected_center_hz": hz(l.uncorrected_center),
                "center_error": l.center_error,
                "uncorrected_center_error": l.uncorrected_center_error,
                "predicted_rabi_hz": hz(l.predicted_rabi),
                "simulated_rabi_hz": hz(l.simulated_rabi),
                "rabi_error": l.rabi_error,
                "max_norm_drift": l.max_norm_drift,
            })
        })
        .collect();
    let mut body = json!({
        "mode": match args.mode { CombMode::Single => "single", CombMode::Double => "double" },
        "hierarchy": args.hierarchy,
        "seed": args.seed,
        "tolerance": cfg.oracle.tolerance,
        "coupling_hz": hz(report.coupling),
        "center_scale_hz": hz(report.center_scale),
        "candidates": report.candidates,
        "limit": req.limit(),
        "max_center_error": report.max_center_error,
        "max_rabi_error": report.max_rabi_error,
        "lines": lines,
    });
    if args.magnus {
        let m = magnus_vs_floquet(&cfg.s, &cfg.d, 1.0)?;
        let worst = m
            .bloch_siegert
            .relative_error()
            .max(m.cross.relative_error());
        if worst > MAGNUS_LIMIT {
            failures.push(format!(
                "Magnus shifts deviate from Floquet by {worst:.3e} (limit {MAGNUS_LIMIT})"
            ));
        }
        body["magnus"] = magnus_json(&m);
    }
    body["passed"] = Value::from(failures.is_empty());
    let text = json_text(&envelope("verify", body))?;
    let status = if failures.is_empty() {
        0
    } else {
        CliError::OracleMismatch(failures.join("; ")).exit_code()
    };
    Ok(CommandOutput {
        text,
        warnings: failures,
        status,
    })
}
