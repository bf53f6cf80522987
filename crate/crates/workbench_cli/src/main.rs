use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dressing_engine::{CalibrationModel, DecouplingAssignment};
use ms_gate::PlanRequest;
use spin_algebra::HalfInt;
use transition_comb::{CombMode, IndexFilter};
use workbench_cli::commands::{
    self, CalibrateArgs, CommandOutput, Format, GateArgs, SpectrumArgs, SuppressArgs, VerifyArgs,
};
use workbench_cli::{load_config, CliError};

#[derive(Parser)]
#[command(
    name = "cddcomb",
    version,
    about = "Doubly-dressed transition combs: spectra, suppression, calibration, gate plans and oracle checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// Write the result here instead of stdout; run metadata goes to PATH.meta.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Single,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignArg {
    ZeemanFirst,
    QuadrupoleFirst,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Splittings,
    Offset,
}

#[derive(Subcommand)]
enum Command {
    /// Resonant detunings and coupling ratios of the comb.
    Spectrum {
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Fix an index, e.g. `--filter mbar=0.5`; keys m, M, mbar, Mbar, mbbar, Mbbar.
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
        /// Compare with the bundled 24-line reference table.
        #[arg(long)]
        table2: bool,
        #[arg(long, value_enum)]
        corrections: Option<Switch>,
    },
    /// Zeeman and quadrupole suppression of the configured or a designed drive.
    Suppress {
        #[arg(long, value_enum)]
        design: Option<DesignArg>,
        /// Axial field-gradient coefficient in Hz.
        #[arg(long, default_value_t = 0.0)]
        f_zz_hz: f64,
        #[arg(long, value_enum, default_value = "on")]
        corrections: Switch,
    },
    /// Dressed splittings from measured single-layer resonances.
    Calibrate {
        /// CSV with m, M, mbar, Mbar and detuning_hz (or detuning_calc_mhz); bundled table by default.
        #[arg(long)]
        lines: Option<PathBuf>,
        /// One-based rows to use, comma separated.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(long, value_enum, default_value = "splittings")]
        model: ModelArg,
    },
    /// Closed-loop entangling-gate plan.
    Gate {
        /// Upper-manifold innermost splitting in Hz (default: from the config).
        #[arg(long)]
        splitting_hz: Option<f64>,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        omega_over_delta: f64,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        delta_over_splitting: f64,
        #[arg(long)]
        loops: Option<u32>,
        #[arg(long)]
        phase_k: Option<u32>,
        #[arg(long, value_enum, default_value = "off")]
        corrections: Switch,
        /// Propagate the two-ion model with the configured motional mode.
        #[arg(long)]
        simulate: bool,
    },
    /// Analytic predictions against the numerical oracle.
    Verify {
        #[arg(long, value_enum, default_value = "single")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.05)]
        hierarchy: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        lines: usize,
        /// Skip the Magnus-versus-Floquet comparison.
        #[arg(long)]
        no_magnus: bool,
    },
}

fn mode(m: ModeArg) -> CombMode {
    match m {
        ModeArg::Single => CombMode::Single,
        ModeArg::Double => CombMode::Double,
    }
}

fn parse_filter(items: &[String]) -> Result<IndexFilter, CliError> {
    let mut f = IndexFilter::default();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("filter `{item}` is not KEY=VALUE")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("filter `{item}`: bad number")))?;
        let h = HalfInt::new(value)
            .map_err(|e| CliError::Validation(format!("filter `{item}`: {e}")))?;
        let slot = match k.trim() {
            "m" => &mut f.m,
            "M" => &mut f.big_m,
            "mbar" => &mut f.m_bar,
            "Mbar" => &mut f.big_m_bar,
            "mbbar" => &mut f.m_bbar,
            "Mbbar" => &mut f.big_m_bbar,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown filter key `{other}`"
                )))
            }
        };
        *slot = Some(h);
    }
    Ok(f)
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("CDDCOMB_THREADS") {
        let n: usize = v.parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::Validation(format!(
                "CDDCOMB_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::computation("thread pool", e))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    configure_threads()?;
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Validation("--config PATH is required".into()))?;
    let cfg = load_config(path)?;
    let format = match cli.output {
        Some(OutputFormat::Json) => Format::Json,
        _ => Format::Csv,
    };
    match &cli.command {
        Command::Spectrum {
            mode: m,
            filters,
            table2,
            corrections,
        } => commands::spectrum(
            &cfg,
            &SpectrumArgs {
                mode: m.map(mode),
                filter: parse_filter(filters)?,
                corrections: corrections.map(|c| matches!(c, Switch::On)),
                table2: *table2,
                format,
            },
        ),
        Command::Suppress {
            design,
            f_zz_hz,
            corrections,
        } => commands::suppress(
            &cfg,
            &SuppressArgs {
                design: design.map(|d| match d {
                    DesignArg::ZeemanFirst => DecouplingAssignment::ZeemanFirst,
                    DesignArg::QuadrupoleFirst => DecouplingAssignment::QuadrupoleFirst,
                }),
                f_zz_hz: *f_zz_hz,
                corrections: matches!(corrections, Switch::On),
            },
        ),
        Command::Calibrate { lines, rows, model } => {
            let text = match lines {
                Some(p) => Some(std::fs::read_to_string(p).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?),
                None => None,
            };
            commands::calibrate(
                &cfg,
                &CalibrateArgs {
                    lines: text,
                    rows: rows.clone(),
                    model: match model {
                        ModelArg::Splittings => CalibrationModel::SplittingsOnly,
                        ModelArg::Offset => CalibrationModel::WithOffset,
                    },
                },
            )
        }
        Command::Gate {
            splitting_hz,
            omega_over_delta,
            delta_over_splitting,
            loops,
            phase_k,
            corrections,
            simulate,
        } => commands::gate(
            &cfg,
            &GateArgs {
                splitting_hz: *splitting_hz,
                request: PlanRequest {
                    omega_over_delta: *omega_over_delta,
                    delta_over_splitting: *delta_over_splitting,
                    n_loops: *loops,
                    k_phase: *phase_k,
                    ..PlanRequest::default()
                },
                corrections: matches!(corrections, Switch::On),
                simulate: *simulate,
            },
        ),
        Command::Verify {
            mode: m,
            hierarchy,
            seed,
            lines,
            no_magnus,
        } => commands::verify(
            &cfg,
            &VerifyArgs {
                mode: mode(*m),
                hierarchy: *hierarchy,
                seed: *seed,
                lines: *lines,
                magnus: !*no_magnus,
            },
        ),
    }
}

fn write_sidecar(cli: &Cli, out: &CommandOutput, elapsed: f64) -> Result<(), CliError> {
    let Some(path) = &cli.out else { return Ok(()) };
    let mut meta = path.clone().into_os_string();
    meta.push(".meta.json");
    let body = serde_json::json!({
        "tool": "cddcomb",
        "version": env!("CARGO_PKG_VERSION"),
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "warnings": out.warnings,
        "status": out.status,
        "elapsed_seconds": elapsed,
    });
    let text = serde_json::to_string_pretty(&body).map_err(|e| CliError::Output(e.to_string()))?;
    std::fs::write(&meta, text + "\n")
        .map_err(|e| CliError::Output(format!("{}: {e}", PathBuf::from(meta).display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|out| {
        workbench_cli::output::emit(&out.text, cli.out.as_deref())?;
        write_sidecar(&cli, &out, start.elapsed().as_secs_f64())?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
