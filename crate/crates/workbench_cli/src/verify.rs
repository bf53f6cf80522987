//! Analytic-versus-oracle comparisons on random valid configurations and
//! Magnus-versus-Floquet comparisons on a loaded one.

use num_complex::Complex64 as C64;
use numeric_oracle::{
    check_line, comb_mode, offresonant_shift_from_floquet, random_config_pair,
    resonant_shift_from_floquet, shifted_configs, well_isolated_lines, LineCheckOptions,
    RandomConfigRequest,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use transition_comb::{BareCoupling, CombMode, CombSetup, TransitionIndex};

use dressing_engine::DressingConfig;
use magnus_corrections::{bloch_siegert_shift, cross_field_shift, felt_amplitude};

use crate::CliError;

/// Minimum `|Ω̄/Ω_mM|` of a checked line.
pub fn min_line_ratio(mode: CombMode) -> f64 {
    match mode {
        CombMode::Single => 0.25,
        CombMode::Double => 0.15,
    }
}
/// Other lines from the same initial state must sit this many couplings away.
pub const MIN_GAP_FACTOR: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyRequest {
    pub mode: CombMode,
    /// Bound on the drive hierarchy ratios and on `|Ω_mM|` over the innermost splitting.
    pub hierarchy: f64,
    pub seed: u64,
    pub lines: usize,
    pub tolerance: f64,
}

impl VerifyRequest {
    /// Allowed relative deviation of centers and Rabi frequencies.
    pub fn limit(&self) -> f64 {
        match self.mode {
            CombMode::Single => 0.01,
            CombMode::Double => 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineVerification {
    pub index: TransitionIndex,
    pub ratio: f64,
    pub predicted_center: f64,
    pub simulated_center: f64,
    pub center_ci95: f64,
    pub uncorrected_center: f64,
    pub predicted_rabi: f64,
    pub simulated_rabi: f64,
    pub rabi_ci95: f64,
    /// Center error over the center scale.
    pub center_error: f64,
    pub uncorrected_center_error: f64,
    pub rabi_error: f64,
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub request: VerifyRequest,
    pub configs: (DressingConfig, DressingConfig),
    /// `|Ω_mM|` used for every checked line, rad/s.
    pub coupling: f64,
    /// Innermost dressed splitting of the lower manifold, the unit of center errors.
    pub center_scale: f64,
    pub candidates: usize,
    pub lines: Vec<LineVerification>,
    pub max_center_error: f64,
    pub max_rabi_error: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        let limit = self.request.limit();
        !self.lines.is_empty() && self.max_center_error <= limit && self.max_rabi_error <= limit
    }
}

/// Draws a random valid configuration, picks `lines` well-isolated lines and
/// checks each by a simulated scan and flop with only its bare pair coupled.
pub fn verify_random(req: &VerifyRequest) -> Result<VerifyReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let request = RandomConfigRequest {
        double: req.mode == CombMode::Double,
        hierarchy: req.hierarchy,
        ..Default::default()
    };
    let (s, d) = random_config_pair(&mut rng, &request)
        .map_err(|e| CliError::computation("random config", e))?;
    let mode = comb_mode(&s, &d);
    let (ps, pd) =
        shifted_configs(&s, &d, true).map_err(|e| CliError::computation("Magnus shifts", e))?;
    let setup = CombSetup::from_configs(&ps, &pd)
        .for_mode(mode)
        .map_err(|e| CliError::computation("setup", e))?;
    let center_scale = setup.s.innermost_splitting();
    let coupling = req.hierarchy * center_scale.min(setup.d.innermost_splitting());
    let uniform = BareCoupling::uniform(setup.spins(), C64::new(coupling, 0.0));
    let choices = well_isolated_lines(&setup, &uniform, mode, min_line_ratio(mode), MIN_GAP_FACTOR)
        .map_err(|e| CliError::computation("line selection", e))?;
    let picked: Vec<_> = choices
        .choose_multiple(&mut rng, req.lines)
        .cloned()
        .collect();
    let opts = LineCheckOptions {
        scan: numeric_oracle::ScanOptions {
            tolerance: req.tolerance,
            ..Default::default()
        },
        ..Default::default()
    };
    let mut lines = Vec::with_capacity(picked.len());
    for choice in &picked {
        let index = choice.line.index;
        let mut pair = BareCoupling::empty(setup.spins());
        pair.set(index.m, index.big_m, C64::new(coupling, 0.0))
            .map_err(|e| CliError::computation("coupling", e))?;
        let chk = check_line(&s, &d, &index, &pair, &opts)
            .map_err(|e| CliError::computation("line check", e))?;
        lines.push(LineVerification {
            index,
            ratio: choice.line.ratio.norm(),
            predicted_center: chk.predicted_center,
            simulated_center: chk.simulated_center.value,
            center_ci95: chk.simulated_center.ci95,
            uncorrected_center: chk.uncorrected_center,
            predicted_rabi: chk.predicted_rabi,
            simulated_rabi: chk.simulated_rabi.value,
            rabi_ci95: chk.simulated_rabi.ci95,
            center_error: chk.center_error().abs() / center_scale,
            uncorrected_center_error: (chk.simulated_center.value - chk.uncorrected_center).abs()
                / center_scale,
            rabi_error: chk.rabi_relative_error().abs(),
            max_norm_drift: chk.scan.max_norm_drift.max(chk.flop.max_norm_drift),
        });
    }
    let max_center_error = lines.iter().map(|l| l.center_error).fold(0.0, f64::max);
    let max_rabi_error = lines.iter().map(|l| l.rabi_error).fold(0.0, f64::max);
    Ok(VerifyReport {
        request: *req,
        configs: (s, d),
        coupling,
        center_scale,
        candidates: choices.len(),
        lines,
        max_center_error,
        max_rabi_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftComparison {
    pub analytic: f64,
    pub floquet: f64,
}

impl ShiftComparison {
    pub fn relative_error(&self) -> f64 {
        ((self.analytic - self.floquet) / self.floquet).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusCheck {
    pub amplitude_scale: f64,
    /// Lower-manifold shift from its own first layer.
    pub bloch_siegert: ShiftComparison,
    /// Lower-manifold shift from the upper manifold's first layer.
    pub cross: ShiftComparison,
}

pub const FLOQUET_STEPS_PER_CYCLE: usize = 2000;

/// Lower-manifold Bloch–Siegert and cross-field shifts from the first layers
/// of `s` and `d`, with all amplitudes multiplied by `scale`, against the
/// Floquet splittings of the spin-1/2 manifold.
pub fn magnus_vs_floquet(
    s: &DressingConfig,
    d: &DressingConfig,
    scale: f64,
) -> Result<MagnusCheck, CliError> {
    if s.manifold.spin.dim() != 2 {
        return Err(CliError::Validation(
            "the Floquet shift check needs a spin-1/2 lower manifold".into(),
        ));
    }
    let larmor = s.static_field.larmor;
    let amp = s.layer1.amp * scale;
    let bs = bloch_siegert_shift(larmor, s.layer1.omega, (amp, 0.0))
        .map_err(|e| CliError::computation("Bloch–Siegert", e))?
        .coeff;
    let bs_floquet =
        resonant_shift_from_floquet(larmor, s.layer1.omega, amp, bs, FLOQUET_STEPS_PER_CYCLE)
            .map_err(|e| CliError::computation("Floquet", e))?;
    let felt = felt_amplitude(
        d.layer1.amp * scale,
        d.manifold.g_factor,
        s.manifold.g_factor,
    );
    let cross = cross_field_shift(larmor, d.layer1.omega, (felt, 0.0))
        .map_err(|e| CliError::computation("cross field", e))?
        .coeff;
    let cross_floquet = offresonant_shift_from_floquet(
        larmor,
        d.layer1.omega,
        felt,
        cross,
        FLOQUET_STEPS_PER_CYCLE,
    )
    .map_err(|e| CliError::computation("Floquet", e))?;
    Ok(MagnusCheck {
        amplitude_scale: scale,
        bloch_siegert: ShiftComparison {
            analytic: bs,
            floquet: bs_floquet,
        },
        cross: ShiftComparison {
            analytic: cross,
            floquet: cross_floquet,
        },
    })
}
