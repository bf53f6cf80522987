//! Analytic-versus-simulated comparison of single comb lines, and random valid
//! configurations to run it on.

use std::f64::consts::{PI, TAU};

use dressing_engine::{DressingConfig, ManifoldLabel, RfLayer, SpinManifold, StaticField};
use magnus_corrections::{bloch_siegert_shift, cross_shift_between};
use num_complex::Complex64 as C64;
use rand::Rng;
use spin_algebra::{HalfInt, SpinValue};
use transition_comb::{
    effective_rabi, enumerate_comb, resonance_detuning, BareCoupling, CombMode, CombSetup,
    IndexFilter, SpectralLine, TransitionIndex,
};

use crate::lab::{dressed_state, LabSystem, LaserTone};
use crate::scan::{
    simulate_line_scan, simulate_rabi_flop, FitValue, ScanOptions, ScanResult, ScanWindow,
};
use crate::OracleError;

/// Configs re-derived at Larmor frequencies shifted by the Bloch–Siegert
/// term and, when `cross` is set, by the cross-field term.
pub fn shifted_configs(
    s: &DressingConfig,
    d: &DressingConfig,
    cross: bool,
) -> Result<(DressingConfig, DressingConfig), OracleError> {
    let shift = |cfg: &DressingConfig, other: &DressingConfig| -> Result<f64, OracleError> {
        let mut total = bloch_siegert_shift(
            cfg.static_field.larmor,
            cfg.layer1.omega,
            (cfg.layer1.amp, cfg.amp2()),
        )?
        .coeff;
        if cross {
            total += cross_shift_between(cfg, other)?.coeff;
        }
        Ok(total)
    };
    let ls = s.static_field.larmor + shift(s, d)?;
    let ld = d.static_field.larmor + shift(d, s)?;
    Ok((s.with_larmor(ls)?, d.with_larmor(ld)?))
}

pub fn comb_mode(s: &DressingConfig, d: &DressingConfig) -> CombMode {
    if s.layer2.is_some() && d.layer2.is_some() {
        CombMode::Double
    } else {
        CombMode::Single
    }
}

/// Dressed label of the ground manifold that a line starts from.
pub fn initial_label(index: &TransitionIndex, mode: CombMode) -> HalfInt {
    match mode {
        CombMode::Single => index.m_bar,
        CombMode::Double => index.m_bbar,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCheckOptions {
    pub scan: ScanOptions,
    pub scan_points: usize,
    /// Scan half-width in units of the predicted on-resonance Rabi rate `2|Ω̄|`.
    pub window_half_width: f64,
    /// Flop length in full population cycles.
    pub flop_cycles: f64,
    pub flop_points: usize,
    pub cross_coupling: bool,
    /// Predict with Magnus-shifted Larmor frequencies.
    pub corrections: bool,
}

impl Default for LineCheckOptions {
    fn default() -> Self {
        LineCheckOptions {
            scan: ScanOptions::default(),
            scan_points: 5,
            window_half_width: 1.5,
            flop_cycles: 1.25,
            flop_points: 40,
            cross_coupling: true,
            corrections: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineCheck {
    pub index: TransitionIndex,
    pub predicted_center: f64,
    /// Prediction from the unshifted configs.
    pub uncorrected_center: f64,
    pub predicted_rabi: f64,
    pub simulated_center: FitValue,
    pub simulated_rabi: FitValue,
    pub scan: ScanResult,
    pub flop: ScanResult,
}

impl LineCheck {
    pub fn center_error(&self) -> f64 {
        self.simulated_center.value - self.predicted_center
    }

    pub fn rabi_relative_error(&self) -> f64 {
        (self.simulated_rabi.value - self.predicted_rabi) / self.predicted_rabi
    }
}

/// Locates line `index` by a simulated detuning scan, then measures its
/// coupling by pulse-length spectroscopy at the fitted center.
pub fn check_line(
    s: &DressingConfig,
    d: &DressingConfig,
    index: &TransitionIndex,
    coupling: &BareCoupling,
    opts: &LineCheckOptions,
) -> Result<LineCheck, OracleError> {
    let mode = comb_mode(s, d);
    let (ps, pd) = if opts.corrections {
        shifted_configs(s, d, opts.cross_coupling)?
    } else {
        (s.clone(), d.clone())
    };
    let setup = CombSetup::from_configs(&ps, &pd).for_mode(mode)?;
    let plain = CombSetup::from_configs(s, d).for_mode(mode)?;
    let predicted_center = resonance_detuning(index, &setup);
    let uncorrected_center = resonance_detuning(index, &plain);
    let predicted_rabi = effective_rabi(index, coupling, &setup)?.norm();
    if predicted_rabi <= 0.0 {
        return Err(OracleError::InvalidParameter {
            name: "predicted coupling",
            value: predicted_rabi,
        });
    }

    let mut system = LabSystem::from_configs(s, d);
    system.cross_coupling = opts.cross_coupling;
    system.lasers.push(LaserTone {
        detuning: predicted_center,
        coupling: coupling.clone(),
        phase: 0.0,
    });
    let mut internal = dressed_state(&ps, initial_label(index, mode))?;
    internal.extend(std::iter::repeat_n(C64::default(), d.manifold.spin.dim()));
    let initial = system.embed(&internal, 0)?;

    let rate = 2.0 * predicted_rabi;
    let window = ScanWindow {
        center: predicted_center,
        half_width: opts.window_half_width * rate,
        points: opts.scan_points,
    };
    let pulse = PI / rate;
    let scan = simulate_line_scan(&system, &initial, 0, &window, pulse, &opts.scan)?;
    let center = scan.center.expect("detuning scans carry a center");
    let flop = simulate_rabi_flop(
        &system,
        &initial,
        0,
        center.value,
        opts.flop_cycles * PI / predicted_rabi,
        opts.flop_points,
        &opts.scan,
    )?;
    Ok(LineCheck {
        index: *index,
        predicted_center,
        uncorrected_center,
        predicted_rabi,
        simulated_center: center,
        simulated_rabi: flop.rabi,
        scan,
        flop,
    })
}

pub const CA_G_S: f64 = 2.00225664;
pub const CA_G_D: f64 = 1.2003340;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomConfigRequest {
    /// Ground-manifold Larmor frequency, rad/s.
    pub larmor_s: f64,
    pub double: bool,
    /// Upper bound for the drive hierarchy ratios and for `|Ω_mM|` over the
    /// innermost splitting.
    pub hierarchy: f64,
}

impl Default for RandomConfigRequest {
    fn default() -> Self {
        RandomConfigRequest {
            larmor_s: TAU * 1e6,
            double: false,
            hierarchy: 1.0 / 20.0,
        }
    }
}

fn layer_for_angle(
    reference: f64,
    amp: f64,
    theta: f64,
    divisor: f64,
    alpha: f64,
) -> Result<RfLayer, OracleError> {
    let delta = amp / divisor / theta.tan();
    Ok(RfLayer::new(reference - delta, amp, alpha)?)
}

/// A random S=1/2 ↔ S=5/2 pair with Ca⁺ g-factors. Amplitudes are chosen so
/// that the own-drive hierarchy ratios stay below `hierarchy` (below half of it
/// for the upper second layer) and the cross-field validity ratios below 0.1;
/// second layers are designed on the Magnus-shifted first-layer splittings.
pub fn random_config_pair<R: Rng>(
    rng: &mut R,
    req: &RandomConfigRequest,
) -> Result<(DressingConfig, DressingConfig), OracleError> {
    let w = req.larmor_s;
    let k = (req.hierarchy * 20.0).min(1.0);
    let s_m = SpinManifold {
        label: ManifoldLabel::S,
        spin: SpinValue::new(1),
        g_factor: CA_G_S,
    };
    let d_m = SpinManifold {
        label: ManifoldLabel::D,
        spin: SpinValue::new(5),
        g_factor: CA_G_D,
    };
    let fs = StaticField::new(w)?;
    let fd = StaticField::new(w * CA_G_D / CA_G_S)?;
    let amp_s = w * 0.05 * k * rng.gen_range(0.8..1.2);
    let amp_d = w * 0.02 * k * rng.gen_range(0.9..1.2);
    let deg = PI / 180.0;
    let (th_s, th_d) = (
        rng.gen_range(55.0..125.0) * deg,
        rng.gen_range(55.0..125.0) * deg,
    );
    let (al_s, al_d) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
    let l1s = layer_for_angle(fs.larmor, amp_s, th_s, 2.0, al_s)?;
    let l1d = layer_for_angle(fd.larmor, amp_d, th_d, 2.0, al_d)?;
    let mut cs = DressingConfig::new(s_m, fs, l1s, None)?;
    let mut cd = DressingConfig::new(d_m, fd, l1d, None)?;
    if !req.double {
        return Ok((cs, cd));
    }
    let r2 = [
        2.0 * req.hierarchy * rng.gen_range(0.7..1.0),
        req.hierarchy * rng.gen_range(0.7..1.0),
    ];
    let th2 = [
        rng.gen_range(65.0..115.0) * deg,
        rng.gen_range(65.0..115.0) * deg,
    ];
    for _ in 0..4 {
        let (ps, pd) = shifted_configs(&cs, &cd, true)?;
        let mk = |p: &DressingConfig,
                  c: &DressingConfig,
                  i: usize|
         -> Result<DressingConfig, OracleError> {
            let w1 = p.derived1.splitting;
            let a2 = r2[i] * w1;
            let l2 = layer_for_angle(w1, 4.0 * a2, th2[i], 4.0, c.layer1.alpha)?;
            Ok(DressingConfig::new(
                c.manifold,
                c.static_field,
                c.layer1,
                Some(l2),
            )?)
        };
        let next_s = mk(&ps, &cs, 0)?;
        let next_d = mk(&pd, &cd, 1)?;
        cs = next_s;
        cd = next_d;
    }
    Ok((cs, cd))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChoice {
    pub line: SpectralLine,
    pub nearest_gap: f64,
}

/// Lines suitable for an oracle check: coupling at least `min_ratio` of the
/// bare one, and every other line reachable from the same initial dressed
/// state at least `min_gap_factor` times the larger coupling away.
pub fn well_isolated_lines(
    setup: &CombSetup,
    coupling: &BareCoupling,
    mode: CombMode,
    min_ratio: f64,
    min_gap_factor: f64,
) -> Result<Vec<LineChoice>, OracleError> {
    let lines = enumerate_comb(setup, coupling, mode, &IndexFilter::default())?;
    let bare = coupling
        .nonzero_pairs()
        .iter()
        .map(|p| p.2.norm())
        .fold(0.0, f64::max);
    let mut out = Vec::new();
    for line in &lines {
        if line.rabi.norm() < min_ratio * bare {
            continue;
        }
        let label = initial_label(&line.index, mode);
        let mut nearest = f64::INFINITY;
        let mut ok = true;
        for other in &lines {
            if other.index == line.index
                || initial_label(&other.index, mode) != label
                || other.rabi.norm() < 1e-3 * bare
            {
                continue;
            }
            let gap = (other.detuning - line.detuning).abs();
            nearest = nearest.min(gap);
            if gap < min_gap_factor * other.rabi.norm().max(line.rabi.norm()) {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(LineChoice {
                line: line.clone(),
                nearest_gap: nearest,
            });
        }
    }
    Ok(out)
}
