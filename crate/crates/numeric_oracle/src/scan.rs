//! Simulated resonance scans and pulse-length spectroscopy with least-squares fits.

use curve_fit::{levenberg_marquardt, FitOptions, FitResult};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::lab::LabSystem;
use crate::propagate::propagate_at;
use crate::OracleError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanAxis {
    /// Laser detuning, rad/s.
    Detuning,
    /// Pulse duration, s.
    Duration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitValue {
    pub value: f64,
    /// Half-width of the 95% confidence interval.
    pub ci95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub axis_kind: ScanAxis,
    pub axis: Vec<f64>,
    pub probability: Vec<f64>,
    /// Fitted line center (detuning scans only), rad/s.
    pub center: Option<FitValue>,
    /// Fitted on-resonance coupling `|Ω̄|`, with `P = sin²(|Ω̄| t)` on resonance.
    pub rabi: FitValue,
    pub amplitude: f64,
    pub offset: f64,
    pub fit_rms: f64,
    /// More than one resolved peak, or a single-line model that does not fit.
    pub multi_peak: bool,
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub tolerance: f64,
    /// Minimum peak excitation for a line to count as found.
    pub noise_floor: f64,
    /// Fit rms (relative to the fitted amplitude) above which a fit is rejected.
    pub max_relative_rms: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tolerance: 1e-10,
            noise_floor: 1e-3,
            max_relative_rms: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    pub center: f64,
    pub half_width: f64,
    pub points: usize,
}

impl ScanWindow {
    pub fn axis(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n)
            .map(|k| {
                self.center - self.half_width + 2.0 * self.half_width * k as f64 / (n - 1) as f64
            })
            .collect()
    }
}

fn fit_options(scales: Vec<f64>) -> FitOptions {
    FitOptions {
        scales: Some(scales),
        ..Default::default()
    }
}

/// Detuned two-level lineshape after a pulse of length `tau`:
/// `A R²/(R² + u²) sin²(√(R² + u²) τ/2) + c` with `u = x − x0`.
pub fn line_shape(x: f64, p: &[f64], tau: f64) -> f64 {
    let (a, x0, r, c) = (p[0], p[1], p[2], p[3]);
    let u = x - x0;
    let w2 = r * r + u * u;
    if w2 == 0.0 {
        return c;
    }
    a * r * r / w2 * (w2.sqrt() * tau / 2.0).sin().powi(2) + c
}

/// `A sin²(ω t/2 + φ) + c`.
pub fn flop_model(t: f64, p: &[f64]) -> f64 {
    p[0] * (p[1] * t / 2.0 + p[2]).sin().powi(2) + p[3]
}

/// Fits [`line_shape`]; returns `(A, x0, R, c)`.
pub fn fit_line_shape(x: &[f64], y: &[f64], tau: f64) -> Result<FitResult, OracleError> {
    let (imax, ymax) =
        y.iter().enumerate().fold(
            (0, f64::MIN),
            |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc },
        );
    let span = (x[x.len() - 1] - x[0]).abs().max(f64::MIN_POSITIVE);
    let pi_rate = std::f64::consts::PI / tau;
    let mut best: Option<FitResult> = None;
    for factor in [1.0, 0.5, 2.0, 0.25] {
        let p0 = vec![ymax.max(1e-6), x[imax], pi_rate * factor, 0.0];
        let scales = vec![1.0, span, pi_rate, 1.0];
        let residuals = |p: &[f64]| {
            x.iter()
                .zip(y)
                .map(|(xi, yi)| line_shape(*xi, p, tau) - yi)
                .collect::<Vec<_>>()
        };
        if let Ok(fit) = levenberg_marquardt(residuals, &p0, &fit_options(scales)) {
            if best.as_ref().is_none_or(|b| fit.rss < b.rss) {
                best = Some(fit);
            }
        }
    }
    best.ok_or_else(|| OracleError::FitFailure {
        reason: "lineshape fit did not converge".into(),
    })
}

/// Fits [`flop_model`]; returns `(A, ω, φ, c)`.
///
/// The frequency is seeded from a grid of linear least-squares fits of
/// `a + b cos ωt + d sin ωt`.
pub fn fit_rabi_flop(t: &[f64], y: &[f64]) -> Result<FitResult, OracleError> {
    let t_max = t.iter().cloned().fold(0.0, f64::max);
    if t_max <= 0.0 || t.len() < 5 {
        return Err(OracleError::FitFailure {
            reason: "too few samples for a flop fit".into(),
        });
    }
    let w_lo = 0.25 * std::f64::consts::TAU / t_max;
    let w_hi = std::f64::consts::PI * t.len() as f64 / (2.0 * t_max);
    let grid = 600;
    let mut seed = (f64::INFINITY, w_lo, [0.0; 3]);
    for k in 0..grid {
        let w = w_lo * (w_hi / w_lo).powf(k as f64 / (grid - 1) as f64);
        if let Some((rss, coef)) = linear_harmonic_fit(t, y, w) {
            if rss < seed.0 {
                seed = (rss, w, coef);
            }
        }
    }
    let (_, w0, [a, b, d]) = seed;
    let amp = 2.0 * b.hypot(d);
    let phi = 0.5 * d.atan2(-b);
    let p0 = vec![amp, w0, phi, a - amp / 2.0];
    let residuals = |p: &[f64]| {
        t.iter()
            .zip(y)
            .map(|(ti, yi)| flop_model(*ti, p) - yi)
            .collect::<Vec<_>>()
    };
    levenberg_marquardt(residuals, &p0, &fit_options(vec![1.0, w0, 1.0, 1.0])).map_err(|e| {
        OracleError::FitFailure {
            reason: e.to_string(),
        }
    })
}

fn linear_harmonic_fit(t: &[f64], y: &[f64], w: f64) -> Option<(f64, [f64; 3])> {
    let mut m = nalgebra::Matrix3::<f64>::zeros();
    let mut v = nalgebra::Vector3::<f64>::zeros();
    for (ti, yi) in t.iter().zip(y) {
        let (s, c) = (w * ti).sin_cos();
        let row = nalgebra::Vector3::new(1.0, c, s);
        m += row * row.transpose();
        v += row * *yi;
    }
    let coef = m.lu().solve(&v)?;
    let rss = t
        .iter()
        .zip(y)
        .map(|(ti, yi)| {
            let (s, c) = (w * ti).sin_cos();
            (coef[0] + coef[1] * c + coef[2] * s - yi).powi(2)
        })
        .sum();
    Some((rss, [coef[0], coef[1], coef[2]]))
}

/// Number of well separated local maxima above `fraction` of the global maximum.
pub fn count_peaks(y: &[f64], fraction: f64) -> usize {
    let ymax = y.iter().cloned().fold(f64::MIN, f64::max);
    let threshold = fraction * ymax;
    let mut peaks = 0;
    let mut current: Option<f64> = None;
    let mut valley = f64::INFINITY;
    for (i, &v) in y.iter().enumerate() {
        let left = if i > 0 { y[i - 1] } else { f64::MIN };
        let right = if i + 1 < y.len() { y[i + 1] } else { f64::MIN };
        if current.is_some() {
            valley = valley.min(v);
        }
        if v >= threshold && v >= left && v >= right {
            match current {
                None => {
                    peaks = 1;
                    current = Some(v);
                }
                Some(prev) => {
                    if valley < 0.7 * prev.min(v) {
                        peaks += 1;
                        current = Some(v);
                    } else {
                        current = Some(prev.max(v));
                    }
                }
            }
            valley = f64::INFINITY;
        }
    }
    peaks
}

fn with_detuning(
    system: &LabSystem,
    laser: usize,
    detuning: f64,
) -> Result<LabSystem, OracleError> {
    let mut sys = system.clone();
    let tone = sys
        .lasers
        .get_mut(laser)
        .ok_or(OracleError::InvalidParameter {
            name: "laser",
            value: laser as f64,
        })?;
    tone.detuning = detuning;
    Ok(sys)
}

/// Scans laser tone `laser` across `window` with a fixed pulse length and fits a
/// single detuned-Rabi lineshape. Points run in parallel.
pub fn simulate_line_scan(
    system: &LabSystem,
    initial: &[C64],
    laser: usize,
    window: &ScanWindow,
    pulse_duration: f64,
    opts: &ScanOptions,
) -> Result<ScanResult, OracleError> {
    if !(pulse_duration > 0.0) {
        return Err(OracleError::InvalidParameter {
            name: "pulse_duration",
            value: pulse_duration,
        });
    }
    let axis = window.axis();
    let runs: Vec<Result<(f64, f64), OracleError>> = axis
        .par_iter()
        .map(|&x| {
            let sys = with_detuning(system, laser, x)?;
            let traj = propagate_at(&sys, initial, &[pulse_duration], opts.tolerance)?;
            Ok((
                sys.excited_population(traj.final_state()),
                traj.max_norm_drift,
            ))
        })
        .collect();
    let mut probability = Vec::with_capacity(axis.len());
    let mut max_norm_drift: f64 = 0.0;
    for r in runs {
        let (p, drift) = r?;
        probability.push(p);
        max_norm_drift = max_norm_drift.max(drift);
    }
    let peak = probability.iter().cloned().fold(0.0, f64::max);
    if peak < opts.noise_floor {
        return Err(OracleError::LineNotFound {
            max_probability: peak,
            floor: opts.noise_floor,
        });
    }
    let fit = fit_line_shape(&axis, &probability, pulse_duration)?;
    let fit_rms = fit.rms_residual();
    let relative = fit_rms / fit.params[0].abs().max(opts.noise_floor);
    let multi_peak = count_peaks(&probability, 0.3) > 1 || relative > opts.max_relative_rms;
    Ok(ScanResult {
        axis_kind: ScanAxis::Detuning,
        axis,
        center: Some(FitValue {
            value: fit.params[1],
            ci95: fit.ci95(1),
        }),
        rabi: FitValue {
            value: fit.params[2].abs() / 2.0,
            ci95: fit.ci95(2) / 2.0,
        },
        amplitude: fit.params[0],
        offset: fit.params[3],
        probability,
        fit_rms,
        multi_peak,
        max_norm_drift,
    })
}

/// Pulse-length spectroscopy at a fixed detuning: one trajectory sampled at
/// `points` durations up to `max_duration`, fitted with [`flop_model`].
pub fn simulate_rabi_flop(
    system: &LabSystem,
    initial: &[C64],
    laser: usize,
    detuning: f64,
    max_duration: f64,
    points: usize,
    opts: &ScanOptions,
) -> Result<ScanResult, OracleError> {
    if !(max_duration > 0.0) {
        return Err(OracleError::InvalidParameter {
            name: "max_duration",
            value: max_duration,
        });
    }
    let sys = with_detuning(system, laser, detuning)?;
    let points = points.max(8);
    let axis: Vec<f64> = (0..points)
        .map(|k| max_duration * k as f64 / (points - 1) as f64)
        .collect();
    let traj = propagate_at(&sys, initial, &axis, opts.tolerance)?;
    let probability: Vec<f64> = traj
        .amplitudes
        .iter()
        .map(|psi| sys.excited_population(psi))
        .collect();
    let peak = probability.iter().cloned().fold(0.0, f64::max);
    if peak < opts.noise_floor {
        return Err(OracleError::LineNotFound {
            max_probability: peak,
            floor: opts.noise_floor,
        });
    }
    let fit = fit_rabi_flop(&axis, &probability)?;
    let fit_rms = fit.rms_residual();
    if fit_rms > opts.max_relative_rms * fit.params[0].abs().max(opts.noise_floor) {
        return Err(OracleError::FitFailure {
            reason: format!("aperiodic signal: fit rms {fit_rms:.3e}"),
        });
    }
    Ok(ScanResult {
        axis_kind: ScanAxis::Duration,
        axis,
        center: None,
        rabi: FitValue {
            value: fit.params[1].abs() / 2.0,
            ci95: fit.ci95(1) / 2.0,
        },
        amplitude: fit.params[0],
        offset: fit.params[3],
        probability,
        fit_rms,
        multi_peak: false,
        max_norm_drift: traj.max_norm_drift,
    })
}
