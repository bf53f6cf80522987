use std::f64::consts::PI;

use curve_fit::{levenberg_marquardt, FitOptions};
use spin_algebra::{wigner_d, SpinValue};

use crate::{CombError, TransitionIndex};

/// Measured `|Ω̄/Ω_mM|` of a single-layer line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioObservation {
    pub index: TransitionIndex,
    pub ratio_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleFit {
    pub theta_s: f64,
    pub theta_d: f64,
    pub residuals: Vec<f64>,
    pub std_errors: (f64, f64),
}

impl AngleFit {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, r| a.max(r.abs()))
    }
}

fn model(obs: &[RatioObservation], spins: (SpinValue, SpinValue), p: &[f64]) -> Vec<f64> {
    let ds = wigner_d(spins.0, p[0]);
    let dd = wigner_d(spins.1, p[1]);
    obs.iter()
        .map(|o| {
            (ds.get(o.index.m_bar, o.index.m) * dd.get(o.index.big_m, o.index.big_m_bar)).abs()
                - o.ratio_abs
        })
        .collect()
}

/// Least-squares first-layer angles `(θ_1^s, θ_1^d)` from single-layer
/// coupling ratios, started from a coarse grid over `(0, π)²`.
pub fn fit_single_layer_angles(
    obs: &[RatioObservation],
    spins: (SpinValue, SpinValue),
) -> Result<AngleFit, CombError> {
    let options = FitOptions {
        scales: Some(vec![1.0, 1.0]),
        ..FitOptions::default()
    };
    let starts: Vec<f64> = (1..8).map(|k| k as f64 * PI / 8.0).collect();
    let mut best: Option<curve_fit::FitResult> = None;
    let mut last_err = None;
    for &a in &starts {
        for &b in &starts {
            match levenberg_marquardt(|p| model(obs, spins, p), &[a, b], &options) {
                Ok(fit) => {
                    if best.as_ref().is_none_or(|bf| fit.rss < bf.rss) {
                        best = Some(fit);
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    let fit = match (best, last_err) {
        (Some(f), _) => f,
        (None, Some(e)) => return Err(e.into()),
        (None, None) => unreachable!("at least one start is tried"),
    };
    let wrap = |t: f64| {
        let t = t.rem_euclid(2.0 * PI);
        if t > PI {
            2.0 * PI - t
        } else {
            t
        }
    };
    let residuals = model(obs, spins, &fit.params);
    Ok(AngleFit {
        theta_s: wrap(fit.params[0]),
        theta_d: wrap(fit.params[1]),
        residuals,
        std_errors: (fit.std_errors[0], fit.std_errors[1]),
    })
}
