//! Levenberg–Marquardt least squares for small parameter counts.
//!
//! The Jacobian is formed by central differences, so the residual closure is
//! the only thing a caller supplies. Parameter uncertainties come from the
//! usual `s² (JᵀJ)⁻¹` covariance at the optimum.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least as many residuals ({residuals}) as parameters ({params})")]
    Underdetermined { residuals: usize, params: usize },
    #[error("residual vector contains non-finite values")]
    NonFinite,
    #[error("normal matrix is singular; parameters are not identifiable")]
    Singular,
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Stop when the relative drop of the residual sum of squares is below this.
    pub rss_tolerance: f64,
    /// Stop when every parameter step is below this fraction of its scale.
    pub step_tolerance: f64,
    /// Typical magnitude of each parameter; sets finite-difference steps.
    pub scales: Option<Vec<f64>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 200,
            rss_tolerance: 1e-15,
            step_tolerance: 1e-13,
            scales: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub covariance: DMatrix<f64>,
    pub rss: f64,
    pub dof: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    /// Half-width of the 95% normal-approximation confidence interval.
    pub fn ci95(&self, index: usize) -> f64 {
        1.959_963_985 * self.std_errors[index]
    }

    pub fn rms_residual(&self) -> f64 {
        let n = self.dof + self.params.len();
        (self.rss / n as f64).sqrt()
    }
}

fn rss(r: &DVector<f64>) -> f64 {
    r.norm_squared()
}

fn evaluate<F>(f: &F, p: &[f64]) -> Result<DVector<f64>, FitError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let r = DVector::from_vec(f(p));
    if r.iter().all(|x| x.is_finite()) {
        Ok(r)
    } else {
        Err(FitError::NonFinite)
    }
}

fn jacobian<F>(f: &F, p: &[f64], scales: &[f64], m: usize) -> Result<DMatrix<f64>, FitError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut jac = DMatrix::zeros(m, p.len());
    let mut work = p.to_vec();
    for j in 0..p.len() {
        let h = 1e-6 * scales[j].max(p[j].abs() * 1e-3);
        work[j] = p[j] + h;
        let up = evaluate(f, &work)?;
        work[j] = p[j] - h;
        let dn = evaluate(f, &work)?;
        work[j] = p[j];
        jac.set_column(j, &((up - dn) / (2.0 * h)));
    }
    Ok(jac)
}

pub fn levenberg_marquardt<F>(
    residuals: F,
    p0: &[f64],
    options: &FitOptions,
) -> Result<FitResult, FitError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = p0.len();
    let scales: Vec<f64> = match &options.scales {
        Some(s) => s.clone(),
        None => p0.iter().map(|x| x.abs().max(1e-8)).collect(),
    };
    let mut p = p0.to_vec();
    let mut r = evaluate(&residuals, &p)?;
    let m = r.len();
    if m < n {
        return Err(FitError::Underdetermined {
            residuals: m,
            params: n,
        });
    }
    let mut cost = rss(&r);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iterations {
        iterations += 1;
        let jac = jacobian(&residuals, &p, &scales, m)?;
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut accepted = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
            let r_trial = match evaluate(&residuals, &trial) {
                Ok(v) => v,
                Err(_) => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial_cost = rss(&r_trial);
            if trial_cost <= cost {
                let small_step = step
                    .iter()
                    .zip(&scales)
                    .all(|(d, s)| d.abs() <= options.step_tolerance * s);
                let small_drop = cost - trial_cost <= options.rss_tolerance * cost.max(1e-300);
                p = trial;
                r = r_trial;
                cost = trial_cost;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                if small_step || small_drop {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // No downhill step at any damping: we are at the numerical floor.
            converged = true;
        }
        if converged {
            break;
        }
    }

    let jac = jacobian(&residuals, &p, &scales, m)?;
    let jtj = jac.transpose() * &jac;
    let inv = jtj.try_inverse().ok_or(FitError::Singular)?;
    let dof = m - n;
    let s2 = if dof > 0 { cost / dof as f64 } else { 0.0 };
    let covariance = inv * s2;
    let std_errors = (0..n).map(|k| covariance[(k, k)].max(0.0).sqrt()).collect();
    Ok(FitResult {
        params: p,
        std_errors,
        covariance,
        rss: cost,
        dof,
        iterations,
        converged,
    })
}
