//! Adaptive Dormand–Prince 8(5,3) integrator for complex state vectors.
//!
//! Steps are clamped so that every requested output time is hit exactly,
//! which keeps fitted observables free of interpolation error.

use num_complex::Complex64 as C64;

use crate::tableau::{A, B, C, E3, E5};
use crate::OracleError;

const STAGES: usize = 12;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dop853Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub first_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for Dop853Options {
    fn default() -> Self {
        Dop853Options {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            first_step: None,
            max_steps: 500_000_000,
        }
    }
}

impl Dop853Options {
    /// Relative tolerance `tol` with absolute tolerance `tol / 100`.
    pub fn with_tolerance(tol: f64) -> Self {
        Dop853Options {
            rtol: tol,
            atol: tol * 1e-2,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

pub struct Dop853<F> {
    rhs: F,
    opts: Dop853Options,
    n: usize,
    k: Vec<Vec<C64>>,
    tmp: Vec<C64>,
    y_new: Vec<C64>,
    scale: Vec<f64>,
    pub stats: IntegrationStats,
}

impl<F: FnMut(f64, &[C64], &mut [C64])> Dop853<F> {
    pub fn new(rhs: F, n: usize, opts: Dop853Options) -> Self {
        Dop853 {
            rhs,
            opts,
            n,
            k: vec![vec![C64::default(); n]; STAGES + 1],
            tmp: vec![C64::default(); n],
            y_new: vec![C64::default(); n],
            scale: vec![0.0; n],
            stats: IntegrationStats::default(),
        }
    }

    fn eval(&mut self, t: f64, y: &[C64], stage: usize) {
        self.stats.evaluations += 1;
        (self.rhs)(t, y, &mut self.k[stage]);
    }

    fn rms_scaled(v: &[C64], scale: &[f64]) -> f64 {
        let s: f64 = v.iter().zip(scale).map(|(x, s)| (x / s).norm_sqr()).sum();
        (s / v.len() as f64).sqrt()
    }

    fn initial_step(&mut self, t0: f64, y0: &[C64], interval: f64) -> f64 {
        let (rtol, atol) = (self.opts.rtol, self.opts.atol);
        let scale: Vec<f64> = y0.iter().map(|y| atol + y.norm() * rtol).collect();
        let d0 = Self::rms_scaled(y0, &scale);
        let d1 = Self::rms_scaled(&self.k[0], &scale);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
        .min(interval);
        let y1: Vec<C64> = y0.iter().zip(&self.k[0]).map(|(y, f)| y + f * h0).collect();
        self.eval(t0 + h0, &y1, 1);
        let diff: Vec<C64> = self.k[1]
            .iter()
            .zip(&self.k[0])
            .map(|(a, b)| a - b)
            .collect();
        let d2 = Self::rms_scaled(&diff, &scale) / h0;
        let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 8.0)
        };
        (100.0 * h0).min(h1).min(interval).min(self.opts.max_step)
    }

    /// One trial step of size `h` from `(t, y)`; `k[0]` must hold `f(t, y)`.
    /// Leaves the candidate in `y_new` and returns the scaled error norm.
    fn trial_step(&mut self, t: f64, y: &[C64], h: f64) -> f64 {
        let n = self.n;
        for s in 1..STAGES {
            for i in 0..n {
                let mut acc = C64::default();
                for (j, a) in A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += self.k[j][i] * *a;
                    }
                }
                self.tmp[i] = y[i] + acc * h;
            }
            let tmp = std::mem::take(&mut self.tmp);
            self.eval(t + C[s] * h, &tmp, s);
            self.tmp = tmp;
        }
        for i in 0..n {
            let mut acc = C64::default();
            for (j, b) in B.iter().enumerate() {
                acc += self.k[j][i] * *b;
            }
            self.y_new[i] = y[i] + acc * h;
        }
        let y_new = std::mem::take(&mut self.y_new);
        self.eval(t + h, &y_new, STAGES);
        self.y_new = y_new;

        let (rtol, atol) = (self.opts.rtol, self.opts.atol);
        let mut err5 = 0.0;
        let mut err3 = 0.0;
        for i in 0..n {
            let scale = atol + y[i].norm().max(self.y_new[i].norm()) * rtol;
            self.scale[i] = scale;
            let mut e5 = C64::default();
            let mut e3 = C64::default();
            for s in 0..=STAGES {
                e5 += self.k[s][i] * E5[s];
                e3 += self.k[s][i] * E3[s];
            }
            err5 += (e5 / scale).norm_sqr();
            err3 += (e3 / scale).norm_sqr();
        }
        if err5 == 0.0 && err3 == 0.0 {
            return 0.0;
        }
        let denom = err5 + 0.01 * err3;
        h.abs() * err5 / (denom * n as f64).sqrt()
    }

    /// Integrates from `t0` and returns the state at each time in `t_eval`
    /// (ascending, all `>= t0`).
    pub fn integrate(
        &mut self,
        t0: f64,
        y0: &[C64],
        t_eval: &[f64],
    ) -> Result<Vec<Vec<C64>>, OracleError> {
        if y0.len() != self.n {
            return Err(OracleError::DimensionMismatch {
                expected: self.n,
                got: y0.len(),
            });
        }
        let mut out = Vec::with_capacity(t_eval.len());
        let mut t = t0;
        let mut y = y0.to_vec();
        let t_end = t_eval.last().copied().unwrap_or(t0);
        if t_end <= t0 {
            out.extend(t_eval.iter().map(|_| y.clone()));
            return Ok(out);
        }
        self.eval(t, &y0.to_vec(), 0);
        let mut h = match self.opts.first_step {
            Some(h) => h,
            None => self.initial_step(t0, y0, t_end - t0),
        };
        let mut steps = 0usize;
        for &target in t_eval {
            if target < t {
                return Err(OracleError::InvalidParameter {
                    name: "t_eval (must be ascending)",
                    value: target,
                });
            }
            while t < target {
                if target - t <= 10.0 * (next_up(t) - t) {
                    t = target;
                    break;
                }
                steps += 1;
                if steps > self.opts.max_steps {
                    return Err(OracleError::TooManySteps {
                        t,
                        max_steps: self.opts.max_steps,
                    });
                }
                let mut rejected = false;
                loop {
                    let min_step = 10.0 * (next_up(t) - t);
                    if h < min_step {
                        return Err(OracleError::StepUnderflow { t, h });
                    }
                    let proposal = h.min(self.opts.max_step);
                    let clamped = t + proposal >= target;
                    let step = if clamped { target - t } else { proposal };
                    let err = self.trial_step(t, &y, step);
                    if err < 1.0 {
                        let mut factor = if err == 0.0 {
                            MAX_FACTOR
                        } else {
                            (SAFETY * err.powf(ERROR_EXPONENT)).min(MAX_FACTOR)
                        };
                        if rejected {
                            factor = factor.min(1.0);
                        }
                        h = if clamped {
                            (step * factor).max(proposal.min(step * MAX_FACTOR))
                        } else {
                            step * factor
                        };
                        t = if clamped { target } else { t + step };
                        std::mem::swap(&mut y, &mut self.y_new);
                        self.k.swap(0, STAGES);
                        self.stats.accepted += 1;
                        break;
                    }
                    h = step * (SAFETY * err.powf(ERROR_EXPONENT)).max(MIN_FACTOR);
                    rejected = true;
                    self.stats.rejected += 1;
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}
