//! Floquet quasi-energies of a single driven manifold.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use spin_algebra::{expm, spin_operators, CMatrix, SpinValue};
use std::f64::consts::{PI, TAU};

use crate::OracleError;

pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

/// Drive frequencies expressed as integer multiples of one fundamental.
#[derive(Debug, Clone, PartialEq)]
pub struct Rationalized {
    pub fundamental: f64,
    pub period: f64,
    pub multiples: Vec<u64>,
    /// `multiples[i] · fundamental`.
    pub adjusted: Vec<f64>,
    pub max_relative_error: f64,
}

fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    // Continued-fraction convergents of a positive real.
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        if a > u64::MAX as f64 / 2.0 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (
            a.saturating_mul(p1).saturating_add(p0),
            a.saturating_mul(q1).saturating_add(q0),
        );
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 || (p1 as f64 / q1 as f64 - x).abs() <= 1e-15 * x {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        (x.round() as u64, 1)
    } else {
        (p1, q1)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Approximates every ratio `freqs[i] / min(freqs)` by a fraction with
/// denominator at most `max_denominator` and returns the common fundamental.
pub fn rationalize(freqs: &[f64], max_denominator: u64) -> Result<Rationalized, OracleError> {
    let positive: Vec<f64> = freqs.to_vec();
    if positive.is_empty() || positive.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
        return Err(OracleError::InvalidParameter {
            name: "frequency",
            value: positive.first().copied().unwrap_or(0.0),
        });
    }
    let base = positive.iter().cloned().fold(f64::INFINITY, f64::min);
    let fracs: Vec<(u64, u64)> = positive
        .iter()
        .map(|f| best_rational(f / base, max_denominator))
        .collect();
    let mut lcm: u64 = 1;
    for &(_, q) in &fracs {
        let g = gcd(lcm, q);
        lcm = (lcm / g)
            .checked_mul(q)
            .filter(|l| *l <= max_denominator)
            .ok_or(OracleError::NoExactPeriod {
                max_denominator,
                error: f64::NAN,
            })?;
    }
    let mut multiples: Vec<u64> = fracs.iter().map(|&(p, q)| p * (lcm / q)).collect();
    let common = multiples.iter().fold(0, |a, &b| gcd(a, b)).max(1);
    multiples.iter_mut().for_each(|k| *k /= common);
    let fundamental = base * common as f64 / lcm as f64;
    let adjusted: Vec<f64> = multiples.iter().map(|k| *k as f64 * fundamental).collect();
    let max_relative_error = positive
        .iter()
        .zip(&adjusted)
        .map(|(f, a)| ((f - a) / f).abs())
        .fold(0.0, f64::max);
    Ok(Rationalized {
        fundamental,
        period: TAU / fundamental,
        multiples,
        adjusted,
        max_relative_error,
    })
}

/// Common period of `freqs`, rejected unless every frequency is an integer
/// multiple of the fundamental to relative accuracy `rel_tol`.
pub fn exact_period(
    freqs: &[f64],
    max_denominator: u64,
    rel_tol: f64,
) -> Result<Rationalized, OracleError> {
    let r = rationalize(freqs, max_denominator)?;
    if r.max_relative_error > rel_tol {
        return Err(OracleError::NoExactPeriod {
            max_denominator,
            error: r.max_relative_error,
        });
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSpectrum {
    pub period: f64,
    /// Ascending, folded to `[−π/T, π/T)`, rad/s.
    pub quasi_energies: Vec<f64>,
    /// Distinct quasi-energies with their multiplicities.
    pub multiplicities: Vec<(f64, usize)>,
    /// `‖M†M − 1‖_max` of the one-period propagator.
    pub unitarity_error: f64,
}

pub fn fold_quasi_energy(e: f64, period: f64) -> f64 {
    let zone = TAU / period;
    let mut x = (e + PI / period).rem_euclid(zone) - PI / period;
    if x >= PI / period {
        x -= zone;
    }
    x
}

/// One-period propagator by fourth-order Magnus steps at the two Gauss points.
pub fn monodromy(h: impl Fn(f64) -> CMatrix, dim: usize, period: f64, steps: usize) -> CMatrix {
    let steps = steps.max(1);
    let dt = period / steps as f64;
    let c = 3f64.sqrt() / 6.0;
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for k in 0..steps {
        let t = k as f64 * dt;
        let h1 = h(t + (0.5 - c) * dt);
        let h2 = h(t + (0.5 + c) * dt);
        let a1 = &h1 * C64::new(0.0, -1.0);
        let a2 = &h2 * C64::new(0.0, -1.0);
        let comm = &a2 * &a1 - &a1 * &a2;
        let omega = (&a1 + &a2) * C64::new(dt / 2.0, 0.0)
            + comm * C64::new(3f64.sqrt() / 12.0 * dt * dt, 0.0);
        u = expm(&omega) * u;
    }
    u
}

/// Quasi-energies `−arg(λ)/T` of the one-period propagator of `h`.
pub fn floquet_quasienergies(
    h: impl Fn(f64) -> CMatrix,
    dim: usize,
    period: f64,
    steps: usize,
    degeneracy_tol: f64,
) -> Result<FloquetSpectrum, OracleError> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(OracleError::InvalidParameter {
            name: "period",
            value: period,
        });
    }
    let m = monodromy(h, dim, period, steps);
    let unitarity_error = (m.adjoint() * &m - DMatrix::<C64>::identity(dim, dim))
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    let eig = m
        .clone()
        .schur()
        .eigenvalues()
        .ok_or(OracleError::FitFailure {
            reason: "Schur decomposition of the monodromy failed".into(),
        })?;
    let mut quasi_energies: Vec<f64> = eig
        .iter()
        .map(|l| fold_quasi_energy(-l.arg() / period, period))
        .collect();
    quasi_energies.sort_by(|a, b| a.total_cmp(b));
    let mut multiplicities: Vec<(f64, usize)> = Vec::new();
    for &e in &quasi_energies {
        match multiplicities.last_mut() {
            Some((v, n)) if (e - *v).abs() <= degeneracy_tol => *n += 1,
            _ => multiplicities.push((e, 1)),
        }
    }
    Ok(FloquetSpectrum {
        period,
        quasi_energies,
        multiplicities,
        unitarity_error,
    })
}

/// One rf field acting on a manifold: `amp1 cos(ω1 t) − amp2 sin(ω1 t) cos(ω2 t)`
/// along `(cos α, sin α, 0)`, amplitudes already scaled to the target's g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfField {
    pub amp1: f64,
    pub omega1: f64,
    pub amp2: f64,
    pub omega2: f64,
    pub alpha: f64,
}

impl RfField {
    fn value(&self, t: f64) -> f64 {
        self.amp1 * (self.omega1 * t).cos()
            - self.amp2 * (self.omega1 * t).sin() * (self.omega2 * t).cos()
    }

    /// Distinct nonzero spectral components.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![self.omega1];
        if self.amp2 != 0.0 && self.omega2 != 0.0 {
            f.push(self.omega2);
        }
        f
    }
}

/// A single manifold with its static splitting, static perturbations and rf fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldDrive {
    pub spin: SpinValue,
    pub larmor: f64,
    pub f_zz: f64,
    pub fields: Vec<RfField>,
}

impl ManifoldDrive {
    pub fn new(spin: SpinValue, larmor: f64) -> Self {
        ManifoldDrive {
            spin,
            larmor,
            f_zz: 0.0,
            fields: Vec::new(),
        }
    }

    pub fn with_field(mut self, field: RfField) -> Self {
        self.fields.push(field);
        self
    }

    pub fn hamiltonian(&self) -> impl Fn(f64) -> CMatrix + '_ {
        let ops = spin_operators(self.spin);
        let s2 = self.spin.casimir();
        let mut h0 = &ops.sz * C64::new(self.larmor, 0.0);
        for (i, m) in self.spin.projections().enumerate() {
            let m = m.value();
            h0[(i, i)] += C64::new(1.5 * self.f_zz * (s2 - 3.0 * m * m), 0.0);
        }
        let axes: Vec<CMatrix> = self
            .fields
            .iter()
            .map(|f| {
                &ops.sx * C64::new(f.alpha.cos(), 0.0) + &ops.sy * C64::new(f.alpha.sin(), 0.0)
            })
            .collect();
        move |t| {
            let mut h = h0.clone();
            for (f, x) in self.fields.iter().zip(&axes) {
                h += x * C64::new(f.value(t), 0.0);
            }
            h
        }
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.fields.iter().flat_map(|f| f.frequencies()).collect()
    }

    /// Quasi-energies over the exact common period of all drive components,
    /// with `steps_per_cycle` Magnus steps per cycle of the fastest component.
    pub fn quasienergies(
        &self,
        max_denominator: u64,
        steps_per_cycle: usize,
    ) -> Result<FloquetSpectrum, OracleError> {
        let freqs = self.frequencies();
        let period = if freqs.is_empty() {
            TAU / self.larmor.abs().max(f64::MIN_POSITIVE)
        } else {
            exact_period(&freqs, max_denominator, 1e-12)?.period
        };
        let fastest = freqs.iter().cloned().fold(self.larmor.abs(), f64::max);
        let cycles = (period * fastest / TAU).ceil().max(1.0);
        let steps = (cycles as usize) * steps_per_cycle.max(1);
        floquet_quasienergies(
            self.hamiltonian(),
            self.spin.dim(),
            period,
            steps,
            1e-9 * TAU / period,
        )
    }
}

fn spin_half_splitting(
    larmor: f64,
    field: RfField,
    steps_per_cycle: usize,
) -> Result<(f64, f64), OracleError> {
    let drive = ManifoldDrive::new(SpinValue::new(1), larmor).with_field(field);
    let spectrum = drive.quasienergies(DEFAULT_MAX_DENOMINATOR, steps_per_cycle)?;
    let e = &spectrum.quasi_energies;
    Ok(((e[1] - e[0]).abs(), TAU / spectrum.period))
}

/// Larmor shift `c` of a spin-1/2 driven near resonance at `omega1`, read off
/// the Floquet splitting as `√((ω_0 + c − ω_1)² + (amp/2)²)`. Of the folded
/// branches, the one closest to `guess` is returned.
pub fn resonant_shift_from_floquet(
    larmor: f64,
    omega1: f64,
    amp: f64,
    guess: f64,
    steps_per_cycle: usize,
) -> Result<f64, OracleError> {
    let field = RfField {
        amp1: amp,
        omega1,
        amp2: 0.0,
        omega2: 0.0,
        alpha: 0.0,
    };
    let (diff, zone) = spin_half_splitting(larmor, field, steps_per_cycle)?;
    let half = amp / 2.0;
    let detuning = larmor - omega1;
    let mut best = f64::NAN;
    for split in [diff, zone - diff] {
        let inner = (split * split - half * half).max(0.0).sqrt();
        for c in [inner - detuning, -inner - detuning] {
            if best.is_nan() || (c - guess).abs() < (best - guess).abs() {
                best = c;
            }
        }
    }
    Ok(best)
}

/// Larmor shift of a spin-1/2 from an off-resonant field at `omega` with
/// amplitude `amp` felt by the spin. The folded splitting is unfolded to the
/// branch closest to `larmor + guess`.
pub fn offresonant_shift_from_floquet(
    larmor: f64,
    omega: f64,
    amp: f64,
    guess: f64,
    steps_per_cycle: usize,
) -> Result<f64, OracleError> {
    let field = RfField {
        amp1: amp,
        omega1: omega,
        amp2: 0.0,
        omega2: 0.0,
        alpha: 0.0,
    };
    let (diff, zone) = spin_half_splitting(larmor, field, steps_per_cycle)?;
    let target = larmor + guess;
    let k = (target / zone).floor();
    let mut best = f64::NAN;
    for n in [k - 1.0, k, k + 1.0] {
        for v in [n * zone + diff, n * zone - diff] {
            if best.is_nan() || (v - target).abs() < (best - target).abs() {
                best = v;
            }
        }
    }
    Ok(best - larmor)
}
