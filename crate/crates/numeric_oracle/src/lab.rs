//! Lab-frame model of the two manifolds, their rf drives, laser tones and an
//! optional motional mode.

use std::f64::consts::TAU;

use dressing_engine::{DressingConfig, RfLayer, SpinManifold, BOHR_MAGNETON_HZ_PER_TESLA};
use ms_gate::MotionalMode;
use num_complex::Complex64 as C64;
use spin_algebra::{rotation_unitary, spin_operators, CMatrix, HalfInt, SpinValue};
use transition_comb::BareCoupling;

use crate::hamiltonian::{DrivenHamiltonian, FrameFactors, SparseTerm, Tone};
use crate::OracleError;

#[derive(Debug, Clone, PartialEq)]
pub struct DrivenManifold {
    pub manifold: SpinManifold,
    /// Bare Larmor frequency, rad/s.
    pub larmor: f64,
    pub layer1: Option<RfLayer>,
    /// Sideband component; its polarisation follows `layer1.alpha`.
    pub layer2: Option<RfLayer>,
}

impl DrivenManifold {
    pub fn from_config(cfg: &DressingConfig) -> Self {
        DrivenManifold {
            manifold: cfg.manifold,
            larmor: cfg.static_field.larmor,
            layer1: Some(cfg.layer1),
            layer2: cfg.layer2,
        }
    }

    pub fn undriven(manifold: SpinManifold, larmor: f64) -> Self {
        DrivenManifold {
            manifold,
            larmor,
            layer1: None,
            layer2: None,
        }
    }

    pub fn spin(&self) -> SpinValue {
        self.manifold.spin
    }

    /// Frequency of the rotating frame used for propagation.
    pub fn frame_frequency(&self) -> f64 {
        self.layer1.map_or(self.larmor, |l| l.omega)
    }

    pub fn alpha(&self) -> f64 {
        self.layer1.map_or(0.0, |l| l.alpha)
    }

    /// Field waveform of this manifold's drive, in its own g-inclusive units.
    pub fn drive_tone(&self) -> Option<Tone> {
        let l1 = self.layer1?;
        let (amp2, omega2) = self.layer2.map_or((0.0, 0.0), |l| (l.amp, l.omega));
        Some(Tone::RfDrive {
            amp1: l1.amp,
            omega1: l1.omega,
            amp2,
            omega2,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaserTone {
    /// Laser detuning Δ_L from the optical reference, rad/s.
    pub detuning: f64,
    pub coupling: BareCoupling,
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Perturbations {
    /// Static field offset along z, tesla.
    pub delta_bz: f64,
    /// Axial gradient `f_zz` per manifold (s, d), rad/s.
    pub f_zz: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabSystem {
    pub s: DrivenManifold,
    pub d: DrivenManifold,
    pub cross_coupling: bool,
    pub lasers: Vec<LaserTone>,
    pub mode: Option<MotionalMode>,
    pub perturbations: Perturbations,
}

impl LabSystem {
    pub fn new(s: DrivenManifold, d: DrivenManifold) -> Self {
        LabSystem {
            s,
            d,
            cross_coupling: true,
            lasers: Vec::new(),
            mode: None,
            perturbations: Perturbations::default(),
        }
    }

    pub fn from_configs(s: &DressingConfig, d: &DressingConfig) -> Self {
        Self::new(
            DrivenManifold::from_config(s),
            DrivenManifold::from_config(d),
        )
    }

    pub fn with_laser(mut self, tone: LaserTone) -> Self {
        self.lasers.push(tone);
        self
    }

    pub fn spins(&self) -> (SpinValue, SpinValue) {
        (self.s.spin(), self.d.spin())
    }

    pub fn internal_dim(&self) -> usize {
        self.s.spin().dim() + self.d.spin().dim()
    }

    pub fn fock_dim(&self) -> usize {
        self.mode.map_or(1, |m| m.fock_cutoff)
    }

    pub fn dim(&self) -> usize {
        self.internal_dim() * self.fock_dim()
    }

    pub fn s_index(&self, m: HalfInt) -> Result<usize, OracleError> {
        Ok(self.s.spin().index_of(m)?)
    }

    pub fn d_index(&self, big_m: HalfInt) -> Result<usize, OracleError> {
        Ok(self.s.spin().dim() + self.d.spin().index_of(big_m)?)
    }

    fn full_index(&self, internal: usize, n: usize) -> usize {
        internal * self.fock_dim() + n
    }

    /// Full state from internal amplitudes (s block then d block) and a Fock number.
    pub fn embed(&self, internal: &[C64], fock: usize) -> Result<Vec<C64>, OracleError> {
        if internal.len() != self.internal_dim() {
            return Err(OracleError::DimensionMismatch {
                expected: self.internal_dim(),
                got: internal.len(),
            });
        }
        if fock >= self.fock_dim() {
            return Err(OracleError::InvalidParameter {
                name: "fock",
                value: fock as f64,
            });
        }
        let mut psi = vec![C64::default(); self.dim()];
        for (i, a) in internal.iter().enumerate() {
            psi[self.full_index(i, fock)] = *a;
        }
        Ok(psi)
    }

    /// Internal-level populations with the mode traced out.
    pub fn internal_populations(&self, psi: &[C64]) -> Vec<f64> {
        let f = self.fock_dim();
        (0..self.internal_dim())
            .map(|i| psi[i * f..(i + 1) * f].iter().map(|x| x.norm_sqr()).sum())
            .collect()
    }

    /// Total population of the d manifold.
    pub fn excited_population(&self, psi: &[C64]) -> f64 {
        self.internal_populations(psi)[self.s.spin().dim()..]
            .iter()
            .sum()
    }

    fn static_diag(&self, dm: &DrivenManifold, f_zz: f64) -> Vec<f64> {
        let spin = dm.spin();
        let zeeman = dm.larmor
            + TAU * dm.manifold.g_factor * BOHR_MAGNETON_HZ_PER_TESLA * self.perturbations.delta_bz;
        let s2 = spin.casimir();
        spin.projections()
            .map(|m| {
                let m = m.value();
                zeeman * m + 1.5 * f_zz * (s2 - 3.0 * m * m)
            })
            .collect()
    }

    pub fn hamiltonian(&self) -> Result<DrivenHamiltonian, OracleError> {
        let (ss, sd) = self.spins();
        let ns = ss.dim();
        let fd = self.fock_dim();
        let mut h = DrivenHamiltonian::new(self.dim());
        let nu = self.mode.map_or(0.0, |m| m.nu);

        let diag_s = self.static_diag(&self.s, self.perturbations.f_zz.0);
        let diag_d = self.static_diag(&self.d, self.perturbations.f_zz.1);
        let internal_diag: Vec<f64> = diag_s.into_iter().chain(diag_d).collect();
        let mut powers = Vec::with_capacity(self.dim());
        let twice: Vec<[i32; 2]> = ss
            .projections()
            .map(|m| [m.twice(), 0])
            .chain(sd.projections().map(|m| [0, m.twice()]))
            .collect();
        for i in 0..self.internal_dim() {
            for n in 0..fd {
                let a = self.full_index(i, n);
                h.diag[a] = internal_diag[i] + nu * n as f64;
                powers.push(vec![twice[i][0], twice[i][1], n as i32]);
            }
        }
        let factors = FrameFactors {
            bases: vec![
                self.s.frame_frequency() / 2.0,
                self.d.frame_frequency() / 2.0,
                nu,
            ],
            powers,
        };
        h.frame = factors.frequencies();
        h.frame_factors = Some(factors);

        let manifolds = [(&self.s, 0, ss), (&self.d, ns, sd)];
        for (k, (source, _, _)) in manifolds.iter().enumerate() {
            let Some(tone) = source.drive_tone() else {
                continue;
            };
            let alpha = source.alpha();
            let mut entries = Vec::new();
            for (j, (target, offset, spin)) in manifolds.iter().enumerate() {
                if j != k && !self.cross_coupling {
                    continue;
                }
                let scale = target.manifold.g_factor / source.manifold.g_factor;
                let ops = spin_operators(*spin);
                let x = (&ops.sx * C64::new(alpha.cos(), 0.0)
                    + &ops.sy * C64::new(alpha.sin(), 0.0))
                    * C64::new(scale, 0.0);
                push_block(&mut entries, &x, *offset, fd, |i, n| self.full_index(i, n));
            }
            h.terms.push(SparseTerm { tone, entries });
        }

        for laser in &self.lasers {
            if laser.coupling.spins() != (ss, sd) {
                return Err(OracleError::InvalidParameter {
                    name: "laser coupling spins",
                    value: 0.0,
                });
            }
            let mut entries = Vec::new();
            let phase = C64::from_polar(1.0, laser.phase);
            let eta = self.mode.map_or(0.0, |m| m.eta);
            for (m, big_m, omega) in laser.coupling.nonzero_pairs() {
                let i_s = ss.index_of(m)?;
                let i_d = ns + sd.index_of(big_m)?;
                let v = C64::i() * omega * phase;
                for n in 0..fd {
                    entries.push((self.full_index(i_d, n), self.full_index(i_s, n), v));
                    if eta != 0.0 {
                        let ie = C64::new(0.0, eta);
                        if n + 1 < fd {
                            entries.push((
                                self.full_index(i_d, n + 1),
                                self.full_index(i_s, n),
                                v * ie * ((n + 1) as f64).sqrt(),
                            ));
                        }
                        if n > 0 {
                            entries.push((
                                self.full_index(i_d, n - 1),
                                self.full_index(i_s, n),
                                v * ie * (n as f64).sqrt(),
                            ));
                        }
                    }
                }
            }
            h.push_hermitian_exp(-laser.detuning, entries);
        }
        Ok(h)
    }
}

fn push_block(
    entries: &mut Vec<(usize, usize, C64)>,
    block: &CMatrix,
    offset: usize,
    fock: usize,
    index: impl Fn(usize, usize) -> usize,
) {
    for r in 0..block.nrows() {
        for c in 0..block.ncols() {
            let v = block[(r, c)];
            if v.norm() > 0.0 {
                for n in 0..fock {
                    entries.push((index(offset + r, n), index(offset + c, n), v));
                }
            }
        }
    }
}

/// Lab-frame state at `t = 0` that coincides with the innermost dressed state
/// `|target⟩` of `cfg`: `U_{n1}(θ1)† U_{n2}(θ2)† |target⟩`.
pub fn dressed_state(cfg: &DressingConfig, target: HalfInt) -> Result<Vec<C64>, OracleError> {
    let spin = cfg.manifold.spin;
    let mut v = vec![C64::default(); spin.dim()];
    v[spin.index_of(target)?] = C64::new(1.0, 0.0);
    let mut psi = nalgebra::DVector::from_vec(v);
    if let Some(d2) = cfg.derived2 {
        let u2 = rotation_unitary(spin, d2.rotation_axis, d2.theta)?;
        psi = u2.adjoint() * psi;
    }
    let d1 = cfg.derived1;
    let u1 = rotation_unitary(spin, d1.rotation_axis, d1.theta)?;
    psi = u1.adjoint() * psi;
    Ok(psi.iter().copied().collect())
}
