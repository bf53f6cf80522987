//! Sparse time-dependent Hamiltonians evaluated in a diagonal rotating frame.
//!
//! `H(t) = diag(E) + Σ_j c_j(t) V_j`. The state is propagated in the frame
//! `ψ = e^{−iFt} φ`, where `F` is a diagonal list of frame frequencies, so
//! `i φ̇ = [e^{iFt} (Σ_j c_j V_j) e^{−iFt} + diag(E − F)] φ`.

use num_complex::Complex64 as C64;

/// Time dependence of one sparse term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tone {
    Const,
    /// `amp1 cos(ω1 t) − amp2 sin(ω1 t) cos(ω2 t)`
    RfDrive {
        amp1: f64,
        omega1: f64,
        amp2: f64,
        omega2: f64,
    },
    /// `e^{iωt}`
    Exp(f64),
}

impl Tone {
    #[inline]
    pub fn value(&self, t: f64) -> C64 {
        match *self {
            Tone::Const => C64::new(1.0, 0.0),
            Tone::RfDrive {
                amp1,
                omega1,
                amp2,
                omega2,
            } => {
                let (s1, c1) = (omega1 * t).sin_cos();
                let mut v = amp1 * c1;
                if amp2 != 0.0 {
                    v -= amp2 * s1 * (omega2 * t).cos();
                }
                C64::new(v, 0.0)
            }
            Tone::Exp(w) => C64::from_polar(1.0, w * t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseTerm {
    pub tone: Tone,
    /// `(row, col, value)` entries of `V_j`.
    pub entries: Vec<(usize, usize, C64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrivenHamiltonian {
    pub dim: usize,
    /// Static diagonal `E` (rad/s).
    pub diag: Vec<f64>,
    /// Frame frequencies `F` (rad/s).
    pub frame: Vec<f64>,
    /// Optional factorisation `F_a = Σ_b powers[a][b] · bases[b]` with integer
    /// powers, which lets the phases be built from a few complex exponentials.
    pub frame_factors: Option<FrameFactors>,
    pub terms: Vec<SparseTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameFactors {
    pub bases: Vec<f64>,
    pub powers: Vec<Vec<i32>>,
}

impl FrameFactors {
    pub fn frequencies(&self) -> Vec<f64> {
        self.powers
            .iter()
            .map(|p| p.iter().zip(&self.bases).map(|(k, b)| *k as f64 * b).sum())
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Recipe {
    One,
    Polar(f64),
    Square(usize),
    Conj(usize),
}

/// Distinct `e^{iωt}` needed per evaluation, sharing work between
/// frequencies that are negatives or doubles of each other.
#[derive(Default)]
struct Oscillators {
    freqs: Vec<f64>,
    recipes: Vec<Recipe>,
    values: Vec<C64>,
}

impl Oscillators {
    fn slot(&mut self, w: f64) -> usize {
        if let Some(k) = self.freqs.iter().position(|f| *f == w) {
            return k;
        }
        let recipe = if w == 0.0 {
            Recipe::One
        } else if let Some(k) = self.freqs.iter().position(|f| *f == -w) {
            Recipe::Conj(k)
        } else if let Some(k) = self.freqs.iter().position(|f| 2.0 * *f == w) {
            Recipe::Square(k)
        } else {
            Recipe::Polar(w)
        };
        self.freqs.push(w);
        self.recipes.push(recipe);
        self.values.push(C64::new(1.0, 0.0));
        self.freqs.len() - 1
    }

    fn evaluate(&mut self, t: f64) {
        for k in 0..self.recipes.len() {
            self.values[k] = match self.recipes[k] {
                Recipe::One => C64::new(1.0, 0.0),
                Recipe::Polar(w) => {
                    let (s, c) = (w * t).sin_cos();
                    C64::new(c, s)
                }
                Recipe::Square(j) => self.values[j] * self.values[j],
                Recipe::Conj(j) => self.values[j].conj(),
            };
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum TermSlots {
    Const,
    Rf {
        amp1: f64,
        amp2: f64,
        w1: usize,
        w2: usize,
    },
    Exp(usize),
}

struct PhaseTable {
    offsets: Vec<i32>,
    tables: Vec<Vec<C64>>,
}

impl PhaseTable {
    fn new(f: &FrameFactors) -> Self {
        let nb = f.bases.len();
        let mut offsets = vec![0; nb];
        let mut tables = Vec::with_capacity(nb);
        for (b, off) in offsets.iter_mut().enumerate() {
            let lo = f.powers.iter().map(|p| p[b]).min().unwrap_or(0).min(0);
            let hi = f.powers.iter().map(|p| p[b]).max().unwrap_or(0).max(0);
            *off = -lo;
            tables.push(vec![C64::new(1.0, 0.0); (hi - lo + 1) as usize]);
        }
        PhaseTable { offsets, tables }
    }

    fn fill_from(&mut self, f: &FrameFactors, base_phases: &[C64], out: &mut [C64]) {
        for (b, &z) in base_phases.iter().enumerate() {
            let off = self.offsets[b] as usize;
            let table = &mut self.tables[b];
            for k in off + 1..table.len() {
                table[k] = table[k - 1] * z;
            }
            let zc = z.conj();
            for k in (0..off).rev() {
                table[k] = table[k + 1] * zc;
            }
        }
        for (a, p) in out.iter_mut().enumerate() {
            let mut v = C64::new(1.0, 0.0);
            for (b, k) in f.powers[a].iter().enumerate() {
                if *k != 0 {
                    v *= self.tables[b][(k + self.offsets[b]) as usize];
                }
            }
            *p = v;
        }
    }
}

impl DrivenHamiltonian {
    pub fn new(dim: usize) -> Self {
        DrivenHamiltonian {
            dim,
            diag: vec![0.0; dim],
            frame: vec![0.0; dim],
            frame_factors: None,
            terms: Vec::new(),
        }
    }

    /// Adds `V e^{iωt} + V† e^{−iωt}`.
    pub fn push_hermitian_exp(&mut self, omega: f64, entries: Vec<(usize, usize, C64)>) {
        let adjoint = entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect();
        self.terms.push(SparseTerm {
            tone: Tone::Exp(omega),
            entries,
        });
        self.terms.push(SparseTerm {
            tone: Tone::Exp(-omega),
            entries: adjoint,
        });
    }

    /// Dense lab-frame `H(t)`.
    pub fn matrix(&self, t: f64) -> nalgebra::DMatrix<C64> {
        let mut h = nalgebra::DMatrix::<C64>::zeros(self.dim, self.dim);
        for (i, e) in self.diag.iter().enumerate() {
            h[(i, i)] += C64::new(*e, 0.0);
        }
        for term in &self.terms {
            let c = term.tone.value(t);
            for &(r, col, v) in &term.entries {
                h[(r, col)] += c * v;
            }
        }
        h
    }

    pub fn has_frame(&self) -> bool {
        self.frame.iter().any(|f| *f != 0.0)
    }

    /// Frame phases `e^{iF_a t}`.
    pub fn frame_phases(&self, t: f64, out: &mut [C64]) {
        for (p, f) in out.iter_mut().zip(&self.frame) {
            *p = C64::from_polar(1.0, f * t);
        }
    }

    /// Maps a lab state to the frame at time `t` (`φ = e^{iFt} ψ`).
    pub fn to_frame(&self, t: f64, psi: &[C64]) -> Vec<C64> {
        psi.iter()
            .zip(&self.frame)
            .map(|(x, f)| x * C64::from_polar(1.0, f * t))
            .collect()
    }

    /// Maps a frame state back to the lab (`ψ = e^{−iFt} φ`).
    pub fn to_lab(&self, t: f64, phi: &[C64]) -> Vec<C64> {
        phi.iter()
            .zip(&self.frame)
            .map(|(x, f)| x * C64::from_polar(1.0, -f * t))
            .collect()
    }

    /// Right-hand side `φ̇ = −i H'(t) φ` in the rotating frame.
    pub fn rhs(&self) -> impl FnMut(f64, &[C64], &mut [C64]) + '_ {
        let n = self.dim;
        let framed = self.has_frame();
        let mut phase = vec![C64::new(1.0, 0.0); n];
        let mut lab = vec![C64::default(); n];
        let mut acc = vec![C64::default(); n];
        let detuned: Vec<f64> = self
            .diag
            .iter()
            .zip(&self.frame)
            .map(|(e, f)| e - f)
            .collect();
        let mut table = self.frame_factors.as_ref().map(PhaseTable::new);
        let mut osc = Oscillators::default();
        let bases: Vec<usize> = self.frame_factors.as_ref().map_or(Vec::new(), |f| {
            f.bases.iter().map(|b| osc.slot(*b)).collect()
        });
        let slots: Vec<TermSlots> = self
            .terms
            .iter()
            .map(|term| match term.tone {
                Tone::Const => TermSlots::Const,
                Tone::RfDrive {
                    amp1,
                    omega1,
                    amp2,
                    omega2,
                } => TermSlots::Rf {
                    amp1,
                    amp2,
                    w1: osc.slot(omega1),
                    w2: osc.slot(omega2),
                },
                Tone::Exp(w) => TermSlots::Exp(osc.slot(w)),
            })
            .collect();
        let mut base_phases = vec![C64::new(1.0, 0.0); bases.len()];
        move |t, phi, out| {
            osc.evaluate(t);
            if framed {
                match (&mut table, &self.frame_factors) {
                    (Some(tab), Some(f)) => {
                        for (p, b) in base_phases.iter_mut().zip(&bases) {
                            *p = osc.values[*b];
                        }
                        tab.fill_from(f, &base_phases, &mut phase)
                    }
                    _ => self.frame_phases(t, &mut phase),
                }
                for a in 0..n {
                    lab[a] = phase[a].conj() * phi[a];
                }
            } else {
                lab.copy_from_slice(phi);
            }
            acc.iter_mut().for_each(|x| *x = C64::default());
            for (term, slot) in self.terms.iter().zip(&slots) {
                let c = match *slot {
                    TermSlots::Const => C64::new(1.0, 0.0),
                    TermSlots::Rf { amp1, amp2, w1, w2 } => {
                        let z1 = osc.values[w1];
                        let mut v = amp1 * z1.re;
                        if amp2 != 0.0 {
                            v -= amp2 * z1.im * osc.values[w2].re;
                        }
                        C64::new(v, 0.0)
                    }
                    TermSlots::Exp(k) => osc.values[k],
                };
                if c == C64::default() {
                    continue;
                }
                for &(r, col, v) in &term.entries {
                    acc[r] += c * v * lab[col];
                }
            }
            for a in 0..n {
                let h = if framed { phase[a] * acc[a] } else { acc[a] } + phi[a] * detuned[a];
                out[a] = C64::new(h.im, -h.re);
            }
        }
    }
}
