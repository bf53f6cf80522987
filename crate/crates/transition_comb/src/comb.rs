use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use spin_algebra::{wigner_d, WignerDMatrix};

use crate::{
    BareCoupling, CombError, CombMode, CombSetup, IndexFilter, LaserDrive, TransitionIndex,
};

/// Lines closer than this (rad/s) count as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub index: TransitionIndex,
    /// Resonant laser detuning Δ_L, rad/s.
    pub detuning: f64,
    /// `Ω̄ / Ω_mM`.
    pub ratio: C64,
    /// `Ω̄` in rad/s.
    pub rabi: C64,
}

struct Rotations {
    d1s: WignerDMatrix,
    d2s: WignerDMatrix,
    d1d: WignerDMatrix,
    d2d: WignerDMatrix,
}

impl Rotations {
    fn new(setup: &CombSetup) -> Self {
        Rotations {
            d1s: wigner_d(setup.s.spin, setup.s.angles.theta1),
            d2s: wigner_d(setup.s.spin, setup.s.angles.theta2),
            d1d: wigner_d(setup.d.spin, setup.d.angles.theta1),
            d2d: wigner_d(setup.d.spin, setup.d.angles.theta2),
        }
    }

    fn ratio(&self, idx: &TransitionIndex, setup: &CombSetup) -> C64 {
        let magnitude = self.d1d.get(idx.big_m, idx.big_m_bar)
            * self.d2d.get(idx.big_m_bar, idx.big_m_bbar)
            * self.d1s.get(idx.m_bar, idx.m)
            * self.d2s.get(idx.m_bbar, idx.m_bar);
        let phase = -setup.d.angles.alpha * idx.big_m_bbar.diff(idx.big_m)
            - FRAC_PI_2 * idx.big_m_bbar.diff(idx.big_m_bar)
            + setup.s.angles.alpha * idx.m_bbar.diff(idx.m)
            + FRAC_PI_2 * idx.m_bbar.diff(idx.m_bar);
        C64::from_polar(magnitude, phase)
    }
}

/// `Ω̄ / Ω_mM` for one path.
pub fn rabi_ratio(index: &TransitionIndex, setup: &CombSetup) -> C64 {
    Rotations::new(setup).ratio(index, setup)
}

pub fn effective_rabi(
    index: &TransitionIndex,
    bare: &BareCoupling,
    setup: &CombSetup,
) -> Result<C64, CombError> {
    let spins = setup.spins();
    let checked = TransitionIndex::new(
        spins,
        index.m,
        index.big_m,
        index.m_bar,
        index.big_m_bar,
        index.m_bbar,
        index.big_m_bbar,
    )?;
    Ok(bare.get(checked.m, checked.big_m) * rabi_ratio(&checked, setup))
}

/// Residual detuning of the path at laser detuning `laser`.
pub fn effective_detuning(index: &TransitionIndex, laser: &LaserDrive, setup: &CombSetup) -> f64 {
    -laser.detuning + resonance_detuning(index, setup)
}

/// Laser detuning at which the path is resonant.
pub fn resonance_detuning(index: &TransitionIndex, setup: &CombSetup) -> f64 {
    let (s, d) = (&setup.s, &setup.d);
    index.big_m_bbar.value() * d.innermost_splitting()
        + index.big_m_bar.value() * d.freqs.omega2
        + index.big_m.value() * d.freqs.omega1
        - index.m_bbar.value() * s.innermost_splitting()
        - index.m_bar.value() * s.freqs.omega2
        - index.m.value() * s.freqs.omega1
        + setup.carrier_offset
}

fn sort_lines(lines: &mut [SpectralLine]) {
    lines.sort_by(|a, b| {
        a.detuning
            .total_cmp(&b.detuning)
            .then(a.index.cmp(&b.index))
    });
}

/// Every path allowed by the bare selection rule, sorted by detuning with
/// ties broken by index order.
pub fn enumerate_comb(
    setup: &CombSetup,
    bare: &BareCoupling,
    mode: CombMode,
    filter: &IndexFilter,
) -> Result<Vec<SpectralLine>, CombError> {
    let setup = setup.for_mode(mode)?;
    let rot = Rotations::new(&setup);
    let (ss, sd) = setup.spins();
    let mut lines = Vec::new();
    for (m, big_m) in bare.allowed_pairs() {
        let omega = bare.get(m, big_m);
        for m_bar in ss.projections() {
            for big_m_bar in sd.projections() {
                let inner: Vec<_> = match mode {
                    CombMode::Single => vec![(m_bar, big_m_bar)],
                    CombMode::Double => ss
                        .projections()
                        .flat_map(|a| sd.projections().map(move |b| (a, b)))
                        .collect(),
                };
                for (m_bbar, big_m_bbar) in inner {
                    let index = TransitionIndex {
                        m,
                        big_m,
                        m_bar,
                        big_m_bar,
                        m_bbar,
                        big_m_bbar,
                    };
                    if !filter.accepts(&index) {
                        continue;
                    }
                    let ratio = rot.ratio(&index, &setup);
                    lines.push(SpectralLine {
                        index,
                        detuning: resonance_detuning(&index, &setup),
                        ratio,
                        rabi: omega * ratio,
                    });
                }
            }
        }
    }
    sort_lines(&mut lines);
    Ok(lines)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborReport {
    pub nearest_gap: f64,
    pub nearest: TransitionIndex,
    /// Other lines within [`DEGENERACY_TOLERANCE`] of the target.
    pub degenerate: Vec<TransitionIndex>,
    /// Up to four closest other lines with their signed offsets.
    pub crowding: Vec<(TransitionIndex, f64)>,
}

impl NeighborReport {
    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }
}

/// Distance from `around` to the closest other line of a detuning-sorted list.
pub fn neighbor_gaps(
    lines: &[SpectralLine],
    around: &TransitionIndex,
) -> Result<NeighborReport, CombError> {
    if lines.len() < 2 {
        return Err(CombError::InsufficientLines { got: lines.len() });
    }
    let pos = lines
        .iter()
        .position(|l| l.index == *around)
        .ok_or_else(|| CombError::MissingLine(Box::new(*around)))?;
    let center = lines[pos].detuning;
    let (mut left, mut right) = (pos, pos + 1);
    let mut crowding = Vec::new();
    let mut degenerate = Vec::new();
    while left > 0 || right < lines.len() {
        let gap_l = if left > 0 {
            center - lines[left - 1].detuning
        } else {
            f64::INFINITY
        };
        let gap_r = if right < lines.len() {
            lines[right].detuning - center
        } else {
            f64::INFINITY
        };
        let (line, gap) = if gap_l <= gap_r {
            left -= 1;
            (&lines[left], -gap_l)
        } else {
            right += 1;
            (&lines[right - 1], gap_r)
        };
        if gap.abs() <= DEGENERACY_TOLERANCE {
            degenerate.push(line.index);
        } else if crowding.len() >= 4 {
            break;
        }
        if crowding.len() < 4 {
            crowding.push((line.index, gap));
        }
    }
    let (nearest, gap) = crowding[0];
    Ok(NeighborReport {
        nearest_gap: gap.abs(),
        nearest,
        degenerate,
        crowding,
    })
}

/// Co-resonant paths combined into one entry with summed amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedLine {
    pub detuning: f64,
    pub rabi: C64,
    pub members: Vec<TransitionIndex>,
}

pub fn merge_degenerate(lines: &[SpectralLine], tolerance: f64) -> Vec<MergedLine> {
    let mut merged: Vec<MergedLine> = Vec::new();
    for line in lines {
        match merged.last_mut() {
            Some(last) if (line.detuning - last.detuning).abs() <= tolerance => {
                last.rabi += line.rabi;
                last.members.push(line.index);
            }
            _ => merged.push(MergedLine {
                detuning: line.detuning,
                rabi: line.rabi,
                members: vec![line.index],
            }),
        }
    }
    merged
}
