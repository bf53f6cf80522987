use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use spin_algebra::{HalfInt, SpinValue};

use crate::CombError;

/// Path `(m, M, m̄, M̄, m̄̄, M̄̄)` through the comb. Ordering is lexicographic
/// in that field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionIndex {
    pub m: HalfInt,
    pub big_m: HalfInt,
    pub m_bar: HalfInt,
    pub big_m_bar: HalfInt,
    pub m_bbar: HalfInt,
    pub big_m_bbar: HalfInt,
}

fn check(spin: SpinValue, value: HalfInt) -> Result<(), CombError> {
    if spin.contains(value) {
        Ok(())
    } else {
        Err(CombError::OutOfRange {
            value,
            spin: spin.as_half_int(),
        })
    }
}

pub(crate) fn allowed(m: HalfInt, big_m: HalfInt) -> bool {
    (big_m.twice() - m.twice()).abs() <= 4
}

impl TransitionIndex {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        spins: (SpinValue, SpinValue),
        m: HalfInt,
        big_m: HalfInt,
        m_bar: HalfInt,
        big_m_bar: HalfInt,
        m_bbar: HalfInt,
        big_m_bbar: HalfInt,
    ) -> Result<Self, CombError> {
        for v in [m, m_bar, m_bbar] {
            check(spins.0, v)?;
        }
        for v in [big_m, big_m_bar, big_m_bbar] {
            check(spins.1, v)?;
        }
        if !allowed(m, big_m) {
            return Err(CombError::SelectionRule { m, big_m });
        }
        Ok(TransitionIndex {
            m,
            big_m,
            m_bar,
            big_m_bar,
            m_bbar,
            big_m_bbar,
        })
    }

    /// Single-layer index: `m̄̄ = m̄`, `M̄̄ = M̄`.
    pub fn single(
        spins: (SpinValue, SpinValue),
        m: HalfInt,
        big_m: HalfInt,
        m_bar: HalfInt,
        big_m_bar: HalfInt,
    ) -> Result<Self, CombError> {
        Self::new(spins, m, big_m, m_bar, big_m_bar, m_bar, big_m_bar)
    }

    /// Convenience constructor from plain numbers.
    pub fn from_f64(spins: (SpinValue, SpinValue), q: [f64; 6]) -> Result<Self, CombError> {
        let h = |x: f64| HalfInt::new(x).map_err(|_| CombError::NotHalfInteger(x));
        Self::new(
            spins,
            h(q[0])?,
            h(q[1])?,
            h(q[2])?,
            h(q[3])?,
            h(q[4])?,
            h(q[5])?,
        )
    }

    pub fn as_f64(&self) -> [f64; 6] {
        [
            self.m,
            self.big_m,
            self.m_bar,
            self.big_m_bar,
            self.m_bbar,
            self.big_m_bbar,
        ]
        .map(HalfInt::value)
    }
}

/// Bare optical couplings `Ω_mM`. Pairs with `|M − m| > 2` are always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BareCoupling {
    spins: (SpinValue, SpinValue),
    entries: BTreeMap<(HalfInt, HalfInt), C64>,
}

impl BareCoupling {
    /// Every allowed pair set to 1.
    pub fn normalized(spins: (SpinValue, SpinValue)) -> Self {
        Self::uniform(spins, C64::new(1.0, 0.0))
    }

    pub fn uniform(spins: (SpinValue, SpinValue), value: C64) -> Self {
        let mut entries = BTreeMap::new();
        for m in spins.0.projections() {
            for big_m in spins.1.projections() {
                if allowed(m, big_m) {
                    entries.insert((m, big_m), value);
                }
            }
        }
        BareCoupling { spins, entries }
    }

    /// All couplings zero.
    pub fn empty(spins: (SpinValue, SpinValue)) -> Self {
        Self::uniform(spins, C64::new(0.0, 0.0))
    }

    pub fn spins(&self) -> (SpinValue, SpinValue) {
        self.spins
    }

    pub fn set(&mut self, m: HalfInt, big_m: HalfInt, value: C64) -> Result<(), CombError> {
        check(self.spins.0, m)?;
        check(self.spins.1, big_m)?;
        if !allowed(m, big_m) {
            return Err(CombError::SelectionRule { m, big_m });
        }
        self.entries.insert((m, big_m), value);
        Ok(())
    }

    pub fn get(&self, m: HalfInt, big_m: HalfInt) -> C64 {
        self.entries.get(&(m, big_m)).copied().unwrap_or_default()
    }

    /// Allowed `(m, M)` pairs in descending order of both projections.
    pub fn allowed_pairs(&self) -> Vec<(HalfInt, HalfInt)> {
        let mut pairs: Vec<_> = self.entries.keys().copied().collect();
        pairs.sort_by(|a, b| b.cmp(a));
        pairs
    }

    /// Pairs with a nonzero coupling, same ordering as [`Self::allowed_pairs`].
    pub fn nonzero_pairs(&self) -> Vec<(HalfInt, HalfInt, C64)> {
        self.allowed_pairs()
            .into_iter()
            .map(|(m, bm)| (m, bm, self.get(m, bm)))
            .filter(|(_, _, v)| v.norm() > 0.0)
            .collect()
    }
}

/// Optional constraint on each of the six projections.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IndexFilter {
    pub m: Option<HalfInt>,
    pub big_m: Option<HalfInt>,
    pub m_bar: Option<HalfInt>,
    pub big_m_bar: Option<HalfInt>,
    pub m_bbar: Option<HalfInt>,
    pub big_m_bbar: Option<HalfInt>,
}

impl IndexFilter {
    pub fn accepts(&self, idx: &TransitionIndex) -> bool {
        let ok = |f: Option<HalfInt>, v: HalfInt| f.is_none_or(|x| x == v);
        ok(self.m, idx.m)
            && ok(self.big_m, idx.big_m)
            && ok(self.m_bar, idx.m_bar)
            && ok(self.big_m_bar, idx.big_m_bar)
            && ok(self.m_bbar, idx.m_bbar)
            && ok(self.big_m_bbar, idx.big_m_bbar)
    }
}
