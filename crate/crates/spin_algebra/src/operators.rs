use num_complex::Complex64 as C64;

use crate::{expm, CMatrix, HalfInt, SpinError};

/// Spin quantum number stored as `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinValue {
    pub two_s: u32,
}

impl SpinValue {
    pub const fn new(two_s: u32) -> Self {
        SpinValue { two_s }
    }

    pub const fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    pub const fn as_half_int(self) -> HalfInt {
        HalfInt::from_twice(self.two_s as i32)
    }

    /// Projections `+S, S-1, …, -S` in basis order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> + Clone {
        let two_s = self.two_s as i32;
        (0..=two_s).map(move |i| HalfInt::from_twice(two_s - 2 * i))
    }

    pub fn contains(self, m: HalfInt) -> bool {
        let t = m.twice();
        t.abs() <= self.two_s as i32 && (t - self.two_s as i32) % 2 == 0
    }

    pub fn index_of(self, m: HalfInt) -> Result<usize, SpinError> {
        if !self.contains(m) {
            return Err(SpinError::ProjectionOutOfRange {
                m,
                s: self.as_half_int(),
            });
        }
        Ok(((self.two_s as i32 - m.twice()) / 2) as usize)
    }

    pub fn projection_at(self, index: usize) -> HalfInt {
        HalfInt::from_twice(self.two_s as i32 - 2 * index as i32)
    }

    pub fn casimir(self) -> f64 {
        let s = self.s();
        s * (s + 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
    pub s_plus: CMatrix,
    pub s_minus: CMatrix,
}

impl SpinOperators {
    /// `n·S` for a (not necessarily unit) vector `n`.
    pub fn along(&self, n: [f64; 3]) -> CMatrix {
        &self.sx * C64::from(n[0]) + &self.sy * C64::from(n[1]) + &self.sz * C64::from(n[2])
    }
}

pub fn spin_operators(spin: SpinValue) -> SpinOperators {
    let d = spin.dim();
    let s = spin.s();
    let mut sz = CMatrix::zeros(d, d);
    let mut s_plus = CMatrix::zeros(d, d);
    for i in 0..d {
        let m = spin.projection_at(i).value();
        sz[(i, i)] = C64::from(m);
        if i > 0 {
            // <m+1| S+ |m> sits one row above the diagonal.
            s_plus[(i - 1, i)] = C64::from((s * (s + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let s_minus = s_plus.adjoint();
    let sx = (&s_plus + &s_minus) * C64::from(0.5);
    let sy = (&s_plus - &s_minus) * C64::new(0.0, -0.5);
    SpinOperators {
        sx,
        sy,
        sz,
        s_plus,
        s_minus,
    }
}

/// `exp(iθ n·S)` for a unit axis `n`.
pub fn rotation_unitary(spin: SpinValue, axis: [f64; 3], theta: f64) -> Result<CMatrix, SpinError> {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(SpinError::NonUnitAxis { norm });
    }
    let generator = spin_operators(spin).along(axis) * C64::new(0.0, theta);
    Ok(expm(&generator))
}
