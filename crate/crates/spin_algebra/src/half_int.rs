use std::fmt;

use crate::SpinError;

/// Half-integer quantity stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn new(value: f64) -> Result<Self, SpinError> {
        let twice = 2.0 * value;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 {
            return Err(SpinError::NotHalfInteger { value });
        }
        Ok(HalfInt(twice.round() as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn neg(self) -> Self {
        HalfInt(-self.0)
    }

    /// Difference as a plain number (may be half-integer).
    pub fn diff(self, other: HalfInt) -> f64 {
        f64::from(self.0 - other.0) / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
