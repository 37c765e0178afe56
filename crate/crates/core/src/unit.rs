//! The unit interval carrier and the sampling grids used by every checker.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for arithmetic identities.
pub const ARITH_TOL: f64 = 1e-12;

/// Absolute tolerance used by the grid property checkers.
pub const CHECK_TOL: f64 = 1e-9;

/// A real number in `[0, 1]`.
///
/// Construction accepts values that overshoot the interval by at most
/// [`ARITH_TOL`] and clamps them; anything further out (or NaN) is rejected.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || !(-ARITH_TOL..=1.0 + ARITH_TOL).contains(&value) {
            return Err(Error::OutOfRange(value));
        }
        Ok(UnitValue(value.clamp(0.0, 1.0)))
    }

    /// Clamps into the interval; for results of connectives that are
    /// mathematically in range but may drift by rounding.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            UnitValue(0.0)
        } else {
            UnitValue(value.clamp(0.0, 1.0))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn approx_eq(self, other: UnitValue, tol: f64) -> bool {
        (self.0 - other.0).abs() <= tol
    }
}

impl TryFrom<f64> for UnitValue {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        UnitValue::new(value)
    }
}

impl From<UnitValue> for f64 {
    fn from(v: UnitValue) -> f64 {
        v.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Clamp helper for internal arithmetic.
#[inline]
pub(crate) fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Sample points `{0, step, 2·step, …, 1}`.
///
/// When `1/step` is (numerically) an integer `n` the points are computed as
/// `i/n`, which keeps values such as `0.3` and `0.7` summing to exactly one.
pub fn grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidGridStep(step));
    }
    let ratio = 1.0 / step;
    let n = ratio.round();
    let mut pts = if (ratio - n).abs() < 1e-9 {
        let n = n as usize;
        (0..=n).map(|i| i as f64 / n as f64).collect::<Vec<_>>()
    } else {
        let mut v = Vec::new();
        let mut i = 0usize;
        loop {
            let x = i as f64 * step;
            if x >= 1.0 - 1e-12 {
                break;
            }
            v.push(x);
            i += 1;
        }
        v.push(1.0);
        v
    };
    pts.dedup();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(UnitValue::new(1.5).is_err());
        assert!(UnitValue::new(-0.1).is_err());
        assert!(UnitValue::new(f64::NAN).is_err());
        assert_eq!(UnitValue::new(1.0 + 1e-13).unwrap().get(), 1.0);
        assert_eq!(UnitValue::new(-1e-13).unwrap().get(), 0.0);
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(0.02).unwrap();
        assert_eq!(g.len(), 51);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        let g = grid(0.3).unwrap();
        assert_eq!(g, vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        assert!(grid(0.0).is_err());
        assert!(grid(0.7).is_err());
    }

    #[test]
    fn serde_validates() {
        let v: UnitValue = serde_json::from_str("0.25").unwrap();
        assert_eq!(v.get(), 0.25);
        assert!(serde_json::from_str::<UnitValue>("1.25").is_err());
    }
}
