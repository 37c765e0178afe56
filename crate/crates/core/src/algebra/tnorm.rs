use std::fmt;

use super::generator::Generator;
use super::text::{text_form, Tokens};
use crate::error::{Error, Result};
use crate::unit::{clamp01, UnitValue, ARITH_TOL};

/// Iterations of the residuum bisection fallback.
pub const BISECTION_ITERATIONS: usize = 60;

/// A triangular norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TNorm {
    Minimum,
    Product,
    Lukasiewicz,
    Drastic,
    /// `min(x, y)` when `x + y > 1`, else `0`. Left continuous.
    NilpotentMinimum,
    /// `min(x, y)` when `x + y ≥ 1`, else `0`. Closed boundary, so not left
    /// continuous and without residuum.
    NilpotentMinimumClosed,
    /// `t⁻¹(t(x)·t(y))`.
    Strict(Generator),
    /// `t⁻¹(max(t(x) + t(y) − 1, 0))`.
    Nilpotent(Generator),
}

/// Structural class of a t-norm, as used by the hierarchical methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Minimum,
    /// Continuous, strictly monotone; isomorphic to the product.
    Strict,
    /// Continuous, every interior point nilpotent; isomorphic to Łukasiewicz.
    Nilpotent,
    Other,
}

impl TNorm {
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        if x == 1.0 {
            return y;
        }
        if y == 1.0 {
            return x;
        }
        match self {
            TNorm::Minimum => x.min(y),
            TNorm::Product => x * y,
            TNorm::Lukasiewicz => (x + y - 1.0).max(0.0),
            TNorm::Drastic => {
                if x == 1.0 {
                    y
                } else if y == 1.0 {
                    x
                } else {
                    0.0
                }
            }
            TNorm::NilpotentMinimum => {
                if x + y > 1.0 + ARITH_TOL {
                    x.min(y)
                } else {
                    0.0
                }
            }
            TNorm::NilpotentMinimumClosed => {
                if x + y >= 1.0 - ARITH_TOL {
                    x.min(y)
                } else {
                    0.0
                }
            }
            TNorm::Strict(g) => g.inverse(g.forward(x) * g.forward(y)),
            TNorm::Nilpotent(g) => g.inverse((g.forward(x) + g.forward(y) - 1.0).max(0.0)),
        }
    }

    /// n-ary evaluation, folded left to right. The empty fold is the
    /// neutral element 1.
    pub fn fold(&self, xs: &[f64]) -> f64 {
        xs.iter().copied().reduce(|acc, x| self.apply(acc, x)).unwrap_or(1.0)
    }

    pub fn is_left_continuous(&self) -> bool {
        !matches!(self, TNorm::Drastic | TNorm::NilpotentMinimumClosed)
    }

    pub fn family(&self) -> Family {
        match self {
            TNorm::Minimum => Family::Minimum,
            TNorm::Product | TNorm::Strict(_) => Family::Strict,
            TNorm::Lukasiewicz | TNorm::Nilpotent(_) => Family::Nilpotent,
            TNorm::Drastic | TNorm::NilpotentMinimum | TNorm::NilpotentMinimumClosed => Family::Other,
        }
    }

    /// Continuous Archimedean kinds (strict or nilpotent).
    pub fn is_continuous_archimedean(&self) -> bool {
        matches!(self.family(), Family::Strict | Family::Nilpotent)
    }

    /// The additive/multiplicative generator for the Archimedean kinds.
    pub fn generator(&self) -> Option<Generator> {
        match self {
            TNorm::Product | TNorm::Lukasiewicz => Some(Generator::Identity),
            TNorm::Strict(g) | TNorm::Nilpotent(g) => Some(*g),
            _ => None,
        }
    }

    /// Whether `T(x, y)` vanishes. For the nilpotent family this is the
    /// zero-divisor test `t(x) + t(y) ≤ 1`.
    pub fn vanishes(&self, x: f64, y: f64) -> bool {
        match self {
            TNorm::Lukasiewicz => x + y <= 1.0 + ARITH_TOL,
            TNorm::Nilpotent(g) => g.forward(x) + g.forward(y) <= 1.0 + ARITH_TOL,
            _ => self.apply(x, y) <= ARITH_TOL,
        }
    }

    fn residuum_closed_form(&self, x: f64, y: f64) -> Option<f64> {
        let r = match self {
            TNorm::Minimum => {
                if x <= y {
                    1.0
                } else {
                    y
                }
            }
            TNorm::Product => {
                if x <= y {
                    1.0
                } else {
                    y / x
                }
            }
            TNorm::Lukasiewicz => (1.0 - x + y).min(1.0),
            TNorm::Strict(g) => {
                if x <= y {
                    1.0
                } else {
                    g.inverse(g.forward(y) / g.forward(x))
                }
            }
            TNorm::Nilpotent(g) => g.inverse((1.0 - g.forward(x) + g.forward(y)).min(1.0)),
            TNorm::Drastic | TNorm::NilpotentMinimum | TNorm::NilpotentMinimumClosed => return None,
        };
        Some(clamp01(r))
    }

    pub(crate) fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        match t.next("t-norm")? {
            "minimum" | "min" => Ok(TNorm::Minimum),
            "product" | "prod" => Ok(TNorm::Product),
            "lukasiewicz" => Ok(TNorm::Lukasiewicz),
            "drastic" => Ok(TNorm::Drastic),
            "nilpotent-minimum" => Ok(TNorm::NilpotentMinimum),
            "nilpotent-minimum-closed" => Ok(TNorm::NilpotentMinimumClosed),
            "strict" => Ok(TNorm::Strict(Generator::parse_tokens(t)?)),
            "nilpotent" => Ok(TNorm::Nilpotent(Generator::parse_tokens(t)?)),
            other => Err(t.unknown(other, "t-norm")),
        }
    }

    pub(crate) fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TNorm::Minimum => write!(f, "minimum"),
            TNorm::Product => write!(f, "product"),
            TNorm::Lukasiewicz => write!(f, "lukasiewicz"),
            TNorm::Drastic => write!(f, "drastic"),
            TNorm::NilpotentMinimum => write!(f, "nilpotent-minimum"),
            TNorm::NilpotentMinimumClosed => write!(f, "nilpotent-minimum-closed"),
            TNorm::Strict(g) => {
                write!(f, "strict:")?;
                g.write_tokens(f)
            }
            TNorm::Nilpotent(g) => {
                write!(f, "nilpotent:")?;
                g.write_tokens(f)
            }
        }
    }
}

text_form!(TNorm);

/// `sup{a ∈ [0,1] | T(x, a) ≤ y}` by bisection on `a`.
///
/// Returns the lower bracket, which lies inside the set whenever `T` is
/// left continuous.
pub fn residuum_by_bisection(t: &TNorm, x: f64, y: f64) -> f64 {
    if t.apply(x, 1.0) <= y {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if t.apply(x, mid) <= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A left-continuous t-norm, the only kind that has a residuated implication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResiduatedTNorm(TNorm);

impl ResiduatedTNorm {
    pub fn new(t: TNorm) -> Result<Self> {
        if t.is_left_continuous() {
            Ok(ResiduatedTNorm(t))
        } else {
            Err(Error::UnsupportedConnective(format!(
                "{t} is not left continuous and has no residuum"
            )))
        }
    }

    pub fn tnorm(&self) -> TNorm {
        self.0
    }

    pub fn apply(&self, x: f64, y: f64) -> f64 {
        self.0.apply(x, y)
    }

    pub fn fold(&self, xs: &[f64]) -> f64 {
        self.0.fold(xs)
    }

    /// The R-implication `I_T(x, y)`.
    pub fn residuum(&self, x: f64, y: f64) -> f64 {
        self.0
            .residuum_closed_form(x, y)
            .unwrap_or_else(|| residuum_by_bisection(&self.0, x, y))
    }
}

impl TryFrom<TNorm> for ResiduatedTNorm {
    type Error = Error;

    fn try_from(t: TNorm) -> Result<Self> {
        ResiduatedTNorm::new(t)
    }
}

impl fmt::Display for ResiduatedTNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Evaluates `T(x, y)`.
pub fn tnorm(t: &TNorm, x: UnitValue, y: UnitValue) -> UnitValue {
    UnitValue::saturating(t.apply(x.get(), y.get()))
}

/// Evaluates the residuum `I_T(x, y)`; fails for non-left-continuous `T`.
pub fn residuum(t: &TNorm, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
    let r = ResiduatedTNorm::new(*t)?;
    Ok(UnitValue::saturating(r.residuum(x.get(), y.get())))
}
