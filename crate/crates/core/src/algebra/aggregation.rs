use std::fmt;

use super::text::{text_form, Tokens};
use super::tnorm::TNorm;
use crate::error::{Error, Result};

/// An aggregation function: monotone, `M(0,…,0) = 0`, `M(1,…,1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aggregation {
    Minimum,
    Maximum,
    ArithmeticMean,
    Product,
    TNorm(TNorm),
}

impl Aggregation {
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        match self {
            Aggregation::Minimum => x.min(y),
            Aggregation::Maximum => x.max(y),
            Aggregation::ArithmeticMean => 0.5 * (x + y),
            Aggregation::Product => x * y,
            Aggregation::TNorm(t) => t.apply(x, y),
        }
    }

    /// n-ary form. The mean is the true n-ary mean; the other kinds are
    /// associative and fold left to right.
    pub fn apply_n(&self, xs: &[f64]) -> Result<f64> {
        if xs.is_empty() {
            return Err(Error::Arity("aggregation of zero arguments".into()));
        }
        Ok(match self {
            Aggregation::ArithmeticMean => xs.iter().sum::<f64>() / xs.len() as f64,
            _ => xs.iter().copied().reduce(|a, b| self.apply(a, b)).unwrap(),
        })
    }

    pub(crate) fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        match t.next("aggregation")? {
            "minimum" | "min" => Ok(Aggregation::Minimum),
            "maximum" | "max" => Ok(Aggregation::Maximum),
            "mean" | "arithmetic-mean" => Ok(Aggregation::ArithmeticMean),
            "product" | "prod" => Ok(Aggregation::Product),
            "tnorm" => Ok(Aggregation::TNorm(TNorm::parse_tokens(t)?)),
            other => Err(t.unknown(other, "aggregation")),
        }
    }

    pub(crate) fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregation::Minimum => write!(f, "minimum"),
            Aggregation::Maximum => write!(f, "maximum"),
            Aggregation::ArithmeticMean => write!(f, "mean"),
            Aggregation::Product => write!(f, "product"),
            Aggregation::TNorm(t) => write!(f, "tnorm:{t}"),
        }
    }
}

text_form!(Aggregation);

/// An aggregation with a declared arity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregationSpec {
    pub kind: Aggregation,
    pub arity: usize,
}

impl AggregationSpec {
    pub fn new(kind: Aggregation, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Arity("aggregation arity must be positive".into()));
        }
        Ok(AggregationSpec { kind, arity })
    }

    pub fn binary(kind: Aggregation) -> Self {
        AggregationSpec { kind, arity: 2 }
    }

    pub fn require_binary(&self) -> Result<Aggregation> {
        if self.arity == 2 {
            Ok(self.kind)
        } else {
            Err(Error::Arity(format!(
                "{} has arity {}, a binary aggregation is required",
                self.kind, self.arity
            )))
        }
    }

    pub fn apply(&self, xs: &[f64]) -> Result<f64> {
        if xs.len() != self.arity {
            return Err(Error::Arity(format!(
                "{} expects {} arguments, got {}",
                self.kind,
                self.arity,
                xs.len()
            )));
        }
        self.kind.apply_n(xs)
    }
}

impl From<Aggregation> for AggregationSpec {
    fn from(kind: Aggregation) -> Self {
        AggregationSpec::binary(kind)
    }
}
