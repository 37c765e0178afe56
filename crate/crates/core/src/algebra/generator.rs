use std::fmt;

use super::text::{text_form, Tokens};
use crate::error::{Error, Result};
use crate::unit::{clamp01, grid, CHECK_TOL};

/// An increasing bijection of `[0, 1]` together with its inverse.
///
/// Used to build strict and nilpotent t-norms by conjugation, conjugate
/// negations, and the φ-form restricted equivalence function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Identity,
    /// `x ↦ x^p`, `p > 0`.
    Power(f64),
    /// `x ↦ (e^{λx} − 1)/(e^λ − 1)`, `λ ≠ 0`.
    Exponential(f64),
}

impl Generator {
    pub fn power(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Generator::Power(p))
        } else {
            Err(Error::Validation(format!("power generator needs p > 0, got {p}")))
        }
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda != 0.0 && lambda.abs() <= 50.0 {
            Ok(Generator::Exponential(lambda))
        } else {
            Err(Error::Validation(format!(
                "exponential generator needs 0 < |λ| ≤ 50, got {lambda}"
            )))
        }
    }

    pub fn forward(&self, x: f64) -> f64 {
        match *self {
            Generator::Identity => x,
            Generator::Power(p) => clamp01(x.powf(p)),
            Generator::Exponential(l) => clamp01((l * x).exp_m1() / l.exp_m1()),
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            Generator::Identity => y,
            Generator::Power(p) => clamp01(y.powf(1.0 / p)),
            Generator::Exponential(l) => clamp01((y * l.exp_m1()).ln_1p() / l),
        }
    }

    pub fn description(&self) -> String {
        match *self {
            Generator::Identity => "t(x) = x".into(),
            Generator::Power(p) => format!("t(x) = x^{p}"),
            Generator::Exponential(l) => format!("t(x) = (exp({l}x) - 1)/(exp({l}) - 1)"),
        }
    }

    /// Checks the bijection invariants on a grid: fixed endpoints, strict
    /// increase, and `inverse(forward(x)) = x` within `1e-9`.
    pub fn validate(&self, step: f64) -> Result<()> {
        if self.forward(0.0).abs() > CHECK_TOL || (self.forward(1.0) - 1.0).abs() > CHECK_TOL {
            return Err(Error::Validation(format!("{self}: endpoints are not fixed")));
        }
        let pts = grid(step)?;
        for w in pts.windows(2) {
            if self.forward(w[1]) <= self.forward(w[0]) {
                return Err(Error::Validation(format!(
                    "{self}: not strictly increasing between {} and {}",
                    w[0], w[1]
                )));
            }
        }
        for &x in &pts {
            if (self.inverse(self.forward(x)) - x).abs() > CHECK_TOL {
                return Err(Error::Validation(format!("{self}: inverse fails at {x}")));
            }
        }
        Ok(())
    }

    pub(crate) fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        let tok = t.next("generator")?;
        match tok {
            "identity" | "id" => Ok(Generator::Identity),
            "power" => Generator::power(t.number("power exponent")?),
            "exp" => Generator::exponential(t.number("exponential rate")?),
            other => Err(t.unknown(other, "generator")),
        }
    }

    pub(crate) fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Identity => write!(f, "identity"),
            Generator::Power(p) => write!(f, "power:{p}"),
            Generator::Exponential(l) => write!(f, "exp:{l}"),
        }
    }
}

text_form!(Generator);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_bijections() {
        for g in [
            Generator::Identity,
            Generator::Power(2.0),
            Generator::Power(0.5),
            Generator::Exponential(1.5),
            Generator::Exponential(-2.0),
        ] {
            g.validate(0.01).unwrap();
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Generator::power(0.0).is_err());
        assert!(Generator::exponential(0.0).is_err());
        assert!("power:-1".parse::<Generator>().is_err());
        assert!("cubic".parse::<Generator>().is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!("power:2".parse::<Generator>().unwrap(), Generator::Power(2.0));
        assert_eq!(Generator::Exponential(1.5).to_string(), "exp:1.5");
    }
}
