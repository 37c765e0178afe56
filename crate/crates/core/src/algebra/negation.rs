use std::fmt;

use super::generator::Generator;
use super::text::{text_form, Tokens};
use crate::error::Result;
use crate::unit::clamp01;

/// A fuzzy negation: non-increasing, `N(0) = 1`, `N(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Negation {
    /// `N(x) = 1 − x`.
    #[default]
    Standard,
    /// `N(x) = t⁻¹(1 − t(x))`; strong for every generator.
    Conjugate(Generator),
    /// `N(0) = 1`, `N(x) = 0` otherwise. Not strong.
    Goedel,
}

impl Negation {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Negation::Standard => 1.0 - x,
            Negation::Conjugate(g) => clamp01(g.inverse(1.0 - g.forward(x))),
            Negation::Goedel => {
                if x == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether `N(N(x)) = x` holds for this kind.
    pub fn is_strong(&self) -> bool {
        !matches!(self, Negation::Goedel)
    }

    pub(crate) fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        match t.next("negation")? {
            "standard" | "n0" => Ok(Negation::Standard),
            "conjugate" => Ok(Negation::Conjugate(Generator::parse_tokens(t)?)),
            "goedel" => Ok(Negation::Goedel),
            other => Err(t.unknown(other, "negation")),
        }
    }

    pub(crate) fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Negation::Standard => write!(f, "standard"),
            Negation::Conjugate(g) => {
                write!(f, "conjugate:")?;
                g.write_tokens(f)
            }
            Negation::Goedel => write!(f, "goedel"),
        }
    }
}

text_form!(Negation);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::grid;

    #[test]
    fn standard_values() {
        let n = Negation::Standard;
        assert_eq!(n.apply(0.0), 1.0);
        assert_eq!(n.apply(1.0), 0.0);
        assert!((n.apply(0.3) - 0.7).abs() < 1e-15);
        assert!((n.apply(n.apply(0.42)) - 0.42).abs() < 1e-15);
    }

    #[test]
    fn strong_kinds_are_involutive_and_antitone() {
        for n in [
            Negation::Standard,
            Negation::Conjugate(Generator::Power(2.0)),
            Negation::Conjugate(Generator::Exponential(3.0)),
        ] {
            assert!(n.is_strong());
            assert!((n.apply(0.0) - 1.0).abs() < 1e-12);
            assert!(n.apply(1.0).abs() < 1e-12);
            let g = grid(0.01).unwrap();
            for w in g.windows(2) {
                assert!(n.apply(w[1]) <= n.apply(w[0]) + 1e-15);
            }
            for &x in &g {
                assert!((n.apply(n.apply(x)) - x).abs() < 1e-9, "{n} at {x}");
            }
        }
    }

    #[test]
    fn goedel_is_not_involutive() {
        let n = Negation::Goedel;
        assert!(!n.is_strong());
        assert_eq!(n.apply(n.apply(0.5)), 1.0);
    }

    #[test]
    fn text_round_trip() {
        for s in ["standard", "conjugate:power:2", "goedel"] {
            assert_eq!(s.parse::<Negation>().unwrap().to_string(), s);
        }
    }
}
