use std::fmt;

use super::negation::Negation;
use super::text::{text_form, Tokens};
use super::tnorm::{ResiduatedTNorm, TNorm};
use crate::error::{Error, Result};
use crate::unit::{clamp01, UnitValue, ARITH_TOL};

/// Contrapositive symmetrisation of a mapping with respect to a strong
/// negation `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `max(f(x,y), f(N(y),N(x)))`
    U,
    /// `min(f(x,y), f(N(y),N(x)))`
    L,
    /// `min(f(x,y) ∨ N(x), f(N(y),N(x)) ∨ y)`
    M,
    /// `f(N(y),N(x))` when `y < N(x)`, else `f(x,y)`
    Lc,
}

impl Variant {
    fn as_str(&self) -> &'static str {
        match self {
            Variant::U => "u",
            Variant::L => "l",
            Variant::M => "m",
            Variant::Lc => "lc",
        }
    }

    pub fn all() -> [Variant; 4] {
        [Variant::U, Variant::L, Variant::M, Variant::Lc]
    }

    /// Applies the variant to an arbitrary binary mapping.
    pub fn apply<F: Fn(f64, f64) -> f64>(&self, f: F, n: &Negation, x: f64, y: f64) -> f64 {
        let (nx, ny) = (n.apply(x), n.apply(y));
        match self {
            Variant::U => f(x, y).max(f(ny, nx)),
            Variant::L => f(x, y).min(f(ny, nx)),
            Variant::M => (f(x, y).max(nx)).min(f(ny, nx).max(y)),
            Variant::Lc => {
                if y < nx - ARITH_TOL {
                    f(ny, nx)
                } else {
                    f(x, y)
                }
            }
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(Variant::U),
            "l" => Ok(Variant::L),
            "m" => Ok(Variant::M),
            "lc" => Ok(Variant::Lc),
            other => Err(Error::Parse(format!("unknown modification variant '{other}'"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fuzzy implication.
#[derive(Debug, Clone, PartialEq)]
pub enum Implication {
    /// `1` if `x ≤ y`, else `y`.
    Goedel,
    /// `1` if `x ≤ y`, else `y/x`.
    Goguen,
    /// `min(1, 1 − x + y)`.
    Lukasiewicz,
    /// The residuum of a left-continuous t-norm.
    Residuum(ResiduatedTNorm),
    Modified {
        base: Box<Implication>,
        variant: Variant,
        negation: Negation,
    },
}

impl Implication {
    pub fn residuum_of(t: TNorm) -> Result<Self> {
        Ok(Implication::Residuum(ResiduatedTNorm::new(t)?))
    }

    pub fn modified(base: Implication, variant: Variant, negation: Negation) -> Self {
        Implication::Modified {
            base: Box::new(base),
            variant,
            negation,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Implication::Goedel => {
                if x <= y {
                    1.0
                } else {
                    y
                }
            }
            Implication::Goguen => {
                if x <= y {
                    1.0
                } else {
                    y / x
                }
            }
            Implication::Lukasiewicz => (1.0 - x + y).min(1.0),
            Implication::Residuum(t) => t.residuum(x, y),
            Implication::Modified {
                base,
                variant,
                negation,
            } => clamp01(variant.apply(|a, b| base.eval(a, b), negation, x, y)),
        }
    }

    /// The t-norm whose residuum this implication is, if any.
    pub fn residuated_tnorm(&self) -> Option<ResiduatedTNorm> {
        let t = match self {
            Implication::Goedel => TNorm::Minimum,
            Implication::Goguen => TNorm::Product,
            Implication::Lukasiewicz => TNorm::Lukasiewicz,
            Implication::Residuum(t) => return Some(*t),
            Implication::Modified { .. } => return None,
        };
        ResiduatedTNorm::new(t).ok()
    }

    pub(crate) fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        match t.next("implication")? {
            "goedel" | "godel" => Ok(Implication::Goedel),
            "goguen" => Ok(Implication::Goguen),
            "lukasiewicz" => Ok(Implication::Lukasiewicz),
            "residuum" => Implication::residuum_of(TNorm::parse_tokens(t)?),
            "modified" => {
                let variant = t.next("modification variant")?.parse()?;
                let negation = Negation::parse_tokens(t)?;
                let base = Implication::parse_tokens(t)?;
                Ok(Implication::modified(base, variant, negation))
            }
            other => Err(t.unknown(other, "implication")),
        }
    }

    pub(crate) fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Implication::Goedel => write!(f, "goedel"),
            Implication::Goguen => write!(f, "goguen"),
            Implication::Lukasiewicz => write!(f, "lukasiewicz"),
            Implication::Residuum(t) => write!(f, "residuum:{t}"),
            Implication::Modified {
                base,
                variant,
                negation,
            } => write!(f, "modified:{variant}:{negation}:{base}"),
        }
    }
}

text_form!(Implication);

/// Evaluates `I(x, y)`.
pub fn implication(i: &Implication, x: UnitValue, y: UnitValue) -> UnitValue {
    UnitValue::saturating(i.eval(x.get(), y.get()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn named_values() {
        assert_eq!(Implication::Goedel.eval(0.7, 0.9), 1.0);
        assert_eq!(Implication::Goedel.eval(0.7, 0.2), 0.2);
        assert!((Implication::Goguen.eval(0.6, 0.3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lc_goguen_takes_contrapositive_branch() {
        let i = Implication::modified(Implication::Goguen, Variant::Lc, Negation::Standard);
        // y = 0.1 < N(0.8) = 0.2, so the value is I_GG(0.9, 0.2)
        assert!((i.eval(0.8, 0.1) - 2.0 / 9.0).abs() < 1e-12);
        assert!((i.eval(0.8, 0.5) - 0.625).abs() < 1e-12);
        assert!((i.eval(0.5, 0.4) - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn u_of_lukasiewicz_is_lukasiewicz() {
        let i = Implication::modified(Implication::Lukasiewicz, Variant::U, Negation::Standard);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
            assert!((i.eval(x, y) - Implication::Lukasiewicz.eval(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn residua_reproduce_named_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pairs = [
            (TNorm::Minimum, Implication::Goedel),
            (TNorm::Product, Implication::Goguen),
            (TNorm::Lukasiewicz, Implication::Lukasiewicz),
        ];
        for (t, named) in pairs {
            let r = Implication::residuum_of(t).unwrap();
            for _ in 0..10_000 {
                let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
                assert!((r.eval(x, y) - named.eval(x, y)).abs() <= 1e-12, "{t} at ({x},{y})");
            }
        }
    }

    #[test]
    fn bisection_agrees_with_closed_forms() {
        use crate::algebra::tnorm::residuum_by_bisection;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            let r = ResiduatedTNorm::new(t).unwrap();
            for _ in 0..2000 {
                let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
                let diff = (residuum_by_bisection(&t, x, y) - r.residuum(x, y)).abs();
                assert!(diff <= 1e-8, "{t} at ({x},{y}): {diff}");
            }
        }
    }

    #[test]
    fn nilpotent_minimum_residuum_closed_form() {
        let r = ResiduatedTNorm::new(TNorm::NilpotentMinimum).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2000 {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            let closed = if x <= y { 1.0 } else { (1.0 - x).max(y) };
            assert!((r.residuum(x, y) - closed).abs() < 1e-8, "({x},{y})");
        }
    }

    #[test]
    fn text_forms() {
        for s in [
            "goguen",
            "residuum:nilpotent-minimum",
            "residuum:strict:power:2",
            "modified:lc:standard:goguen",
            "modified:u:conjugate:power:2:residuum:product",
        ] {
            let i: Implication = s.parse().unwrap();
            assert_eq!(i.to_string(), s);
        }
        assert!("residuum:drastic".parse::<Implication>().is_err());
        assert_eq!(
            "residuum:lukasiewicz".parse::<Implication>().unwrap().residuated_tnorm().unwrap().tnorm(),
            TNorm::Lukasiewicz
        );
    }
}
