//! Scalar connectives on `[0, 1]` and their property checkers.

pub mod aggregation;
pub mod generator;
pub mod implication;
pub mod negation;
pub mod property;
pub(crate) mod text;
pub mod tnorm;

pub use aggregation::{Aggregation, AggregationSpec};
pub use generator::Generator;
pub use implication::{implication, Implication, Variant};
pub use negation::Negation;
pub use property::{check_property, violation_at, Mapping, Property, PropertyReport, Subject};
pub use tnorm::{residuum, residuum_by_bisection, tnorm, Family, ResiduatedTNorm, TNorm};

use crate::unit::UnitValue;

/// Evaluates `N(x)`.
pub fn negate(n: &Negation, x: UnitValue) -> UnitValue {
    UnitValue::saturating(n.apply(x.get()))
}
