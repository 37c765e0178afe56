//! Grid checkers for the algebraic properties of connectives and REFs.
//!
//! Every property is expressed as a violation magnitude over a tuple of grid
//! points. A tuple violates the property when its magnitude exceeds the
//! tolerance; the report carries the first violating tuple in lexicographic
//! order, and [`violation_at`] re-evaluates any tuple.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::aggregation::AggregationSpec;
use super::implication::Implication;
use super::negation::Negation;
use super::tnorm::TNorm;
use crate::equivalence::RefSpec;
use crate::error::{Error, Result};
use crate::unit::{grid, UnitValue, CHECK_TOL};

/// Step used by the left-continuity probe.
pub const LEFT_PROBE_STEP: f64 = 1e-10;
/// Largest jump tolerated by the left-continuity probe.
pub const LEFT_PROBE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Property {
    I1,
    I2,
    /// `I(0,0) = I(0,1) = 1, I(1,0) = 0` for implications,
    /// `M(0,0) = 0, M(1,1) = 1` for aggregations.
    Boundary,
    IP,
    OP,
    LOP,
    NP,
    EP,
    CC,
    CP,
    Ref1,
    Ref2,
    Ref3,
    Ref4,
    Ref5,
    Commutative,
    Associative,
    Monotone,
    OneStrict,
    Neutral1,
    ZeroDivisorFree,
    Annihilator(f64),
    LeftContinuity,
}

impl Property {
    pub const REF_AXIOMS: [Property; 5] = [
        Property::Ref1,
        Property::Ref2,
        Property::Ref3,
        Property::Ref4,
        Property::Ref5,
    ];

    /// Number of grid coordinates the property quantifies over.
    pub fn arity(&self) -> usize {
        use Property::*;
        match self {
            IP | NP | Neutral1 | Annihilator(_) => 1,
            I1 | I2 | EP | Ref5 | Associative | Monotone => 3,
            _ => 2,
        }
    }

    pub fn needs_negation(&self) -> bool {
        matches!(self, Property::CP | Property::Ref4)
    }

    fn tolerance(&self) -> f64 {
        match self {
            Property::LeftContinuity => LEFT_PROBE_TOL,
            _ => CHECK_TOL,
        }
    }

    fn applies_to(&self, kind: SubjectKind) -> bool {
        use Property::*;
        use SubjectKind as K;
        match self {
            Commutative | Associative | Monotone => true,
            Boundary => kind != K::Ref,
            OneStrict | Neutral1 | ZeroDivisorFree | Annihilator(_) => {
                matches!(kind, K::TNorm | K::Aggregation | K::Mapping)
            }
            LeftContinuity => matches!(kind, K::TNorm | K::Mapping),
            I1 | I2 | IP | OP | LOP | NP | EP | CC | CP => matches!(kind, K::Implication | K::Mapping),
            Ref1 | Ref2 | Ref3 | Ref4 | Ref5 => matches!(kind, K::Ref | K::Mapping),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        use Property::*;
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "i1" => I1,
            "i2" => I2,
            "i3" | "boundary" => Boundary,
            "ip" => IP,
            "op" => OP,
            "lop" => LOP,
            "np" => NP,
            "ep" => EP,
            "cc" => CC,
            "cp" => CP,
            "ref1" => Ref1,
            "ref2" => Ref2,
            "ref3" => Ref3,
            "ref4" => Ref4,
            "ref5" => Ref5,
            "commutative" => Commutative,
            "associative" => Associative,
            "monotone" => Monotone,
            "one-strict" => OneStrict,
            "neutral-1" => Neutral1,
            "zero-divisor-free" => ZeroDivisorFree,
            "left-continuity" => LeftContinuity,
            other => match other.strip_prefix("annihilator:") {
                Some(a) => Annihilator(
                    UnitValue::new(a.parse().map_err(|_| Error::Parse(format!("bad annihilator '{a}'")))?)?
                        .get(),
                ),
                None => return Err(Error::Parse(format!("unknown property '{s}'"))),
            },
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Property::*;
        let s = match self {
            I1 => "I1",
            I2 => "I2",
            Boundary => "boundary",
            IP => "IP",
            OP => "OP",
            LOP => "LOP",
            NP => "NP",
            EP => "EP",
            CC => "CC",
            CP => "CP(N)",
            Ref1 => "REF1",
            Ref2 => "REF2",
            Ref3 => "REF3",
            Ref4 => "REF4",
            Ref5 => "REF5",
            Commutative => "commutative",
            Associative => "associative",
            Monotone => "monotone",
            OneStrict => "one-strict",
            Neutral1 => "neutral-1",
            ZeroDivisorFree => "zero-divisor-free",
            Annihilator(a) => return write!(f, "annihilator({a})"),
            LeftContinuity => "left-continuity",
        };
        f.write_str(s)
    }
}

impl Serialize for Property {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A binary mapping given only by its values, e.g. the result of a
/// decomposition.
#[derive(Clone)]
pub struct Mapping {
    pub label: String,
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl Mapping {
    pub fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Mapping {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mapping({})", self.label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SubjectKind {
    TNorm,
    Implication,
    Aggregation,
    Ref,
    Mapping,
}

/// Anything a property can be checked on.
#[derive(Debug, Clone)]
pub enum Subject {
    TNorm(TNorm),
    Implication(Implication),
    Aggregation(AggregationSpec),
    Ref(RefSpec),
    Mapping(Mapping),
}

impl Subject {
    fn kind(&self) -> SubjectKind {
        match self {
            Subject::TNorm(_) => SubjectKind::TNorm,
            Subject::Implication(_) => SubjectKind::Implication,
            Subject::Aggregation(_) => SubjectKind::Aggregation,
            Subject::Ref(_) => SubjectKind::Ref,
            Subject::Mapping(_) => SubjectKind::Mapping,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Subject::TNorm(t) => t.apply(x, y),
            Subject::Implication(i) => i.eval(x, y),
            Subject::Aggregation(m) => m.kind.apply(x, y),
            Subject::Ref(r) => r.eval(x, y),
            Subject::Mapping(m) => m.eval(x, y),
        }
    }

    fn label(&self) -> String {
        match self {
            Subject::TNorm(t) => format!("tnorm {t}"),
            Subject::Implication(i) => format!("implication {i}"),
            Subject::Aggregation(m) => format!("aggregation {}", m.kind),
            Subject::Ref(r) => format!("ref {r}"),
            Subject::Mapping(m) => m.label.clone(),
        }
    }
}

impl From<TNorm> for Subject {
    fn from(t: TNorm) -> Self {
        Subject::TNorm(t)
    }
}

impl From<Implication> for Subject {
    fn from(i: Implication) -> Self {
        Subject::Implication(i)
    }
}

impl From<RefSpec> for Subject {
    fn from(r: RefSpec) -> Self {
        Subject::Ref(r)
    }
}

impl From<AggregationSpec> for Subject {
    fn from(m: AggregationSpec) -> Self {
        Subject::Aggregation(m)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub subject: String,
    pub holds: bool,
    /// First violating grid tuple in lexicographic order.
    pub counterexample: Option<Vec<UnitValue>>,
    /// Violation magnitude at the counterexample.
    pub violation: Option<f64>,
    pub violations: usize,
    pub tested: usize,
    pub grid_step: f64,
    pub tolerance: f64,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<18} {:<5} ({} cases, step {})",
            self.property.to_string(),
            if self.holds { "holds" } else { "FAILS" },
            self.tested,
            self.grid_step
        )?;
        if let Some(c) = &self.counterexample {
            let pts: Vec<String> = c.iter().map(|v| format!("{}", v.get())).collect();
            write!(f, " at ({})", pts.join(", "))?;
            if let Some(v) = self.violation {
                write!(f, " by {v:.3e}")?;
            }
        }
        Ok(())
    }
}

fn negation_for<'a>(subject: &'a Subject, property: Property, n: Option<&'a Negation>) -> Result<Option<&'a Negation>> {
    if !property.needs_negation() {
        return Ok(n);
    }
    match (n, subject) {
        (Some(n), _) => Ok(Some(n)),
        (None, Subject::Ref(r)) => Ok(Some(&r.negation)),
        (None, _) => Err(Error::Arity(format!("{property} requires a negation"))),
    }
}

fn check_applicable(subject: &Subject, property: Property) -> Result<()> {
    if let Subject::Aggregation(m) = subject {
        m.require_binary()?;
    }
    if property.applies_to(subject.kind()) {
        Ok(())
    } else {
        Err(Error::PropertyMismatch {
            property: property.to_string(),
            subject: subject.label(),
        })
    }
}

fn two_dist(x: f64, y: f64, a: f64, b: f64) -> f64 {
    (x - a).abs().max((y - b).abs())
}

/// Violation magnitude of `property` at `t`, or `None` when `t` lies outside
/// the property's quantifier domain.
fn violation<F: Fn(f64, f64) -> f64>(
    property: Property,
    kind: SubjectKind,
    f: &F,
    n: Option<&Negation>,
    t: &[f64],
    tol: f64,
) -> Option<f64> {
    use Property::*;
    let neg = |x: f64| n.map(|n| n.apply(x)).unwrap_or(1.0 - x);
    let v = match property {
        I1 => {
            let (x1, x2, y) = (t[0], t[1], t[2]);
            if x1 > x2 {
                return None;
            }
            f(x2, y) - f(x1, y)
        }
        I2 => {
            let (x, y1, y2) = (t[0], t[1], t[2]);
            if y1 > y2 {
                return None;
            }
            f(x, y1) - f(x, y2)
        }
        Boundary => {
            let (x, y) = (t[0], t[1]);
            let implication_like = matches!(kind, SubjectKind::Implication | SubjectKind::Mapping);
            match (x, y, implication_like) {
                (0.0, 0.0, true) | (0.0, 1.0, true) => 1.0 - f(x, y),
                (1.0, 0.0, true) => f(x, y),
                (0.0, 0.0, false) => f(x, y),
                (1.0, 1.0, false) => 1.0 - f(x, y),
                _ => return None,
            }
        }
        IP => 1.0 - f(t[0], t[0]),
        NP => (f(1.0, t[0]) - t[0]).abs(),
        OP => {
            let (x, y) = (t[0], t[1]);
            let v = f(x, y);
            if x <= y {
                1.0 - v
            } else if v >= 1.0 - tol {
                x - y
            } else {
                0.0
            }
        }
        LOP => {
            if t[0] > t[1] {
                return None;
            }
            1.0 - f(t[0], t[1])
        }
        EP => {
            let (x, y, z) = (t[0], t[1], t[2]);
            (f(x, f(y, z)) - f(y, f(x, z))).abs()
        }
        CC => {
            let (x, y) = (t[0], t[1]);
            let v = f(x, y);
            if x == 1.0 && y == 0.0 {
                v
            } else if v <= tol {
                (1.0 - x).max(y)
            } else {
                0.0
            }
        }
        CP => {
            let (x, y) = (t[0], t[1]);
            (f(x, y) - f(neg(y), neg(x))).abs()
        }
        Ref1 | Commutative => (f(t[0], t[1]) - f(t[1], t[0])).abs(),
        Ref2 => {
            let (x, y) = (t[0], t[1]);
            let v = f(x, y);
            if x == y {
                1.0 - v
            } else if v >= 1.0 - tol {
                (x - y).abs()
            } else {
                0.0
            }
        }
        Ref3 => {
            let (x, y) = (t[0], t[1]);
            let v = f(x, y);
            if (x == 0.0 && y == 1.0) || (x == 1.0 && y == 0.0) {
                v
            } else if v <= tol {
                two_dist(x, y, 0.0, 1.0).min(two_dist(x, y, 1.0, 0.0))
            } else {
                0.0
            }
        }
        Ref4 => {
            let (x, y) = (t[0], t[1]);
            (f(x, y) - f(neg(x), neg(y))).abs()
        }
        Ref5 => {
            let (x, y, z) = (t[0], t[1], t[2]);
            if !(x <= y && y <= z) {
                return None;
            }
            (f(x, z) - f(x, y)).max(f(x, z) - f(y, z))
        }
        Associative => {
            let (x, y, z) = (t[0], t[1], t[2]);
            (f(f(x, y), z) - f(x, f(y, z))).abs()
        }
        Monotone => {
            let (x1, x2, y) = (t[0], t[1], t[2]);
            if x1 > x2 {
                return None;
            }
            (f(x1, y) - f(x2, y)).max(f(y, x1) - f(y, x2))
        }
        OneStrict => {
            let (x, y) = (t[0], t[1]);
            if f(x, y) >= 1.0 - tol {
                (1.0 - x).max(1.0 - y)
            } else {
                0.0
            }
        }
        Neutral1 => (f(t[0], 1.0) - t[0]).abs().max((f(1.0, t[0]) - t[0]).abs()),
        ZeroDivisorFree => {
            let (x, y) = (t[0], t[1]);
            if x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0 {
                return None;
            }
            if f(x, y) <= tol {
                x.min(y)
            } else {
                0.0
            }
        }
        Annihilator(a) => (f(a, t[0]) - a).abs().max((f(t[0], a) - a).abs()),
        LeftContinuity => {
            let (x, y) = (t[0], t[1]);
            let here = f(x, y);
            let mut jump: f64 = 0.0;
            if x > 0.0 {
                jump = jump.max((f((x - LEFT_PROBE_STEP).max(0.0), y) - here).abs());
            }
            if y > 0.0 {
                jump = jump.max((f(x, (y - LEFT_PROBE_STEP).max(0.0)) - here).abs());
            }
            jump
        }
    };
    Some(v.max(0.0))
}

/// Re-evaluates a property at a single tuple. Returns `None` when the tuple
/// is outside the property's domain.
pub fn violation_at(subject: &Subject, property: Property, n: Option<&Negation>, tuple: &[f64]) -> Result<Option<f64>> {
    check_applicable(subject, property)?;
    let n = negation_for(subject, property, n)?;
    if tuple.len() != property.arity() {
        return Err(Error::Arity(format!(
            "{property} takes {} coordinates, got {}",
            property.arity(),
            tuple.len()
        )));
    }
    let f = |x: f64, y: f64| subject.eval(x, y);
    Ok(violation(property, subject.kind(), &f, n, tuple, property.tolerance()))
}

/// Exhaustively tests `property` over the grid `{0, step, …, 1}`.
pub fn check_property(subject: &Subject, property: Property, grid_step: f64, n: Option<&Negation>) -> Result<PropertyReport> {
    check_applicable(subject, property)?;
    let n = negation_for(subject, property, n)?;
    let pts = grid(grid_step)?;
    let tol = property.tolerance();
    let kind = subject.kind();
    let f = |x: f64, y: f64| subject.eval(x, y);

    let mut first: Option<(Vec<f64>, f64)> = None;
    let mut violations = 0usize;
    let mut tested = 0usize;
    let mut visit = |t: &[f64]| {
        if let Some(v) = violation(property, kind, &f, n, t, tol) {
            tested += 1;
            if v > tol {
                violations += 1;
                if first.is_none() {
                    first = Some((t.to_vec(), v));
                }
            }
        }
    };
    match property.arity() {
        1 => pts.iter().for_each(|&x| visit(&[x])),
        2 => {
            for &x in &pts {
                for &y in &pts {
                    visit(&[x, y]);
                }
            }
        }
        _ => {
            for &x in &pts {
                for &y in &pts {
                    for &z in &pts {
                        visit(&[x, y, z]);
                    }
                }
            }
        }
    }
    Ok(PropertyReport {
        property,
        subject: subject.label(),
        holds: first.is_none(),
        counterexample: first
            .as_ref()
            .map(|(t, _)| t.iter().map(|&v| UnitValue::saturating(v)).collect()),
        violation: first.map(|(_, v)| v),
        violations,
        tested,
        grid_step,
        tolerance: tol,
    })
}
