//! Restricted equivalence functions: construction, validation and
//! decomposition.

use std::fmt;

use serde::Serialize;

use crate::algebra::property::{check_property, Mapping, Property, PropertyReport, Subject};
use crate::algebra::text::{text_form, Tokens};
use crate::algebra::{Aggregation, AggregationSpec, Generator, Implication, Negation, ResiduatedTNorm, TNorm};
use crate::error::{Error, Result};
use crate::unit::{clamp01, grid, CHECK_TOL};

/// Closed-form REFs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogRef {
    /// Mean of the two Łukasiewicz implications.
    F1,
    /// `1 − |x − y|`.
    F2,
    /// Product of the two `l`-modified Goguen implications.
    F3,
    /// Product of the two `lc`-modified Goguen implications.
    F4,
    /// `1 − |x − y|`, same values as `F2`.
    AbsDiff,
    /// `φ⁻¹(1 − |φ(x) − φ(y)|)`.
    Phi(Generator),
}

impl CatalogRef {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            CatalogRef::F1 => 0.5 * ((1.0 - x + y).min(1.0) + (1.0 - y + x).min(1.0)),
            CatalogRef::F2 | CatalogRef::AbsDiff => 1.0 - (x - y).abs(),
            CatalogRef::F3 => {
                if x == y {
                    1.0
                } else {
                    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                    (lo / hi).min((1.0 - hi) / (1.0 - lo))
                }
            }
            CatalogRef::F4 => {
                if x == y {
                    1.0
                } else {
                    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                    if lo < 1.0 - hi {
                        (1.0 - hi) / (1.0 - lo)
                    } else {
                        lo / hi
                    }
                }
            }
            CatalogRef::Phi(g) => g.inverse(1.0 - (g.forward(x) - g.forward(y)).abs()),
        }
    }

    fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        match t.next("catalog name")? {
            "F1" | "f1" => Ok(CatalogRef::F1),
            "F2" | "f2" => Ok(CatalogRef::F2),
            "F3" | "f3" => Ok(CatalogRef::F3),
            "F4" | "f4" => Ok(CatalogRef::F4),
            "absdiff" => Ok(CatalogRef::AbsDiff),
            "phi" => Ok(CatalogRef::Phi(Generator::parse_tokens(t)?)),
            other => Err(t.unknown(other, "catalog REF")),
        }
    }

    fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogRef::F1 => write!(f, "F1"),
            CatalogRef::F2 => write!(f, "F2"),
            CatalogRef::F3 => write!(f, "F3"),
            CatalogRef::F4 => write!(f, "F4"),
            CatalogRef::AbsDiff => write!(f, "absdiff"),
            CatalogRef::Phi(g) => write!(f, "phi:{g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefKind {
    /// `G(x, y) = M(f(x, y), f(y, x))`.
    Composed { m: Aggregation, f: Implication },
    Catalog(CatalogRef),
}

impl RefKind {
    pub(crate) fn parse_tokens(t: &mut Tokens<'_>) -> Result<Self> {
        match t.next("ref kind")? {
            "composed" => {
                let m = Aggregation::parse_tokens(t)?;
                let f = Implication::parse_tokens(t)?;
                Ok(RefKind::Composed { m, f })
            }
            "catalog" => Ok(RefKind::Catalog(CatalogRef::parse_tokens(t)?)),
            other => Err(t.unknown(other, "ref kind")),
        }
    }

    pub(crate) fn write_tokens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefKind::Composed { m, f: i } => write!(f, "composed:{m}:{i}"),
            RefKind::Catalog(c) => {
                write!(f, "catalog:")?;
                c.write_tokens(f)
            }
        }
    }
}

text_form!(RefKind);

/// A restricted equivalence function together with the strong negation its
/// REF4 axiom refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct RefSpec {
    pub kind: RefKind,
    pub negation: Negation,
}

impl RefSpec {
    pub fn new(kind: RefKind, negation: Negation) -> Self {
        RefSpec { kind, negation }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let v = match &self.kind {
            RefKind::Composed { m, f } => m.apply(f.eval(x, y), f.eval(y, x)),
            RefKind::Catalog(c) => c.eval(x, y),
        };
        clamp01(v)
    }

    /// Finds a left-continuous `T` such that `F = T(I_T(x,y), I_T(y,x))` on
    /// the grid of step `0.02`.
    pub fn generating_tnorm(&self) -> Option<ResiduatedTNorm> {
        let mut candidates: Vec<TNorm> = Vec::new();
        if let RefKind::Composed { m, f } = &self.kind {
            match m {
                Aggregation::TNorm(t) => candidates.push(*t),
                Aggregation::Minimum => candidates.push(TNorm::Minimum),
                Aggregation::Product => candidates.push(TNorm::Product),
                _ => {}
            }
            if let Some(t) = f.residuated_tnorm() {
                candidates.push(t.tnorm());
            }
        }
        candidates.extend([TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz]);
        let pts = grid(0.02).expect("fixed step");
        candidates.into_iter().find_map(|t| {
            let r = ResiduatedTNorm::new(t).ok()?;
            let same = pts.iter().all(|&x| {
                pts.iter().all(|&y| {
                    let g = r.apply(r.residuum(x, y), r.residuum(y, x));
                    (g - self.eval(x, y)).abs() <= CHECK_TOL
                })
            });
            same.then_some(r)
        })
    }
}

impl fmt::Display for RefSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl std::str::FromStr for RefSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(RefSpec::new(s.parse()?, Negation::Standard))
    }
}

/// `F(x, y) = M(f(x, y), f(y, x))`. No axiom is guaranteed; see
/// [`check_ref_preconditions`] and [`validate_ref`].
pub fn compose_ref(m: AggregationSpec, f: Implication, n: Negation) -> Result<RefSpec> {
    let m = m.require_binary()?;
    Ok(RefSpec::new(RefKind::Composed { m, f }, n))
}

pub fn catalog_ref(name: &str, generator: Option<Generator>) -> Result<RefSpec> {
    let c = match name {
        "phi" => CatalogRef::Phi(
            generator.ok_or_else(|| Error::Validation("catalog phi requires a generator".into()))?,
        ),
        other => {
            let mut t = Tokens::new(other);
            let c = CatalogRef::parse_tokens(&mut t)?;
            t.finish()?;
            c
        }
    };
    Ok(RefSpec::new(RefKind::Catalog(c), Negation::Standard))
}

/// The two hypothesis sets under which a composed mapping is a REF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `M` commutative, one strict, without zero divisors, `M(0,1) = 0`.
    ZeroDivisorFree,
    /// `M` commutative with neutral element 1.
    NeutralElement,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreconditionReport {
    pub aggregation: Vec<PropertyReport>,
    pub mapping: Vec<PropertyReport>,
    pub certificate: Option<Certificate>,
}

impl PreconditionReport {
    fn holds(&self, p: Property) -> bool {
        self.aggregation
            .iter()
            .chain(&self.mapping)
            .any(|r| r.property == p && r.holds)
    }
}

pub fn check_ref_preconditions(m: AggregationSpec, f: &Implication, n: &Negation, grid_step: f64) -> Result<PreconditionReport> {
    let ms = Subject::Aggregation(AggregationSpec::binary(m.require_binary()?));
    let aggregation = [
        Property::Commutative,
        Property::OneStrict,
        Property::ZeroDivisorFree,
        Property::Annihilator(0.0),
        Property::Neutral1,
    ]
    .into_iter()
    .map(|p| check_property(&ms, p, grid_step, None))
    .collect::<Result<Vec<_>>>()?;
    let fs = Subject::Implication(f.clone());
    let mapping = [Property::I1, Property::CC, Property::CP, Property::OP]
        .into_iter()
        .map(|p| check_property(&fs, p, grid_step, Some(n)))
        .collect::<Result<Vec<_>>>()?;
    let mut report = PreconditionReport {
        aggregation,
        mapping,
        certificate: None,
    };
    let f_ok = [Property::I1, Property::CC, Property::CP, Property::OP]
        .iter()
        .all(|&p| report.holds(p));
    let commutative = report.holds(Property::Commutative);
    if f_ok && commutative {
        if report.holds(Property::OneStrict)
            && report.holds(Property::ZeroDivisorFree)
            && report.holds(Property::Annihilator(0.0))
        {
            report.certificate = Some(Certificate::ZeroDivisorFree);
        } else if report.holds(Property::Neutral1) {
            report.certificate = Some(Certificate::NeutralElement);
        }
    }
    Ok(report)
}

/// Checks REF1–REF5 on the grid. REF5 is checked in both readings.
pub fn validate_ref(f: &RefSpec, grid_step: f64) -> Result<Vec<PropertyReport>> {
    let s = Subject::Ref(f.clone());
    Property::REF_AXIOMS
        .iter()
        .map(|&p| check_property(&s, p, grid_step, Some(&f.negation)))
        .collect()
}

/// Tolerance of the pseudo-inverse bisection.
pub const PSEUDO_INVERSE_TOL: f64 = 1e-10;
/// Largest recomposition error accepted by [`decompose_ref`].
pub const RECOMPOSITION_TOL: f64 = 1e-6;

/// A mapping `f` recovered from a REF and an aggregation.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub source: RefSpec,
    pub aggregation: Aggregation,
    /// `M` has neutral element 1, so `f = F` above the diagonal.
    pub identity_branch: bool,
    pub pseudo_inverse_tolerance: f64,
}

impl Decomposition {
    /// Builds the mapping without checking that it recomposes to `F`.
    pub fn derive(f: &RefSpec, m: Aggregation) -> Result<Self> {
        let pts = grid(0.02)?;
        for w in pts.windows(2) {
            if m.apply(1.0, w[1]) <= m.apply(1.0, w[0]) {
                return Err(Error::Decomposition(format!(
                    "y -> {m}(1, y) is not strictly increasing between {} and {}",
                    w[0], w[1]
                )));
            }
        }
        let commutative = pts
            .iter()
            .all(|&x| pts.iter().all(|&y| (m.apply(x, y) - m.apply(y, x)).abs() <= CHECK_TOL));
        if !commutative {
            return Err(Error::Decomposition(format!("{m} is not commutative")));
        }
        let identity_branch = pts
            .iter()
            .all(|&y| (m.apply(1.0, y) - y).abs() <= CHECK_TOL);
        Ok(Decomposition {
            source: f.clone(),
            aggregation: m,
            identity_branch,
            pseudo_inverse_tolerance: PSEUDO_INVERSE_TOL,
        })
    }

    /// `sup{y : M(1, y) ≤ z}`, with `sup ∅ = 0`.
    pub fn pseudo_inverse(&self, z: f64) -> f64 {
        let m = &self.aggregation;
        if m.apply(1.0, 0.0) > z {
            return 0.0;
        }
        if m.apply(1.0, 1.0) <= z {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > self.pseudo_inverse_tolerance {
            let mid = 0.5 * (lo + hi);
            if m.apply(1.0, mid) <= z {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if x <= y {
            1.0
        } else if self.identity_branch {
            self.source.eval(x, y)
        } else {
            self.pseudo_inverse(self.source.eval(x, y))
        }
    }

    /// `M(f(x, y), f(y, x))`.
    pub fn recompose(&self, x: f64, y: f64) -> f64 {
        self.aggregation.apply(self.eval(x, y), self.eval(y, x))
    }

    /// Largest recomposition error on the grid and where it occurs.
    pub fn recomposition_error(&self, grid_step: f64) -> Result<(f64, (f64, f64))> {
        let pts = grid(grid_step)?;
        let mut worst = (0.0, (0.0, 0.0));
        for &x in &pts {
            for &y in &pts {
                let e = (self.recompose(x, y) - self.source.eval(x, y)).abs();
                if e > worst.0 {
                    worst = (e, (x, y));
                }
            }
        }
        Ok(worst)
    }

    pub fn as_mapping(&self) -> Mapping {
        let d = self.clone();
        Mapping::new(format!("decomposition of {} by {}", self.source, self.aggregation), move |x, y| {
            d.eval(x, y)
        })
    }
}

/// Recovers `f` with `F(x, y) = M(f(x, y), f(y, x))`. Fails when the
/// section `y ↦ M(1, y)` is not strictly increasing, or when the recovered
/// mapping does not recompose to `F` within [`RECOMPOSITION_TOL`] on the grid
/// of step `0.02`.
pub fn decompose_ref(f: &RefSpec, m: AggregationSpec) -> Result<Decomposition> {
    let d = Decomposition::derive(f, m.require_binary()?)?;
    let (err, (x, y)) = d.recomposition_error(0.02)?;
    if err > RECOMPOSITION_TOL {
        return Err(Error::Decomposition(format!(
            "recomposition by {} misses {f} by {err:.6} at ({x}, {y})",
            d.aggregation
        )));
    }
    Ok(d)
}
