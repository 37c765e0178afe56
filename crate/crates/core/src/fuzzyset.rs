//! Discrete fuzzy sets and relations over finite labeled universes.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::algebra::{Implication, Negation, TNorm};
use crate::equivalence::RefSpec;
use crate::error::{Error, Result};
use crate::unit::{UnitValue, ARITH_TOL};

/// Default limit on the number of cells a materialized product may have.
pub const DEFAULT_PRODUCT_CAP: u64 = 10_000_000;

#[derive(Debug)]
enum Labels {
    Explicit(Vec<String>),
    Product {
        factors: Vec<Arc<Universe>>,
        joined: OnceLock<Vec<String>>,
    },
}

/// A finite ordered universe of discourse.
#[derive(Debug)]
pub struct Universe {
    id: String,
    size: usize,
    labels: Labels,
}

impl Universe {
    pub fn new(id: impl Into<String>, labels: Vec<String>) -> Result<Arc<Self>> {
        let id = id.into();
        if labels.is_empty() {
            return Err(Error::Validation(format!("universe '{id}' has no labels")));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::Validation(format!("universe '{id}' has an empty label")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Validation(format!("universe '{id}' repeats label '{l}'")));
            }
        }
        Ok(Arc::new(Universe {
            id,
            size: labels.len(),
            labels: Labels::Explicit(labels),
        }))
    }

    /// A universe with labels `prefix1, prefix2, …`.
    pub fn indexed(id: impl Into<String>, prefix: &str, size: usize) -> Result<Arc<Self>> {
        Universe::new(id, (1..=size).map(|i| format!("{prefix}{i}")).collect())
    }

    /// The Cartesian product, row major with the leftmost factor slowest.
    pub fn product(factors: &[Arc<Universe>], cap: u64) -> Result<Arc<Self>> {
        if factors.is_empty() {
            return Err(Error::EmptyInput("product of zero universes".into()));
        }
        let cells = product_cells(factors.iter().map(|u| u.len()));
        if cells > cap as u128 {
            return Err(Error::Explosion { cells, cap });
        }
        if factors.len() == 1 {
            return Ok(factors[0].clone());
        }
        let id = factors.iter().map(|u| u.id.as_str()).collect::<Vec<_>>().join("×");
        Ok(Arc::new(Universe {
            id,
            size: cells as usize,
            labels: Labels::Product {
                factors: factors.to_vec(),
                joined: OnceLock::new(),
            },
        }))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> &[String] {
        match &self.labels {
            Labels::Explicit(l) => l,
            Labels::Product { factors, joined } => joined.get_or_init(|| {
                let mut out = vec![String::new()];
                for f in factors {
                    out = out
                        .iter()
                        .flat_map(|prefix| {
                            f.labels().iter().map(move |l| {
                                if prefix.is_empty() {
                                    l.clone()
                                } else {
                                    format!("{prefix}×{l}")
                                }
                            })
                        })
                        .collect();
                }
                out
            }),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }

    /// Whether two handles denote the same universe.
    pub fn same_as(&self, other: &Universe) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.id != other.id || self.size != other.size {
            return false;
        }
        match (&self.labels, &other.labels) {
            (Labels::Explicit(a), Labels::Explicit(b)) => a == b,
            (Labels::Product { factors: a, .. }, Labels::Product { factors: b, .. }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_as(y))
            }
            _ => false,
        }
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

pub(crate) fn product_cells(sizes: impl Iterator<Item = usize>) -> u128 {
    sizes.fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

fn ensure_same(a: &Universe, b: &Universe) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::UniverseMismatch(format!("'{}' vs '{}'", a.id, b.id)))
    }
}

/// A fuzzy set: one membership degree per universe element.
#[derive(Debug, Clone)]
pub struct FuzzySet {
    universe: Arc<Universe>,
    values: Vec<f64>,
}

impl FuzzySet {
    pub fn new(universe: Arc<Universe>, memberships: Vec<f64>) -> Result<Self> {
        if memberships.len() != universe.len() {
            return Err(Error::Validation(format!(
                "{} memberships for universe '{}' of size {}",
                memberships.len(),
                universe.id,
                universe.len()
            )));
        }
        let values = memberships
            .into_iter()
            .map(|v| UnitValue::new(v).map(UnitValue::get))
            .collect::<Result<Vec<_>>>()?;
        Ok(FuzzySet { universe, values })
    }

    pub(crate) fn from_raw(universe: Arc<Universe>, values: Vec<f64>) -> Self {
        debug_assert_eq!(universe.len(), values.len());
        let values = values.into_iter().map(|v| UnitValue::saturating(v).get()).collect();
        FuzzySet { universe, values }
    }

    pub fn constant(universe: Arc<Universe>, value: f64) -> Result<Self> {
        let v = UnitValue::new(value)?.get();
        let n = universe.len();
        Ok(FuzzySet {
            universe,
            values: vec![v; n],
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn memberships(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> UnitValue {
        UnitValue::saturating(self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Some membership is positive.
    pub fn is_nonempty_set(&self) -> bool {
        self.values.iter().any(|&v| v > 0.0)
    }

    pub fn height(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_subset_of(&self, other: &FuzzySet) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| *a <= *b + ARITH_TOL)
    }

    pub fn approx_eq(&self, other: &FuzzySet, tol: f64) -> bool {
        self.universe.same_as(&other.universe)
            && self.values.iter().zip(&other.values).all(|(a, b)| (a - b).abs() <= tol)
    }

    fn zip_with(&self, other: &FuzzySet, op: impl Fn(f64, f64) -> f64) -> Result<FuzzySet> {
        ensure_same(&self.universe, &other.universe)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        Ok(FuzzySet::from_raw(self.universe.clone(), values))
    }

    /// Label/membership records.
    pub fn records(&self) -> Vec<(String, f64)> {
        self.universe.labels().iter().cloned().zip(self.values.iter().copied()).collect()
    }
}

impl PartialEq for FuzzySet {
    fn eq(&self, other: &Self) -> bool {
        self.universe.same_as(&other.universe) && self.values == other.values
    }
}

impl Serialize for FuzzySet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec<'a> {
            universe: &'a str,
            labels: &'a [String],
            memberships: &'a [f64],
        }
        Rec {
            universe: self.universe.id(),
            labels: self.universe.labels(),
            memberships: &self.values,
        }
        .serialize(s)
    }
}

impl fmt::Display for FuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| format!("{v}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn complement(a: &FuzzySet, n: &Negation) -> Result<FuzzySet> {
    if !n.is_strong() {
        return Err(Error::UnsupportedConnective(format!("complement needs a strong negation, {n} is not")));
    }
    let values = a.values.iter().map(|&v| n.apply(v)).collect();
    Ok(FuzzySet::from_raw(a.universe.clone(), values))
}

pub fn union(a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
    a.zip_with(b, f64::max)
}

pub fn intersect(a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
    a.zip_with(b, f64::min)
}

/// Pointwise `T(A(x), B(x))`.
pub fn combine(a: &FuzzySet, b: &FuzzySet, t: &TNorm) -> Result<FuzzySet> {
    a.zip_with(b, |x, y| t.apply(x, y))
}

/// Pointwise `I(A(x), B(x))`.
pub fn pointwise_implication(a: &FuzzySet, b: &FuzzySet, i: &Implication) -> Result<FuzzySet> {
    a.zip_with(b, |x, y| i.eval(x, y))
}

/// `A(x₁, …, xₙ) = T(A₁(x₁), …, Aₙ(xₙ))` over the product universe.
pub fn product_extend(sets: &[&FuzzySet], t: &TNorm, cap: u64) -> Result<FuzzySet> {
    if sets.is_empty() {
        return Err(Error::EmptyInput("product of zero fuzzy sets".into()));
    }
    let universes: Vec<Arc<Universe>> = sets.iter().map(|s| s.universe.clone()).collect();
    let universe = Universe::product(&universes, cap)?;
    if sets.len() == 1 {
        return Ok(sets[0].clone());
    }
    let mut values = vec![1.0];
    for s in sets {
        let mut next = Vec::with_capacity(values.len() * s.len());
        for &acc in &values {
            for &v in &s.values {
                next.push(t.apply(acc, v));
            }
        }
        values = next;
    }
    Ok(FuzzySet::from_raw(universe, values))
}

/// `S_F(A, B) = inf_x F(A(x), B(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilaritySpec {
    pub f: RefSpec,
}

impl SimilaritySpec {
    pub fn new(f: RefSpec) -> Self {
        SimilaritySpec { f }
    }

    pub fn similarity(&self, a: &FuzzySet, b: &FuzzySet) -> Result<f64> {
        ensure_same(&a.universe, &b.universe)?;
        Ok(self.similarity_raw(&a.values, &b.values))
    }

    /// Same as [`similarity`](Self::similarity) on bare membership vectors
    /// of equal length.
    pub fn similarity_raw(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.f.eval(x, y))
            .fold(1.0, f64::min)
    }
}

pub fn similarity(s: &SimilaritySpec, a: &FuzzySet, b: &FuzzySet) -> Result<UnitValue> {
    s.similarity(a, b).map(UnitValue::saturating)
}

/// `A` and `B` are equal to degree `alpha`.
pub fn alpha_equal(s: &SimilaritySpec, a: &FuzzySet, b: &FuzzySet, alpha: UnitValue) -> Result<bool> {
    Ok(s.similarity(a, b)? >= alpha.get() - ARITH_TOL)
}

/// A fuzzy relation from `U` to `V`, stored row major.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRelation {
    from: Arc<Universe>,
    to: Arc<Universe>,
    matrix: Vec<f64>,
}

impl FuzzyRelation {
    pub fn new(from: Arc<Universe>, to: Arc<Universe>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != from.len() || rows.iter().any(|r| r.len() != to.len()) {
            return Err(Error::Validation(format!(
                "relation matrix must be {}×{}",
                from.len(),
                to.len()
            )));
        }
        let matrix = rows
            .into_iter()
            .flatten()
            .map(|v| UnitValue::new(v).map(UnitValue::get))
            .collect::<Result<Vec<_>>>()?;
        Ok(FuzzyRelation { from, to, matrix })
    }

    pub fn from_universe(&self) -> &Arc<Universe> {
        &self.from
    }

    pub fn to_universe(&self) -> &Arc<Universe> {
        &self.to
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.to.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.to.len();
        &self.matrix[i * m..(i + 1) * m]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.to.len()).map(<[f64]>::to_vec).collect()
    }
}

/// `R(A)(y) = sup_x T(A(x), R(x, y))`.
pub fn cri_compose(r: &FuzzyRelation, a: &FuzzySet, t: &TNorm) -> Result<FuzzySet> {
    ensure_same(&a.universe, &r.from)?;
    let m = r.to.len();
    let mut out = vec![0.0_f64; m];
    for (i, &ax) in a.values.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate() {
            *o = o.max(t.apply(ax, r.get(i, j)));
        }
    }
    Ok(FuzzySet::from_raw(r.to.clone(), out))
}

/// How a rule `A → B` is read as a relation.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleConnective {
    Implication(Implication),
    Conjunction(TNorm),
}

/// The matrix `I(A(x), B(y))` or `T(A(x), B(y))`.
pub fn relation_from_rule(a: &FuzzySet, b: &FuzzySet, c: &RuleConnective) -> FuzzyRelation {
    let matrix = a
        .values
        .iter()
        .flat_map(|&x| {
            b.values.iter().map(move |&y| match c {
                RuleConnective::Implication(i) => i.eval(x, y),
                RuleConnective::Conjunction(t) => t.apply(x, y),
            })
        })
        .map(|v| UnitValue::saturating(v).get())
        .collect();
    FuzzyRelation {
        from: a.universe.clone(),
        to: b.universe.clone(),
        matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Aggregation, Implication};
    use crate::equivalence::{catalog_ref, compose_ref};

    fn set(u: &Arc<Universe>, v: &[f64]) -> FuzzySet {
        FuzzySet::new(u.clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn universes_validate() {
        assert!(Universe::new("u", vec![]).is_err());
        assert!(Universe::new("u", vec!["a".into(), "a".into()]).is_err());
        let u = Universe::indexed("u", "x", 2).unwrap();
        let v = Universe::indexed("v", "y", 3).unwrap();
        let p = Universe::product(&[u.clone(), v.clone()], 100).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.labels()[1], "x1×y2");
        assert_eq!(p.index_of("x2×y1"), Some(3));
        assert!(matches!(Universe::product(&[u, v], 5), Err(Error::Explosion { cells: 6, cap: 5 })));
    }

    #[test]
    fn set_operations() {
        let u = Universe::indexed("u", "x", 2).unwrap();
        let a = set(&u, &[0.2, 0.9]);
        let b = set(&u, &[0.5, 0.1]);
        assert_eq!(union(&a, &b).unwrap().memberships(), &[0.5, 0.9]);
        assert_eq!(intersect(&a, &a).unwrap(), a);
        let c = set(&u, &[0.5, 1.0]);
        let d = set(&u, &[0.4, 0.3]);
        let p = combine(&c, &d, &TNorm::Product).unwrap();
        assert!((p.memberships()[0] - 0.2).abs() < 1e-15 && p.memberships()[1] == 0.3);
        let ones = FuzzySet::constant(u.clone(), 1.0).unwrap();
        let zeros = FuzzySet::constant(u.clone(), 0.0).unwrap();
        assert_eq!(combine(&a, &ones, &TNorm::Lukasiewicz).unwrap(), a);
        assert_eq!(combine(&a, &zeros, &TNorm::Minimum).unwrap(), zeros);
        let other = Universe::indexed("w", "x", 2).unwrap();
        assert!(matches!(union(&a, &set(&other, &[0.1, 0.1])), Err(Error::UniverseMismatch(_))));
    }

    #[test]
    fn complement_involution() {
        let u = Universe::indexed("u", "x", 3).unwrap();
        let a = set(&u, &[0.7, 0.8, 0.4]);
        let c = complement(&a, &Negation::Standard).unwrap();
        assert!(c.approx_eq(&set(&u, &[0.3, 0.2, 0.6]), 1e-15));
        assert!(complement(&c, &Negation::Standard).unwrap().approx_eq(&a, 1e-15));
        assert!(complement(&a, &Negation::Goedel).is_err());
    }

    #[test]
    fn product_extension() {
        let u1 = Universe::indexed("U1", "x", 4).unwrap();
        let u2 = Universe::indexed("U2", "x", 5).unwrap();
        let u3 = Universe::indexed("U3", "x", 3).unwrap();
        let a1 = set(&u1, &[1.0, 0.9, 0.6, 0.7]);
        let a2 = set(&u2, &[0.4, 0.4, 0.6, 0.5, 0.3]);
        let a3 = set(&u3, &[0.6, 0.3, 0.5]);
        let p = product_extend(&[&a1, &a2], &TNorm::Product, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(p.len(), 20);
        assert_eq!(&p.memberships()[..5], &[0.4, 0.4, 0.6, 0.5, 0.3]);
        let full = product_extend(&[&a1, &a2, &a3], &TNorm::Product, DEFAULT_PRODUCT_CAP).unwrap();
        assert!((full.height() - 0.36).abs() < 1e-12);
        assert_eq!(product_extend(&[&a1], &TNorm::Product, 1).unwrap_err().class(), crate::error::ErrorClass::Explosion);
        assert_eq!(product_extend(&[&a1], &TNorm::Product, 10).unwrap(), a1);
    }

    #[test]
    fn similarity_values() {
        let u = Universe::indexed("u", "x", 3).unwrap();
        let f = compose_ref(Aggregation::Minimum.into(), Implication::Lukasiewicz, Negation::Standard).unwrap();
        let s = SimilaritySpec::new(f);
        let a = set(&u, &[0.7, 0.8, 0.4]);
        let a2 = set(&u, &[0.9, 0.6, 0.6]);
        assert!((s.similarity(&a, &a2).unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(s.similarity(&a, &a).unwrap(), 1.0);
        assert!(alpha_equal(&s, &a, &a2, UnitValue::new(0.8).unwrap()).unwrap());
        assert!(!alpha_equal(&s, &a, &a2, UnitValue::new(0.81).unwrap()).unwrap());

        let u4 = Universe::indexed("U1", "x", 4).unwrap();
        let gg = compose_ref(Aggregation::Product.into(), Implication::Goguen, Negation::Standard).unwrap();
        let s = SimilaritySpec::new(gg);
        let v = s
            .similarity(&set(&u4, &[1.0, 0.9, 0.6, 0.7]), &set(&u4, &[0.8, 0.5, 0.7, 0.9]))
            .unwrap();
        assert!((v - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn cri_composition() {
        let u = Universe::indexed("u", "x", 3).unwrap();
        let v = Universe::indexed("v", "y", 3).unwrap();
        let r = FuzzyRelation::new(
            u.clone(),
            v.clone(),
            vec![vec![0.2, 0.1, 0.2], vec![0.1, 0.4, 0.3], vec![0.5, 0.3, 0.5]],
        )
        .unwrap();
        let t = TNorm::NilpotentMinimumClosed;
        let out = cri_compose(&r, &set(&u, &[0.7, 0.8, 0.4]), &t).unwrap();
        assert_eq!(out.memberships(), &[0.0, 0.4, 0.3]);
        let out = cri_compose(&r, &set(&u, &[0.9, 0.6, 0.6]), &t).unwrap();
        assert_eq!(out.memberships(), &[0.5, 0.4, 0.5]);
        let single = cri_compose(&r, &set(&u, &[0.0, 1.0, 0.0]), &TNorm::Minimum).unwrap();
        assert_eq!(single.memberships(), r.row(1));
    }

    #[test]
    fn rule_relations() {
        let u = Universe::indexed("u", "x", 2).unwrap();
        let v = Universe::indexed("v", "y", 3).unwrap();
        let a = set(&u, &[0.3, 0.8]);
        let b = set(&v, &[0.1, 0.5, 0.9]);
        let ones = FuzzySet::constant(v.clone(), 1.0).unwrap();
        let r = relation_from_rule(&a, &ones, &RuleConnective::Implication(Implication::Lukasiewicz));
        assert!(r.rows().iter().flatten().all(|&x| x == 1.0));
        let top = FuzzySet::constant(u.clone(), 1.0).unwrap();
        let r = relation_from_rule(&top, &b, &RuleConnective::Implication(Implication::Goguen));
        assert_eq!(r.row(0), b.memberships());
        assert!(catalog_ref("F2", None).is_ok());
    }
}
