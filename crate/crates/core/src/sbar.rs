//! Flat similarity-based approximate reasoning for one rule
//! `IF x₁ is A₁ AND … AND xₙ is Aₙ THEN y is B`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Aggregation, AggregationSpec, Implication, Negation, ResiduatedTNorm, TNorm};
use crate::bench::counter::{product_label, similarity_label, OpCounter};
use crate::equivalence::{compose_ref, RefSpec};
use crate::error::{Error, Result};
use crate::fuzzyset::{product_cells, product_extend, FuzzySet, SimilaritySpec, DEFAULT_PRODUCT_CAP};
use crate::unit::{UnitValue, CHECK_TOL};

/// Largest product antecedent kept as an intermediate.
const INTERMEDIATE_CELLS: usize = 4096;

/// How the rule relation enters the inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleForm {
    /// `B′(y) = sup_x I_T(S, T(A(x), B(y)))`
    Eq1Conjunction,
    /// `B′(y) = inf_x I_T(S, I_T(A(x), B(y)))`
    Eq2Implication,
}

impl FromStr for RuleForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq1-conjunction" | "eq1" => Ok(RuleForm::Eq1Conjunction),
            "eq2-implication" | "eq2" => Ok(RuleForm::Eq2Implication),
            other => Err(Error::Parse(format!("unknown rule form '{other}'"))),
        }
    }
}

impl fmt::Display for RuleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleForm::Eq1Conjunction => "eq1-conjunction",
            RuleForm::Eq2Implication => "eq2-implication",
        })
    }
}

/// How the overall input–antecedent similarity is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityMode {
    /// `S = T(S_F(A′₁,A₁), …, S_F(A′ₙ,Aₙ))`
    #[default]
    TCombined,
    /// `S = S_F(A′, A)` over the materialized product universe.
    ProductDirect,
}

impl FromStr for SimilarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t-combined" => Ok(SimilarityMode::TCombined),
            "product-direct" => Ok(SimilarityMode::ProductDirect),
            other => Err(Error::Parse(format!("unknown similarity mode '{other}'"))),
        }
    }
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityMode::TCombined => "t-combined",
            SimilarityMode::ProductDirect => "product-direct",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Flat,
    Hier1,
    Hier2,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(Method::Flat),
            "hier1" => Ok(Method::Hier1),
            "hier2" => Ok(Method::Hier2),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Flat => "flat",
            Method::Hier1 => "hier1",
            Method::Hier2 => "hier2",
        })
    }
}

/// A single rule with a left-continuous t-norm `T` for "AND", its residuum
/// `I_T`, and a similarity `S_F`.
#[derive(Debug, Clone)]
pub struct RuleBase {
    antecedents: Vec<FuzzySet>,
    consequent: FuzzySet,
    tnorm: ResiduatedTNorm,
    form: RuleForm,
    similarity: SimilaritySpec,
}

impl RuleBase {
    /// The similarity defaults to `F = T(I_T(x,y), I_T(y,x))`.
    pub fn new(antecedents: Vec<FuzzySet>, consequent: FuzzySet, tnorm: TNorm, form: RuleForm) -> Result<Self> {
        if antecedents.is_empty() {
            return Err(Error::Validation("a rule needs at least one antecedent".into()));
        }
        let r = ResiduatedTNorm::new(tnorm)?;
        for (i, a) in antecedents.iter().enumerate() {
            if antecedents[..i].iter().any(|b| b.universe().id() == a.universe().id()) {
                return Err(Error::Validation(format!(
                    "antecedents {} share universe '{}'",
                    i + 1,
                    a.universe().id()
                )));
            }
        }
        let f = compose_ref(
            AggregationSpec::binary(Aggregation::TNorm(tnorm)),
            Implication::Residuum(r),
            Negation::Standard,
        )?;
        Ok(RuleBase {
            antecedents,
            consequent,
            tnorm: r,
            form,
            similarity: SimilaritySpec::new(f),
        })
    }

    pub fn with_ref(mut self, f: RefSpec) -> Self {
        self.similarity = SimilaritySpec::new(f);
        self
    }

    pub fn antecedents(&self) -> &[FuzzySet] {
        &self.antecedents
    }

    pub fn consequent(&self) -> &FuzzySet {
        &self.consequent
    }

    pub fn tnorm(&self) -> ResiduatedTNorm {
        self.tnorm
    }

    pub fn form(&self) -> RuleForm {
        self.form
    }

    pub fn similarity(&self) -> &SimilaritySpec {
        &self.similarity
    }

    pub fn arity(&self) -> usize {
        self.antecedents.len()
    }

    pub fn check_inputs(&self, inputs: &[FuzzySet]) -> Result<()> {
        if inputs.len() != self.antecedents.len() {
            return Err(Error::UniverseMismatch(format!(
                "{} inputs for {} antecedents",
                inputs.len(),
                self.antecedents.len()
            )));
        }
        for (i, (x, a)) in inputs.iter().zip(&self.antecedents).enumerate() {
            if !x.universe().same_as(a.universe()) {
                return Err(Error::UniverseMismatch(format!(
                    "input {} is over '{}', antecedent over '{}'",
                    i + 1,
                    x.universe().id(),
                    a.universe().id()
                )));
            }
            if !x.is_nonempty_set() {
                return Err(Error::EmptyInput(format!("input {} has no positive membership", i + 1)));
            }
        }
        Ok(())
    }

    /// `S_F(A′ᵢ, Aᵢ)` for every antecedent.
    pub fn antecedent_similarities(&self, inputs: &[FuzzySet]) -> Result<Vec<f64>> {
        inputs
            .iter()
            .zip(&self.antecedents)
            .map(|(x, a)| self.similarity.similarity(x, a))
            .collect()
    }

    pub(crate) fn count_similarities(&self, c: &mut Option<OpCounter>) {
        if let Some(c) = c {
            for (i, a) in self.antecedents.iter().enumerate() {
                let u = a.len() as u64;
                c.record(&similarity_label(i), 2 * u, u, u - 1);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferOptions {
    pub mode: SimilarityMode,
    pub count: bool,
    pub cap: u64,
    /// Replace the inner inf/sup over the antecedent universe by a single
    /// evaluation at `sup_x A(x)`.
    pub sup_reduction: bool,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions {
            mode: SimilarityMode::TCombined,
            count: false,
            cap: DEFAULT_PRODUCT_CAP,
            sup_reduction: false,
        }
    }
}

impl InferOptions {
    pub fn counted() -> Self {
        InferOptions {
            count: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Intermediate {
    pub label: String,
    pub set: FuzzySet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceResult {
    pub method: Method,
    pub output: FuzzySet,
    pub similarity_used: UnitValue,
    pub antecedent_similarities: Vec<UnitValue>,
    pub intermediates: Vec<Intermediate>,
    /// `sup A` over the product universe, for the flat method.
    pub sup_antecedent: Option<f64>,
    pub op_counts: Option<OpCounter>,
    pub diagnostics: Vec<String>,
}

pub(crate) fn unit_values(xs: &[f64]) -> Vec<UnitValue> {
    xs.iter().map(|&v| UnitValue::saturating(v)).collect()
}

/// Direct evaluation over the materialized product universe.
pub fn infer_flat(rule: &RuleBase, inputs: &[FuzzySet], opts: &InferOptions) -> Result<InferenceResult> {
    rule.check_inputs(inputs)?;
    let cells = product_cells(rule.antecedents.iter().map(FuzzySet::len));
    if cells > opts.cap as u128 {
        return Err(Error::Explosion { cells, cap: opts.cap });
    }
    let r = rule.tnorm;
    let t = r.tnorm();
    let mut counter = opts.count.then(OpCounter::new);
    let sims = rule.antecedent_similarities(inputs)?;
    let mut intermediates = Vec::new();

    let refs: Vec<&FuzzySet> = rule.antecedents.iter().collect();
    let a = product_extend(&refs, &t, opts.cap)?;
    let count_products = |c: &mut Option<OpCounter>, sets: &[FuzzySet], label: &dyn Fn(usize) -> String| {
        if let Some(c) = c {
            let mut cells = sets[0].len() as u64;
            for (k, s) in sets.iter().enumerate().skip(1) {
                cells *= s.len() as u64;
                c.record(&label(k + 1), 0, cells, 0);
            }
        }
    };

    let s = match opts.mode {
        SimilarityMode::TCombined => {
            rule.count_similarities(&mut counter);
            if let Some(c) = &mut counter {
                c.record("s", 0, sims.len() as u64 - 1, 0);
            }
            count_products(&mut counter, &rule.antecedents, &product_label);
            r.fold(&sims)
        }
        SimilarityMode::ProductDirect => {
            count_products(&mut counter, &rule.antecedents, &product_label);
            let xrefs: Vec<&FuzzySet> = inputs.iter().collect();
            let a_in = product_extend(&xrefs, &t, opts.cap)?;
            count_products(&mut counter, inputs, &|k| product_label(k).replace('A', "A'"));
            if let Some(c) = &mut counter {
                let u = a.len() as u64;
                c.record("S_F(A',A)", 2 * u, u, u - 1);
            }
            let s = rule.similarity.similarity_raw(a_in.memberships(), a.memberships());
            if inputs.len() > 1 && a_in.len() <= INTERMEDIATE_CELLS {
                intermediates.push(Intermediate {
                    label: "A'".into(),
                    set: a_in,
                });
            }
            s
        }
    };
    if rule.arity() > 1 && a.len() <= INTERMEDIATE_CELLS {
        intermediates.push(Intermediate {
            label: "A".into(),
            set: a.clone(),
        });
    }

    let b = rule.consequent.memberships();
    let m = b.len() as u64;
    let u = a.len() as u64;
    let av = a.memberships();
    let amax = av.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let values: Vec<f64> = if opts.sup_reduction {
        let (inner_label, inner): (&str, Vec<f64>) = match rule.form {
            RuleForm::Eq2Implication => ("I(a,B)", b.iter().map(|&y| r.residuum(amax, y)).collect()),
            RuleForm::Eq1Conjunction => ("T(a,B)", b.iter().map(|&y| r.apply(amax, y)).collect()),
        };
        if let Some(c) = &mut counter {
            c.record("a", 0, 0, u - 1);
            match rule.form {
                RuleForm::Eq2Implication => c.record(inner_label, m, 0, 0),
                RuleForm::Eq1Conjunction => c.record(inner_label, 0, m, 0),
            }
            c.record("B'", m, 0, 0);
        }
        let out = inner.iter().map(|&v| r.residuum(s, v)).collect();
        intermediates.push(Intermediate {
            label: inner_label.into(),
            set: FuzzySet::from_raw(rule.consequent.universe().clone(), inner),
        });
        out
    } else {
        if let Some(c) = &mut counter {
            match rule.form {
                RuleForm::Eq2Implication => c.record("B'", 2 * u * m, 0, (u - 1) * m),
                RuleForm::Eq1Conjunction => c.record("B'", u * m, u * m, (u - 1) * m),
            }
        }
        b.iter()
            .map(|&y| match rule.form {
                RuleForm::Eq2Implication => av
                    .iter()
                    .map(|&x| r.residuum(s, r.residuum(x, y)))
                    .fold(f64::INFINITY, f64::min),
                RuleForm::Eq1Conjunction => av
                    .iter()
                    .map(|&x| r.residuum(s, r.apply(x, y)))
                    .fold(f64::NEG_INFINITY, f64::max),
            })
            .collect()
    };

    Ok(InferenceResult {
        method: Method::Flat,
        output: FuzzySet::from_raw(rule.consequent.universe().clone(), values),
        similarity_used: UnitValue::saturating(s),
        antecedent_similarities: unit_values(&sims),
        intermediates,
        sup_antecedent: Some(amax),
        op_counts: counter,
        diagnostics: Vec::new(),
    })
}

/// The approximation-equality bound for two perturbed single-antecedent
/// inferences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub form: RuleForm,
    /// `S_F(A′, A″)`
    pub alpha1: f64,
    /// `S_F(A, A₁)`
    pub alpha2: f64,
    /// `S_F(B, B₁)`
    pub alpha3: f64,
    /// `F(S_F(A′,A), S_F(A″,A₁))`
    pub beta: f64,
    /// `T(β, α₂, α₃)`
    pub bound: f64,
    /// `S_F(B′, B″)`
    pub similarity: f64,
    pub holds: bool,
}

/// Infers `B′` from `rule` and input `a_prime`, and `B″` from the rule
/// `A₁ → B₁` and input `a_second`, then compares `S_F(B′,B″)` with
/// `T(β, α₂, α₃)`.
pub fn check_equality_bound(
    rule: &RuleBase,
    a_prime: &FuzzySet,
    a_second: &FuzzySet,
    a1: &FuzzySet,
    b1: &FuzzySet,
    f: &RefSpec,
) -> Result<BoundReport> {
    if rule.arity() != 1 {
        return Err(Error::Arity(format!("the bound is stated for one antecedent, the rule has {}", rule.arity())));
    }
    let generated = f.generating_tnorm();
    if generated != Some(rule.tnorm) {
        return Err(Error::NotApplicable(format!(
            "F = {f} is not T(I_T, I_T) for T = {}",
            rule.tnorm
        )));
    }
    let rule = rule.clone().with_ref(f.clone());
    let other = RuleBase::new(vec![a1.clone()], b1.clone(), rule.tnorm.tnorm(), rule.form)?.with_ref(f.clone());
    let sim = rule.similarity();
    let a = &rule.antecedents[0];
    let b = &rule.consequent;
    let opts = InferOptions::default();
    let b_prime = infer_flat(&rule, std::slice::from_ref(a_prime), &opts)?.output;
    let b_second = infer_flat(&other, std::slice::from_ref(a_second), &opts)?.output;

    let alpha1 = sim.similarity(a_prime, a_second)?;
    let alpha2 = sim.similarity(a, a1)?;
    let alpha3 = sim.similarity(b, b1)?;
    let beta = f.eval(sim.similarity(a_prime, a)?, sim.similarity(a_second, a1)?);
    let bound = rule.tnorm.fold(&[beta, alpha2, alpha3]);
    let similarity = sim.similarity(&b_prime, &b_second)?;
    Ok(BoundReport {
        form: rule.form,
        alpha1,
        alpha2,
        alpha3,
        beta,
        bound,
        similarity,
        holds: similarity >= bound - CHECK_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleBoundReport {
    /// `|S_F(A,B) − S_F(A′,B′)|`
    pub lhs: f64,
    /// `2 − S_F(A,A′) − S_F(B,B′)`
    pub rhs: f64,
    pub holds: bool,
    pub margin: f64,
}

pub fn check_prop49_bound(
    s: &SimilaritySpec,
    a: &FuzzySet,
    b: &FuzzySet,
    a_prime: &FuzzySet,
    b_prime: &FuzzySet,
) -> Result<TriangleBoundReport> {
    let lhs = (s.similarity(a, b)? - s.similarity(a_prime, b_prime)?).abs();
    let rhs = 2.0 - s.similarity(a, a_prime)? - s.similarity(b, b_prime)?;
    Ok(TriangleBoundReport {
        lhs,
        rhs,
        holds: lhs <= rhs + CHECK_TOL,
        margin: rhs - lhs,
    })
}
