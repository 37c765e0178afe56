//! Hierarchical inference: one stage per antecedent instead of one pass over
//! the product universe, and checkers for the identities that make the two
//! agree.

use serde::Serialize;

use crate::algebra::{Family, ResiduatedTNorm, TNorm};
use crate::bench::counter::OpCounter;
use crate::equivalence::RefSpec;
use crate::error::{Error, Result};
use crate::fuzzyset::{product_extend, FuzzySet, SimilaritySpec, DEFAULT_PRODUCT_CAP};
use crate::sbar::{unit_values, InferOptions, InferenceResult, Intermediate, Method, RuleBase, RuleForm, SimilarityMode};
use crate::unit::{grid, UnitValue, ARITH_TOL, CHECK_TOL};

/// Processing order of the antecedents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierPlan {
    /// Zero-based antecedent indices, first processed first.
    pub order: Vec<usize>,
    /// Evaluate each stage at `sup_x Aᵢ(x)` instead of the inf/sup over `Uᵢ`.
    pub sup_reduction: bool,
}

impl HierPlan {
    /// Antecedent `n` first, antecedent `1` last.
    pub fn innermost_first(n: usize) -> Self {
        HierPlan {
            order: (0..n).rev().collect(),
            sup_reduction: false,
        }
    }

    pub fn with_order(order: Vec<usize>) -> Self {
        HierPlan {
            order,
            sup_reduction: false,
        }
    }

    pub fn reduced(mut self) -> Self {
        self.sup_reduction = true;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &i in &self.order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Validation(format!(
                    "stage order {:?} is not a permutation of 0..{n}",
                    self.order
                )));
            }
        }
        if self.order.len() != n {
            return Err(Error::Validation(format!("stage order {:?} is not a permutation of 0..{n}", self.order)));
        }
        Ok(())
    }
}

fn stage_label(prefix: char, i: usize, last: bool) -> String {
    if last {
        format!("B'_{prefix}")
    } else {
        format!("B'_{prefix}{}", i + 1)
    }
}

fn require_form(rule: &RuleBase, form: RuleForm, method: Method) -> Result<()> {
    if rule.form() != form {
        return Err(Error::NotApplicable(format!("{method} needs a {form} rule, got {}", rule.form())));
    }
    Ok(())
}

struct Stages {
    sims: Vec<f64>,
    counter: Option<OpCounter>,
    diagnostics: Vec<String>,
    intermediates: Vec<Intermediate>,
}

fn prepare(rule: &RuleBase, inputs: &[FuzzySet], plan: &HierPlan, opts: &InferOptions) -> Result<Stages> {
    plan.validate(rule.arity())?;
    rule.check_inputs(inputs)?;
    let sims = rule.antecedent_similarities(inputs)?;
    let mut counter = opts.count.then(OpCounter::new);
    rule.count_similarities(&mut counter);
    if plan.sup_reduction {
        if let Some(c) = &mut counter {
            for (i, a) in rule.antecedents().iter().enumerate() {
                c.record(&format!("sup A_{}", i + 1), 0, 0, a.len() as u64 - 1);
            }
        }
    }
    let mut diagnostics = Vec::new();
    if opts.mode == SimilarityMode::ProductDirect {
        diagnostics.push("product-direct similarity is not used by the hierarchical methods".into());
    }
    Ok(Stages {
        sims,
        counter,
        diagnostics,
        intermediates: Vec::new(),
    })
}

fn finish(rule: &RuleBase, method: Method, st: Stages, b: Vec<f64>) -> InferenceResult {
    InferenceResult {
        method,
        output: FuzzySet::from_raw(rule.consequent().universe().clone(), b),
        similarity_used: UnitValue::saturating(rule.tnorm().fold(&st.sims)),
        antecedent_similarities: unit_values(&st.sims),
        intermediates: st.intermediates,
        sup_antecedent: None,
        op_counts: st.counter,
        diagnostics: st.diagnostics,
    }
}

/// Inf-chain: `B ← inf_{xᵢ} I_T(sᵢ, I_T(Aᵢ(xᵢ), B(y)))`, one stage per
/// antecedent in plan order.
pub fn hier_infer_alg1(
    rule: &RuleBase,
    inputs: &[FuzzySet],
    plan: &HierPlan,
    opts: &InferOptions,
) -> Result<InferenceResult> {
    require_form(rule, RuleForm::Eq2Implication, Method::Hier1)?;
    let r = rule.tnorm();
    if !matches!(r.tnorm().family(), Family::Minimum | Family::Strict | Family::Nilpotent) {
        return Err(Error::UnsupportedConnective(format!(
            "the inf-chain needs the minimum or a continuous Archimedean t-norm, got {r}"
        )));
    }
    let mut st = prepare(rule, inputs, plan, opts)?;
    let mut b = rule.consequent().memberships().to_vec();
    let m = b.len() as u64;
    for (k, &i) in plan.order.iter().enumerate() {
        let s = st.sims[i];
        let a = rule.antecedents()[i].memberships();
        let u = a.len() as u64;
        let label = stage_label('2', i, k + 1 == plan.order.len());
        if plan.sup_reduction {
            let h = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            b = b.iter().map(|&y| r.residuum(s, r.residuum(h, y))).collect();
            if let Some(c) = &mut st.counter {
                c.record(&label, 2 * m, 0, 0);
            }
        } else {
            b = b
                .iter()
                .map(|&y| a.iter().map(|&x| r.residuum(s, r.residuum(x, y))).fold(f64::INFINITY, f64::min))
                .collect();
            if let Some(c) = &mut st.counter {
                c.record(&label, 2 * u * m, 0, (u - 1) * m);
            }
        }
        st.intermediates.push(Intermediate {
            label: stage_label('2', i, false),
            set: FuzzySet::from_raw(rule.consequent().universe().clone(), b.clone()),
        });
    }
    Ok(finish(rule, Method::Hier1, st, b))
}

/// Sup-chain: `B ← sup_{xᵢ} I_T(sᵢ, T(Aᵢ(xᵢ), B(y)))`.
///
/// Cells where the exchange premise `sᵢ > B(y)` fails, and for nilpotent
/// t-norms cells where `T(Aᵢ(xᵢ), B(y)) = 0`, are reported in the
/// diagnostics; the stage values are computed regardless.
pub fn hier_infer_alg2(
    rule: &RuleBase,
    inputs: &[FuzzySet],
    plan: &HierPlan,
    opts: &InferOptions,
) -> Result<InferenceResult> {
    require_form(rule, RuleForm::Eq1Conjunction, Method::Hier2)?;
    let r = rule.tnorm();
    let t = r.tnorm();
    if !t.is_continuous_archimedean() {
        return Err(Error::UnsupportedConnective(format!(
            "the sup-chain needs a continuous Archimedean t-norm, got {r}"
        )));
    }
    let mut st = prepare(rule, inputs, plan, opts)?;
    let nilpotent = t.family() == Family::Nilpotent;
    let mut b = rule.consequent().memberships().to_vec();
    let m = b.len() as u64;
    let (mut premise_failures, mut zero_cells, mut cells) = (0usize, 0usize, 0usize);
    for (k, &i) in plan.order.iter().enumerate() {
        let s = st.sims[i];
        let a = rule.antecedents()[i].memberships();
        let u = a.len() as u64;
        let label = stage_label('1', i, k + 1 == plan.order.len());
        for &y in &b {
            for &x in a {
                cells += 1;
                if y >= s - ARITH_TOL {
                    premise_failures += 1;
                }
                if nilpotent && t.apply(x, y) <= ARITH_TOL {
                    zero_cells += 1;
                }
            }
        }
        if plan.sup_reduction {
            let h = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            b = b.iter().map(|&y| r.residuum(s, r.apply(h, y))).collect();
            if let Some(c) = &mut st.counter {
                c.record(&label, m, m, 0);
            }
        } else {
            b = b
                .iter()
                .map(|&y| a.iter().map(|&x| r.residuum(s, r.apply(x, y))).fold(f64::NEG_INFINITY, f64::max))
                .collect();
            if let Some(c) = &mut st.counter {
                c.record(&label, u * m, u * m, (u - 1) * m);
            }
        }
        st.intermediates.push(Intermediate {
            label: stage_label('1', i, false),
            set: FuzzySet::from_raw(rule.consequent().universe().clone(), b.clone()),
        });
    }
    if premise_failures > 0 {
        st.diagnostics.push(format!(
            "exchange premise s_i > B(y) fails in {premise_failures} of {cells} stage cells"
        ));
    }
    if zero_cells > 0 {
        st.diagnostics.push(format!(
            "{zero_cells} of {cells} stage cells have T(A_i(x_i), B(y)) = 0 and are outside the exchange guarantee"
        ));
    }
    Ok(finish(rule, Method::Hier2, st, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    /// `I(T(x,y), T(x′,y′)) = T(I(x,x′), I(y,y′))` for `x > x′`, `y > y′`.
    Eq3,
    /// `I(x, T(y,z)) = T(y, I(x,z))` for `x > z`.
    Exchange,
    /// `S_F(T(A₁,A₂), T(A′₁,A′₂)) = T(S_F(A₁,A′₁), S_F(A₂,A′₂))`.
    Distributivity,
}

impl std::str::FromStr for EquationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq3" => Ok(EquationKind::Eq3),
            "exchange" => Ok(EquationKind::Exchange),
            "distributivity" => Ok(EquationKind::Distributivity),
            other => Err(Error::Parse(format!("unknown equation '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    Greater,
    Less,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationReport {
    pub equation: EquationKind,
    pub subject: String,
    pub holds: bool,
    /// First violating tuple in lexicographic order.
    pub counterexample: Option<Vec<f64>>,
    pub violation: f64,
    pub tested: usize,
    pub grid_step: Option<f64>,
    /// Side condition applied to the tested domain, if any.
    pub restricted_domain: Option<String>,
    pub unrestricted_holds: Option<bool>,
    pub unrestricted_counterexample: Option<Vec<f64>>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub relation: Option<Relation>,
    /// `A′ᵢ ⊆ Aᵢ` for every `i`.
    pub inputs_within_antecedents: Option<bool>,
    /// `Aᵢ ⊆ A′ᵢ` for every `i`.
    pub antecedents_within_inputs: Option<bool>,
}

impl EquationReport {
    fn grid_run(equation: EquationKind, t: &ResiduatedTNorm, step: f64) -> Self {
        EquationReport {
            equation,
            subject: t.to_string(),
            holds: true,
            counterexample: None,
            violation: 0.0,
            tested: 0,
            grid_step: Some(step),
            restricted_domain: None,
            unrestricted_holds: None,
            unrestricted_counterexample: None,
            lhs: None,
            rhs: None,
            relation: None,
            inputs_within_antecedents: None,
            antecedents_within_inputs: None,
        }
    }
}

#[derive(Default)]
struct Scan {
    tested: usize,
    first: Option<Vec<f64>>,
    worst: f64,
}

impl Scan {
    fn see(&mut self, tuple: impl FnOnce() -> Vec<f64>, diff: f64) {
        self.tested += 1;
        if diff > CHECK_TOL {
            if self.first.is_none() {
                self.first = Some(tuple());
            }
            self.worst = self.worst.max(diff);
        }
    }
}

fn residuated(t: TNorm) -> Result<ResiduatedTNorm> {
    ResiduatedTNorm::new(t)
}

/// Grid test of `I_T(T(x,y), T(x′,y′)) = T(I_T(x,x′), I_T(y,y′))` over
/// `x > x′`, `y > y′`. Nilpotent t-norms are tested on pairs that are not
/// zero divisors, and the unrestricted outcome is reported alongside.
pub fn check_eq3(t: TNorm, grid_step: f64) -> Result<EquationReport> {
    let r = residuated(t)?;
    let g = grid(grid_step)?;
    let nilpotent = t.family() == Family::Nilpotent;
    let (mut all, mut restricted) = (Scan::default(), Scan::default());
    for (i, &x) in g.iter().enumerate() {
        for &xp in &g[..i] {
            let rx = r.residuum(x, xp);
            for (j, &y) in g.iter().enumerate() {
                let txy = t.apply(x, y);
                for &yp in &g[..j] {
                    let lhs = r.residuum(txy, t.apply(xp, yp));
                    let rhs = t.apply(rx, r.residuum(y, yp));
                    let diff = (lhs - rhs).abs();
                    let tuple = || vec![x, xp, y, yp];
                    if nilpotent && !t.vanishes(x, y) && !t.vanishes(xp, yp) {
                        restricted.see(tuple, diff);
                    }
                    all.see(tuple, diff);
                }
            }
        }
    }
    Ok(grid_report(
        EquationKind::Eq3,
        &r,
        grid_step,
        nilpotent.then_some((restricted, "neither (x, y) nor (x', y') is a zero-divisor pair: t(x) + t(y) > 1 and t(x') + t(y') > 1")),
        all,
    ))
}

/// Grid test of `I_T(x, T(y,z)) = T(y, I_T(x,z))` over `x > z`, restricted
/// for nilpotent t-norms to `T(y, z) > 0`.
pub fn check_exchange(t: TNorm, grid_step: f64) -> Result<EquationReport> {
    let r = residuated(t)?;
    let g = grid(grid_step)?;
    let nilpotent = t.family() == Family::Nilpotent;
    let (mut all, mut restricted) = (Scan::default(), Scan::default());
    for (i, &x) in g.iter().enumerate() {
        for &y in &g {
            for &z in &g[..i] {
                let lhs = r.residuum(x, t.apply(y, z));
                let rhs = t.apply(y, r.residuum(x, z));
                let diff = (lhs - rhs).abs();
                let tuple = || vec![x, y, z];
                if nilpotent && !t.vanishes(y, z) {
                    restricted.see(tuple, diff);
                }
                all.see(tuple, diff);
            }
        }
    }
    Ok(grid_report(
        EquationKind::Exchange,
        &r,
        grid_step,
        nilpotent.then_some((restricted, "(y, z) is not a zero-divisor pair: t(y) + t(z) > 1")),
        all,
    ))
}

fn grid_report(
    kind: EquationKind,
    r: &ResiduatedTNorm,
    step: f64,
    restricted: Option<(Scan, &str)>,
    all: Scan,
) -> EquationReport {
    let mut rep = EquationReport::grid_run(kind, r, step);
    match restricted {
        Some((scan, domain)) => {
            rep.holds = scan.first.is_none();
            rep.counterexample = scan.first;
            rep.violation = scan.worst;
            rep.tested = scan.tested;
            rep.restricted_domain = Some(domain.to_string());
            rep.unrestricted_holds = Some(all.first.is_none());
            rep.unrestricted_counterexample = all.first;
        }
        None => {
            rep.holds = all.first.is_none();
            rep.counterexample = all.first;
            rep.violation = all.worst;
            rep.tested = all.tested;
        }
    }
    rep
}

/// Re-evaluates the defect of a grid counterexample.
pub fn equation_defect(kind: EquationKind, t: TNorm, tuple: &[f64]) -> Result<f64> {
    let r = residuated(t)?;
    match (kind, tuple) {
        (EquationKind::Eq3, &[x, xp, y, yp]) => {
            Ok((r.residuum(t.apply(x, y), t.apply(xp, yp)) - t.apply(r.residuum(x, xp), r.residuum(y, yp))).abs())
        }
        (EquationKind::Exchange, &[x, y, z]) => Ok((r.residuum(x, t.apply(y, z)) - t.apply(y, r.residuum(x, z))).abs()),
        _ => Err(Error::Arity(format!("{kind:?} does not take a {}-tuple", tuple.len()))),
    }
}

/// Compares `S_F(T(A₁,A₂), T(A′₁,A′₂))` over the product universe with
/// `T(S_F(A₁,A′₁), S_F(A₂,A′₂))`.
pub fn check_similarity_distributivity(
    t: TNorm,
    f: &RefSpec,
    a1: &FuzzySet,
    a2: &FuzzySet,
    a1p: &FuzzySet,
    a2p: &FuzzySet,
) -> Result<EquationReport> {
    let r = residuated(t)?;
    if f.generating_tnorm() != Some(r) {
        return Err(Error::NotApplicable(format!("F = {f} is not T(I_T, I_T) for T = {t}")));
    }
    let s = SimilaritySpec::new(f.clone());
    let pa = product_extend(&[a1, a2], &t, DEFAULT_PRODUCT_CAP)?;
    let pb = product_extend(&[a1p, a2p], &t, DEFAULT_PRODUCT_CAP)?;
    let lhs = s.similarity(&pa, &pb)?;
    let rhs = t.apply(s.similarity(a1, a1p)?, s.similarity(a2, a2p)?);
    let relation = if (lhs - rhs).abs() <= ARITH_TOL {
        Relation::Equal
    } else if lhs > rhs {
        Relation::Greater
    } else {
        Relation::Less
    };
    let mut rep = EquationReport::grid_run(EquationKind::Distributivity, &r, 0.0);
    rep.grid_step = None;
    rep.holds = relation == Relation::Equal;
    rep.violation = (lhs - rhs).abs();
    rep.tested = pa.len();
    rep.lhs = Some(lhs);
    rep.rhs = Some(rhs);
    rep.relation = Some(relation);
    rep.inputs_within_antecedents = Some(a1p.is_subset_of(a1) && a2p.is_subset_of(a2));
    rep.antecedents_within_inputs = Some(a1.is_subset_of(a1p) && a2.is_subset_of(a2p));
    if !rep.holds {
        rep.counterexample = Some(vec![lhs, rhs]);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzyset::Universe;
    use crate::sbar::infer_flat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(id: &str, v: &[f64]) -> FuzzySet {
        FuzzySet::new(Universe::indexed(id, id, v.len()).unwrap(), v.to_vec()).unwrap()
    }

    fn on(a: &FuzzySet, v: &[f64]) -> FuzzySet {
        FuzzySet::new(a.universe().clone(), v.to_vec()).unwrap()
    }

    fn example() -> (RuleBase, Vec<FuzzySet>) {
        let a1 = set("u1", &[1.0, 0.9, 0.6, 0.7]);
        let a2 = set("u2", &[0.4, 0.4, 0.6, 0.5, 0.3]);
        let a3 = set("u3", &[0.6, 0.3, 0.5]);
        let b = set("v", &[0.3, 0.4, 0.2, 0.1]);
        let inputs = vec![
            on(&a1, &[0.8, 0.5, 0.7, 0.9]),
            on(&a2, &[0.5, 0.6, 0.7, 0.4, 0.4]),
            on(&a3, &[0.8, 0.7, 0.9]),
        ];
        (RuleBase::new(vec![a1, a2, a3], b, TNorm::Product, RuleForm::Eq2Implication).unwrap(), inputs)
    }

    fn random_rule(rng: &mut ChaCha8Rng, t: TNorm, form: RuleForm, n: usize, positive: bool) -> (RuleBase, Vec<FuzzySet>) {
        let lo = if positive { 0.05 } else { 0.0 };
        let mut ants = Vec::new();
        let mut ins = Vec::new();
        for i in 0..n {
            let u = rng.gen_range(2..=5);
            let un = Universe::indexed(format!("u{i}"), "x", u).unwrap();
            let a: Vec<f64> = (0..u).map(|_| rng.gen_range(lo..=1.0)).collect();
            let x: Vec<f64> = (0..u).map(|_| rng.gen_range(0.05..=1.0)).collect();
            ants.push(FuzzySet::new(un.clone(), a).unwrap());
            ins.push(FuzzySet::new(un, x).unwrap());
        }
        let m = rng.gen_range(2..=5);
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(lo..=1.0)).collect();
        let b = FuzzySet::new(Universe::indexed("v", "y", m).unwrap(), b).unwrap();
        (RuleBase::new(ants, b, t, form).unwrap(), ins)
    }

    #[test]
    fn example_stages() {
        let (rule, inputs) = example();
        let res = hier_infer_alg1(&rule, &inputs, &HierPlan::innermost_first(3), &InferOptions::default()).unwrap();
        let want = [
            [1.0, 1.0, 7.0 / 9.0, 7.0 / 18.0],
            [1.0, 1.0, 1.0, 35.0 / 36.0],
            [1.0, 1.0, 1.0, 1.0],
        ];
        let labels: Vec<&str> = res.intermediates.iter().map(|i| i.label.as_str()).collect();
        assert_eq!(labels, ["B'_23", "B'_22", "B'_21"]);
        for (got, want) in res.intermediates.iter().zip(want) {
            for (g, w) in got.set.memberships().iter().zip(want) {
                assert!((g - w).abs() < 1e-12, "{}: {g} vs {w}", got.label);
            }
        }
        let flat = infer_flat(&rule, &inputs, &InferOptions::default()).unwrap();
        assert!(res.output.approx_eq(&flat.output, 1e-12));
    }

    #[test]
    fn sup_reduction_equals_inf_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            for _ in 0..50 {
                let n = rng.gen_range(1..=4);
                let (rule, ins) = random_rule(&mut rng, t, RuleForm::Eq2Implication, n, false);
                let plan = HierPlan::innermost_first(n);
                let a = hier_infer_alg1(&rule, &ins, &plan, &InferOptions::default()).unwrap();
                let b = hier_infer_alg1(&rule, &ins, &plan.reduced(), &InferOptions::default()).unwrap();
                assert!(a.output.approx_eq(&b.output, 1e-12));
            }
        }
    }

    #[test]
    fn stage_order_is_irrelevant() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for t in [TNorm::Minimum, TNorm::Product] {
            for _ in 0..50 {
                let (rule, ins) = random_rule(&mut rng, t, RuleForm::Eq2Implication, 3, false);
                let base = hier_infer_alg1(&rule, &ins, &HierPlan::innermost_first(3), &InferOptions::default()).unwrap();
                for order in [[0, 1, 2], [1, 0, 2], [2, 0, 1], [1, 2, 0]] {
                    let other = hier_infer_alg1(&rule, &ins, &HierPlan::with_order(order.to_vec()), &InferOptions::default()).unwrap();
                    assert!(base.output.approx_eq(&other.output, 1e-12));
                }
            }
        }
    }

    #[test]
    fn alg2_single_antecedent_is_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for t in [TNorm::Product, TNorm::Lukasiewicz] {
            for _ in 0..50 {
                let (rule, ins) = random_rule(&mut rng, t, RuleForm::Eq1Conjunction, 1, false);
                let h = hier_infer_alg2(&rule, &ins, &HierPlan::innermost_first(1), &InferOptions::default()).unwrap();
                let f = infer_flat(&rule, &ins, &InferOptions::default()).unwrap();
                assert_eq!(h.output.memberships(), f.output.memberships());
            }
        }
    }

    #[test]
    fn alg2_reports_zero_cells_for_lukasiewicz() {
        let a = set("u1", &[0.2, 0.9]);
        let c = set("u2", &[0.3, 1.0]);
        let b = set("v", &[0.1, 0.8]);
        let rule = RuleBase::new(vec![a.clone(), c.clone()], b, TNorm::Lukasiewicz, RuleForm::Eq1Conjunction).unwrap();
        let ins = vec![on(&a, &[0.3, 0.9]), on(&c, &[0.3, 0.8])];
        let res = hier_infer_alg2(&rule, &ins, &HierPlan::innermost_first(2), &InferOptions::default()).unwrap();
        assert!(res.diagnostics.iter().any(|d| d.contains("= 0")), "{:?}", res.diagnostics);
    }

    #[test]
    fn preconditions() {
        let (rule, inputs) = example();
        let plan = HierPlan::innermost_first(3);
        let opts = InferOptions::default();
        assert!(matches!(hier_infer_alg2(&rule, &inputs, &plan, &opts), Err(Error::NotApplicable(_))));
        let nm = RuleBase::new(rule.antecedents().to_vec(), rule.consequent().clone(), TNorm::NilpotentMinimum, RuleForm::Eq2Implication).unwrap();
        assert!(matches!(hier_infer_alg1(&nm, &inputs, &plan, &opts), Err(Error::UnsupportedConnective(_))));
        assert!(hier_infer_alg1(&rule, &inputs, &HierPlan::with_order(vec![0, 0, 1]), &opts).is_err());
        assert!(hier_infer_alg1(&rule, &inputs, &HierPlan::with_order(vec![0, 1]), &opts).is_err());
    }

    #[test]
    fn eq3_minimum_and_product() {
        for t in [TNorm::Minimum, TNorm::Product] {
            let rep = check_eq3(t, 0.05).unwrap();
            assert!(rep.holds, "{t}: {:?}", rep.counterexample);
            assert!(rep.restricted_domain.is_none());
        }
    }

    #[test]
    fn eq3_nilpotent_minimum_counterexample() {
        let rep = check_eq3(TNorm::NilpotentMinimum, 0.1).unwrap();
        assert!(!rep.holds);
        let ce = rep.counterexample.unwrap();
        assert!(equation_defect(EquationKind::Eq3, TNorm::NilpotentMinimum, &ce).unwrap() > CHECK_TOL);
    }

    #[test]
    fn nilpotent_minimum_stated_substitution() {
        let t = TNorm::NilpotentMinimum;
        let r = ResiduatedTNorm::new(t).unwrap();
        let lhs = r.residuum(t.apply(0.8, 0.4), t.apply(0.5, 0.3));
        let rhs = t.apply(r.residuum(0.8, 0.5), r.residuum(0.4, 0.3));
        assert!((lhs - 0.6).abs() < 1e-9 && (rhs - 0.5).abs() < 1e-9);
        let d = equation_defect(EquationKind::Eq3, t, &[0.8, 0.5, 0.4, 0.3]).unwrap();
        assert!((d - 0.1).abs() < 1e-9);
    }

    #[test]
    fn lukasiewicz_needs_restriction() {
        for check in [check_eq3, check_exchange] {
            let rep = check(TNorm::Lukasiewicz, 0.1).unwrap();
            assert!(rep.holds, "{:?}", rep.counterexample);
            assert_eq!(rep.unrestricted_holds, Some(false));
            let ce = rep.unrestricted_counterexample.unwrap();
            assert!(equation_defect(rep.equation, TNorm::Lukasiewicz, &ce).unwrap() > CHECK_TOL);
        }
    }

    #[test]
    fn exchange_product_holds() {
        assert!(check_exchange(TNorm::Product, 0.05).unwrap().holds);
        assert!(!check_exchange(TNorm::NilpotentMinimum, 0.1).unwrap().holds);
    }

    #[test]
    fn distributivity() {
        let f: RefSpec = "composed:tnorm:lukasiewicz:lukasiewicz".parse().unwrap();
        let a1 = set("u1", &[0.9, 0.6, 0.7]);
        let a2 = set("u2", &[0.4, 0.6, 0.5, 0.3]);
        let rep = check_similarity_distributivity(
            TNorm::Lukasiewicz,
            &f,
            &a1,
            &a2,
            &on(&a1, &[1.0, 0.5, 0.8]),
            &on(&a2, &[0.5, 0.3, 0.4, 0.2]),
        )
        .unwrap();
        assert_eq!(rep.relation, Some(Relation::Greater));
        assert!((rep.lhs.unwrap() - 0.8).abs() < 1e-12 && (rep.rhs.unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(rep.inputs_within_antecedents, Some(false));
        assert_eq!(rep.antecedents_within_inputs, Some(false));

        let g: RefSpec = "composed:min:goedel".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..200 {
            let v = |rng: &mut ChaCha8Rng, n| (0..n).map(|_| rng.gen::<f64>()).collect::<Vec<_>>();
            let (x1, x2, y1, y2) = (v(&mut rng, 3), v(&mut rng, 4), v(&mut rng, 3), v(&mut rng, 4));
            let rep = check_similarity_distributivity(TNorm::Minimum, &g, &on(&a1, &x1), &on(&a2, &x2), &on(&a1, &y1), &on(&a2, &y2)).unwrap();
            assert!(rep.holds, "{:?} vs {:?}", rep.lhs, rep.rhs);
        }
        assert!(matches!(
            check_similarity_distributivity(TNorm::Product, &g, &a1, &a2, &a1, &a2),
            Err(Error::NotApplicable(_))
        ));
    }
}
