//! Randomized checks of the similarity-preservation statements.
//!
//! Each trial draws fresh fuzzy sets and evaluates one inequality. The
//! statements that involve a t-norm use the t-norm generating `F` and are
//! reported as not applicable when `F` has none.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Property, ResiduatedTNorm};
use crate::equivalence::RefSpec;
use crate::error::Result;
use crate::fuzzyset::{
    complement, cri_compose, intersect, union, FuzzyRelation, FuzzySet, SimilaritySpec, Universe,
};
use crate::sample::random_set;
use crate::sbar::{check_equality_bound, check_prop49_bound, RuleBase, RuleForm};
use crate::unit::CHECK_TOL;
use crate::algebra::{check_property, TNorm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// `S_F(Aᶜ, Bᶜ) ≥ S_F(A, B)`
    Complement,
    /// `S_F(A∪C, B∪C) ≥ S_F(A, B)`
    Union,
    /// `S_F(A∩C, B∩C) ≥ S_F(A, B)`
    Intersection,
    /// `S_F(R(A), R(B)) ≥ S_F(A, B)` for sup-min composition.
    Composition,
    /// `S_F(T(A,B), T(A′,B′)) ≥ T(S_F(A,A′), S_F(B,B′))`
    TNormCompatibility,
    /// `S_F(I_T(A,B), I_T(A′,B′)) ≥ T(S_F(A,A′), S_F(B,B′))`
    ImplicationCompatibility,
    /// `|S_F(A,B) − S_F(A′,B′)| ≤ 2 − S_F(A,A′) − S_F(B,B′)`
    Triangle,
    /// `F(inf f, inf g) ≥ inf F(f, g)` and `F(sup f, sup g) ≥ inf F(f, g)`
    InfSup,
    /// Perturbation bound for the conjunction form.
    ConjunctionPerturbation,
    /// Perturbation bound for the implication form.
    ImplicationPerturbation,
}

impl Statement {
    pub const ALL: [Statement; 10] = [
        Statement::Complement,
        Statement::Union,
        Statement::Intersection,
        Statement::Composition,
        Statement::TNormCompatibility,
        Statement::ImplicationCompatibility,
        Statement::Triangle,
        Statement::InfSup,
        Statement::ConjunctionPerturbation,
        Statement::ImplicationPerturbation,
    ];

    fn needs_generator(&self) -> bool {
        !matches!(self, Statement::Complement | Statement::Union | Statement::Intersection | Statement::Composition)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub statement: Statement,
    pub f: String,
    pub trials: usize,
    pub violations: usize,
    /// Largest amount by which the inequality failed.
    pub worst: f64,
    pub first_counterexample: Option<String>,
    /// Set when the statement was not run.
    pub not_applicable: Option<String>,
    /// Hypotheses of the statement that `F` does not satisfy, if any.
    pub unmet_hypotheses: Vec<String>,
}

impl SuiteReport {
    pub fn clean(&self) -> bool {
        self.not_applicable.is_none() && self.violations == 0
    }
}

fn describe(sets: &[&FuzzySet]) -> String {
    sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn perturbed<R: Rng>(rng: &mut R, base: &FuzzySet) -> FuzzySet {
    if rng.gen_bool(0.5) {
        let v = base
            .memberships()
            .iter()
            .map(|&x| (x + rng.gen_range(-0.2..=0.2)).clamp(0.05, 1.0))
            .collect();
        FuzzySet::new(base.universe().clone(), v).expect("clamped")
    } else {
        random_set(rng, base.universe(), 0.05)
    }
}

/// Runs `trials` seeded trials of `statement` for `f`.
pub fn run_suite(statement: Statement, f: &RefSpec, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport {
        statement,
        f: f.to_string(),
        trials: 0,
        violations: 0,
        worst: 0.0,
        first_counterexample: None,
        not_applicable: None,
        unmet_hypotheses: Vec::new(),
    };
    let t = f.generating_tnorm();
    if statement.needs_generator() && t.is_none() {
        rep.not_applicable = Some(format!("{f} is not T(I_T, I_T) for any left-continuous T"));
        return Ok(rep);
    }
    if statement == Statement::Complement {
        let r4 = check_property(&f.clone().into(), Property::Ref4, 0.02, Some(&f.negation))?;
        if !r4.holds {
            rep.unmet_hypotheses.push(format!("REF4 fails, e.g. at {:?}", r4.counterexample));
        }
    }
    let s = SimilaritySpec::new(f.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let u = rng.gen_range(2..=6);
        let un = Universe::indexed(format!("U{trial}"), "x", u)?;
        let gen = |rng: &mut ChaCha8Rng| random_set(rng, &un, 0.0);
        let (lhs, rhs, witness) = match statement {
            Statement::Complement => {
                let (a, b) = (gen(&mut rng), gen(&mut rng));
                let lhs = s.similarity(&complement(&a, &f.negation)?, &complement(&b, &f.negation)?)?;
                (lhs, s.similarity(&a, &b)?, describe(&[&a, &b]))
            }
            Statement::Union | Statement::Intersection => {
                let (a, b, c) = (gen(&mut rng), gen(&mut rng), gen(&mut rng));
                let op = if statement == Statement::Union { union } else { intersect };
                let lhs = s.similarity(&op(&a, &c)?, &op(&b, &c)?)?;
                (lhs, s.similarity(&a, &b)?, describe(&[&a, &b, &c]))
            }
            Statement::Composition => {
                let (a, b) = (gen(&mut rng), gen(&mut rng));
                let v = rng.gen_range(2..=5);
                let vn = Universe::indexed(format!("V{trial}"), "y", v)?;
                let rows = (0..u).map(|_| (0..v).map(|_| rng.gen::<f64>()).collect()).collect();
                let r = FuzzyRelation::new(un.clone(), vn, rows)?;
                let lhs = s.similarity(&cri_compose(&r, &a, &TNorm::Minimum)?, &cri_compose(&r, &b, &TNorm::Minimum)?)?;
                (lhs, s.similarity(&a, &b)?, format!("{} R={:?}", describe(&[&a, &b]), r.rows()))
            }
            Statement::TNormCompatibility | Statement::ImplicationCompatibility => {
                let t: ResiduatedTNorm = t.expect("checked above");
                let (a, ap, b, bp) = (gen(&mut rng), gen(&mut rng), gen(&mut rng), gen(&mut rng));
                let op = |x: &FuzzySet, y: &FuzzySet| -> FuzzySet {
                    let v = x
                        .memberships()
                        .iter()
                        .zip(y.memberships())
                        .map(|(&p, &q)| {
                            if statement == Statement::TNormCompatibility {
                                t.apply(p, q)
                            } else {
                                t.residuum(p, q)
                            }
                        })
                        .collect();
                    FuzzySet::new(un.clone(), v).expect("connectives stay in [0, 1]")
                };
                let lhs = s.similarity(&op(&a, &b), &op(&ap, &bp))?;
                let rhs = t.apply(s.similarity(&a, &ap)?, s.similarity(&b, &bp)?);
                (lhs, rhs, describe(&[&a, &ap, &b, &bp]))
            }
            Statement::Triangle => {
                let (a, b, ap, bp) = (gen(&mut rng), gen(&mut rng), gen(&mut rng), gen(&mut rng));
                let r = check_prop49_bound(&s, &a, &b, &ap, &bp)?;
                (r.rhs, r.lhs, describe(&[&a, &b, &ap, &bp]))
            }
            Statement::InfSup => {
                let (a, b) = (gen(&mut rng), gen(&mut rng));
                let (fa, fb) = (a.memberships(), b.memberships());
                let inf = s.similarity(&a, &b)?;
                let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
                let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lhs = f.eval(min(fa), min(fb)).min(f.eval(max(fa), max(fb)));
                (lhs, inf, describe(&[&a, &b]))
            }
            Statement::ConjunctionPerturbation | Statement::ImplicationPerturbation => {
                let t: ResiduatedTNorm = t.expect("checked above");
                let form = if statement == Statement::ConjunctionPerturbation {
                    RuleForm::Eq1Conjunction
                } else {
                    RuleForm::Eq2Implication
                };
                let vn = Universe::indexed(format!("V{trial}"), "y", rng.gen_range(2..=5))?;
                let a = random_set(&mut rng, &un, 0.05);
                let b = random_set(&mut rng, &vn, 0.0);
                let a1 = perturbed(&mut rng, &a);
                let b1 = perturbed(&mut rng, &b);
                let ap = perturbed(&mut rng, &a);
                let app = perturbed(&mut rng, &ap);
                let rule = RuleBase::new(vec![a.clone()], b.clone(), t.tnorm(), form)?.with_ref(f.clone());
                let r = check_equality_bound(&rule, &ap, &app, &a1, &b1, f)?;
                (r.similarity, r.bound, describe(&[&a, &b, &ap, &app, &a1, &b1]))
            }
        };
        rep.trials += 1;
        let defect = rhs - lhs;
        if defect > CHECK_TOL {
            rep.violations += 1;
            rep.worst = rep.worst.max(defect);
            rep.first_counterexample.get_or_insert(format!("trial {trial}: {lhs} < {rhs} for {witness}"));
        }
    }
    Ok(rep)
}
