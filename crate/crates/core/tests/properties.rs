use hsbar_core::algebra::{Implication, ResiduatedTNorm, TNorm};
use hsbar_core::bench::{scaling_sweep, Arm, SweepConfig};
use hsbar_core::equivalence::RefSpec;
use hsbar_core::fuzzyset::{FuzzySet, SimilaritySpec, Universe};
use hsbar_core::hier::{hier_infer_alg1, HierPlan};
use hsbar_core::sample::random_rule;
use hsbar_core::sbar::{infer_flat, InferOptions, RuleForm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tnorms() -> impl Strategy<Value = TNorm> {
    prop_oneof![
        Just(TNorm::Minimum),
        Just(TNorm::Product),
        Just(TNorm::Lukasiewicz),
        Just(TNorm::NilpotentMinimum),
    ]
}

proptest! {
    #[test]
    fn adjunction(t in tnorms(), x in 0.0..=1.0f64, y in 0.0..=1.0f64, z in 0.0..=1.0f64) {
        let r = ResiduatedTNorm::new(t).unwrap();
        // T(x, z) <= y  iff  z <= I_T(x, y), away from the boundary.
        let lhs = r.apply(x, z) <= y + 1e-9;
        let rhs = z <= r.residuum(x, y) + 1e-9;
        if (r.apply(x, z) - y).abs() > 1e-6 && (z - r.residuum(x, y)).abs() > 1e-6 {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn residuum_closed_forms_agree(x in 0.0..=1.0f64, y in 0.0..=1.0f64) {
        let l = ResiduatedTNorm::new(TNorm::Lukasiewicz).unwrap();
        prop_assert!((l.residuum(x, y) - Implication::Lukasiewicz.eval(x, y)).abs() < 1e-12);
        let p = ResiduatedTNorm::new(TNorm::Product).unwrap();
        prop_assert!((p.residuum(x, y) - Implication::Goguen.eval(x, y)).abs() < 1e-12);
    }

    #[test]
    fn similarity_axioms(a in prop::collection::vec(0.0..=1.0f64, 4), b in prop::collection::vec(0.0..=1.0f64, 4)) {
        let u = Universe::indexed("U", "x", 4).unwrap();
        let f: RefSpec = "composed:tnorm:lukasiewicz:lukasiewicz".parse().unwrap();
        let s = SimilaritySpec::new(f);
        let (a, b) = (FuzzySet::new(u.clone(), a).unwrap(), FuzzySet::new(u, b).unwrap());
        prop_assert!((s.similarity(&a, &b).unwrap() - s.similarity(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((s.similarity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn implication_form_is_antitone_in_similarity(seed in any::<u64>()) {
        // Closer inputs never widen the output.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rule, inputs) = random_rule(&mut rng, &[3, 2], 3, TNorm::Product, RuleForm::Eq2Implication, 0.0).unwrap();
        let got = infer_flat(&rule, &inputs, &InferOptions::default()).unwrap();
        let exact = infer_flat(&rule, rule.antecedents(), &InferOptions::default()).unwrap();
        prop_assert!(exact.similarity_used.get() >= got.similarity_used.get() - 1e-12);
        for (e, g) in exact.output.memberships().iter().zip(got.output.memberships()) {
            prop_assert!(*e <= g + 1e-12);
        }
    }

    #[test]
    fn inf_chain_matches_flat(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = vec![3; n];
        let (rule, inputs) = random_rule(&mut rng, &sizes, 4, TNorm::Minimum, RuleForm::Eq2Implication, 0.0).unwrap();
        let flat = infer_flat(&rule, &inputs, &InferOptions::default()).unwrap();
        let hier = hier_infer_alg1(&rule, &inputs, &HierPlan::innermost_first(n), &InferOptions::default()).unwrap();
        prop_assert!(flat.output.approx_eq(&hier.output, 1e-12));
    }
}

#[test]
fn ten_antecedents_stay_cheap_hierarchically() {
    let mut cfg = SweepConfig::new(10, 10, 4, 4);
    cfg.trials = 1;
    let rep = scaling_sweep(&cfg).unwrap();
    let flat = rep.points.iter().find(|p| p.arm == Arm::Flat).unwrap();
    assert!(flat.cells > 1_000_000);
    let reduced = rep.ops(Arm::HierReduced, 10).unwrap();
    assert!(reduced < 500, "{reduced}");
}
