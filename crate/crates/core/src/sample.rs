//! Seeded random instances.

use rand::Rng;

use crate::algebra::TNorm;
use crate::error::Result;
use crate::fuzzyset::{FuzzySet, Universe};
use crate::sbar::{RuleBase, RuleForm};

/// Memberships drawn uniformly from `[lo, 1]`.
pub fn random_set<R: Rng>(rng: &mut R, universe: &std::sync::Arc<Universe>, lo: f64) -> FuzzySet {
    let v = (0..universe.len()).map(|_| rng.gen_range(lo..=1.0)).collect();
    FuzzySet::new(universe.clone(), v).expect("memberships drawn inside [0, 1]")
}

/// A rule with antecedents over universes of the given sizes, a consequent
/// of size `m`, and one random input per antecedent. Memberships are drawn
/// from `[lo, 1]`; inputs always from `[max(lo, 0.05), 1]` so they are
/// non-empty.
pub fn random_rule<R: Rng>(
    rng: &mut R,
    sizes: &[usize],
    m: usize,
    t: TNorm,
    form: RuleForm,
    lo: f64,
) -> Result<(RuleBase, Vec<FuzzySet>)> {
    let mut antecedents = Vec::with_capacity(sizes.len());
    let mut inputs = Vec::with_capacity(sizes.len());
    for (i, &u) in sizes.iter().enumerate() {
        let universe = Universe::indexed(format!("U{}", i + 1), &format!("x{}_", i + 1), u)?;
        antecedents.push(random_set(rng, &universe, lo));
        inputs.push(random_set(rng, &universe, lo.max(0.05)));
    }
    let v = Universe::indexed("V", "y", m)?;
    let b = random_set(rng, &v, lo);
    Ok((RuleBase::new(antecedents, b, t, form)?, inputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_and_in_range() {
        let mk = || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            random_rule(&mut rng, &[2, 3], 4, TNorm::Product, RuleForm::Eq2Implication, 0.2).unwrap()
        };
        let (r1, i1) = mk();
        let (r2, i2) = mk();
        assert_eq!(i1, i2);
        assert_eq!(r1.consequent(), r2.consequent());
        assert!(r1.antecedents().iter().all(|a| a.memberships().iter().all(|&v| (0.2..=1.0).contains(&v))));
    }
}
