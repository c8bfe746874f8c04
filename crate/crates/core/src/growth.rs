//! Hook-length dimensions and the Plancherel growth process, an independent
//! check on transition measures.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha20Rng;

use crate::diagrams::Partition;
use crate::scalar::{Rat, Scalar};
use crate::transition::AtomicMeasure;

/// Name of the generator used by [`GrowthSampler`], reported in CLI metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha, seeded with seed_from_u64)";

/// Number of standard Young tableaux of shape `p`, by the hook-length formula.
pub fn dimension(p: &Partition) -> BigUint {
    let n = p.size();
    let factorial = (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k));
    let hooks = p
        .hooks()
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * BigUint::from(h));
    factorial / hooks
}

/// Law of the content of the box added to `p` by one step of the Plancherel
/// growth process: `f^μ / ((n + 1) f^λ)` at the content of `μ / λ`.
pub fn growth_probabilities(p: &Partition) -> AtomicMeasure<Rat> {
    let denom = BigInt::from(dimension(p)) * BigInt::from(p.size() + 1);
    let mut atoms: Vec<(Rat, Rat)> = p
        .addable_rows()
        .into_iter()
        .map(|j| {
            let mu = p.with_box_added(j).expect("addable row");
            (
                Rat::from_i64(p.addable_content(j)),
                Rat::new(BigInt::from(dimension(&mu)), denom.clone()),
            )
        })
        .collect();
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    AtomicMeasure::new(atoms).expect("branching rule sums to one")
}

/// A Plancherel growth trajectory generator owning its RNG.
pub struct GrowthSampler {
    rng: ChaCha20Rng,
    current: Partition,
}

impl GrowthSampler {
    pub fn new(seed: u64) -> Self {
        GrowthSampler {
            rng: ChaCha20Rng::seed_from_u64(seed),
            current: Partition::empty(),
        }
    }

    pub fn current(&self) -> &Partition {
        &self.current
    }

    /// Adds one box and returns the new diagram.
    pub fn step(&mut self) -> &Partition {
        let rows = self.current.addable_rows();
        let law = growth_probabilities(&self.current);
        // atoms are ordered by content, addable rows by decreasing content
        let weights: Vec<f64> = law.atoms().iter().rev().map(|(_, w)| w.to_f64()).collect();
        let pick = WeightedIndex::new(&weights).expect("positive weights");
        let j = rows[pick.sample(&mut self.rng)];
        self.current = self.current.with_box_added(j).expect("addable row");
        &self.current
    }
}

/// The trajectory `∅ = λ⁰, λ¹, …, λ^steps`.
pub fn sample_growth(steps: usize, seed: u64) -> Vec<Partition> {
    let mut sampler = GrowthSampler::new(seed);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(Partition::empty());
    for _ in 0..steps {
        out.push(sampler.step().clone());
    }
    out
}
