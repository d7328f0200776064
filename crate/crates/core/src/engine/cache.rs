//! Vote sums for every possible input, kept current as clauses and weights
//! change. Used for inputs narrow enough to enumerate.

use crate::scalar::Scalar;
use crate::tsetlin::{LiteralVector, TaStateMatrix};

use super::weights::WeightVector;

/// Widest input for which every pattern's vote sum is tabulated.
pub(crate) const MAX_CACHED_INPUTS: usize = 12;

#[derive(Debug, Clone)]
pub(crate) struct VoteCache<F> {
    /// Packed literal word of each input pattern.
    literals: Vec<u64>,
    votes: Vec<F>,
    /// Total weight of clauses with no included literal.
    empty_votes: F,
}

#[inline]
fn fires(mask: u64, literals: u64) -> bool {
    mask & !literals == 0
}

impl<F: Scalar> VoteCache<F> {
    pub(crate) fn supports(n_inputs: usize) -> bool {
        n_inputs <= MAX_CACHED_INPUTS
    }

    pub(crate) fn build(automata: &TaStateMatrix, weights: &WeightVector<F>) -> Self {
        let o = automata.n_inputs();
        debug_assert!(Self::supports(o));
        let literals: Vec<u64> = (0..1usize << o)
            .map(|p| LiteralVector::from_pattern(p, o).words()[0])
            .collect();
        let mut cache = VoteCache {
            votes: vec![F::zero(); literals.len()],
            literals,
            empty_votes: F::zero(),
        };
        for j in 0..automata.n_clauses() {
            cache.replace(0, F::zero(), automata.include_mask(j)[0], weights.get(j));
        }
        cache
    }

    /// Vote sum with empty clauses firing.
    #[inline]
    pub(crate) fn votes(&self, pattern: usize) -> F {
        self.votes[pattern]
    }

    #[inline]
    pub(crate) fn empty_votes(&self) -> F {
        self.empty_votes
    }

    /// Swaps one clause's contribution from `(old_mask, old_w)` to `(new_mask, new_w)`.
    pub(crate) fn replace(&mut self, old_mask: u64, old_w: F, new_mask: u64, new_w: F) {
        if old_mask == new_mask && old_w == new_w {
            return;
        }
        for (v, &l) in self.votes.iter_mut().zip(&self.literals) {
            if old_w != F::zero() && fires(old_mask, l) {
                *v -= old_w;
            }
            if new_w != F::zero() && fires(new_mask, l) {
                *v += new_w;
            }
        }
        if old_mask == 0 {
            self.empty_votes -= old_w;
        }
        if new_mask == 0 {
            self.empty_votes += new_w;
        }
    }
}
