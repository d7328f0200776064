use rand::Rng;

use crate::datagen::{Dataset, Normalizer, Sample};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tsetlin::{LiteralVector, TaStateMatrix};

use super::cache::VoteCache;
use super::params::{EmptyClausePolicy, RtmParams};
use super::weights::WeightVector;

/// A regression Tsetlin machine: automata, clause weights and the target
/// normalizer.
///
/// The output is `clamp(sum_j w_j c_j / T, 0, 1)` mapped back to target
/// units. For inputs of at most 12 bits the model also keeps the vote sum of
/// every possible input up to date, which makes prediction O(1).
#[derive(Debug, Clone)]
pub struct RtmModel<F: Scalar> {
    pub(crate) params: RtmParams<F>,
    pub(crate) automata: TaStateMatrix,
    pub(crate) weights: WeightVector<F>,
    pub(crate) normalizer: Normalizer<F>,
    pub(crate) cache: Option<VoteCache<F>>,
}

impl<F: Scalar> RtmModel<F> {
    pub fn new<R: Rng + ?Sized>(
        params: RtmParams<F>,
        n_inputs: usize,
        normalizer: Normalizer<F>,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        let automata = TaStateMatrix::new(
            params.clauses,
            n_inputs,
            params.n_states,
            params.ta_init,
            rng,
        )?;
        let weights = WeightVector::initial(params.variant, params.clauses);
        Self::from_parts(params, automata, weights, normalizer)
    }

    /// Assembles a model from explicit state, e.g. a loaded model file.
    pub fn from_parts(
        params: RtmParams<F>,
        automata: TaStateMatrix,
        weights: WeightVector<F>,
        normalizer: Normalizer<F>,
    ) -> Result<Self> {
        params.validate()?;
        if automata.n_clauses() != params.clauses || weights.len() != params.clauses {
            return Err(Error::invalid(format!(
                "clause count mismatch: params {}, automata {}, weights {}",
                params.clauses,
                automata.n_clauses(),
                weights.len()
            )));
        }
        if automata.n_states() != params.n_states {
            return Err(Error::invalid("automata and params disagree on N"));
        }
        if !weights.matches(params.variant) {
            return Err(Error::invalid(format!(
                "weight kind {:?} does not fit variant {}",
                weights.kind(),
                params.variant
            )));
        }
        let cache = VoteCache::<F>::supports(automata.n_inputs())
            .then(|| VoteCache::build(&automata, &weights));
        Ok(RtmModel {
            params,
            automata,
            weights,
            normalizer,
            cache,
        })
    }

    pub fn params(&self) -> &RtmParams<F> {
        &self.params
    }

    pub fn automata(&self) -> &TaStateMatrix {
        &self.automata
    }

    pub fn weights(&self) -> &WeightVector<F> {
        &self.weights
    }

    pub fn normalizer(&self) -> Normalizer<F> {
        self.normalizer
    }

    pub fn n_inputs(&self) -> usize {
        self.automata.n_inputs()
    }

    pub fn n_clauses(&self) -> usize {
        self.params.clauses
    }

    /// Replaces the weights, e.g. to switch clauses off by hand.
    pub fn set_weights(&mut self, weights: WeightVector<F>) -> Result<()> {
        if weights.len() != self.params.clauses || !weights.matches(self.params.variant) {
            return Err(Error::invalid("weights do not fit this model"));
        }
        self.weights = weights;
        self.rebuild_cache();
        Ok(())
    }

    /// Overwrites one automaton state.
    pub fn set_state(&mut self, clause: usize, literal: usize, state: u32) -> Result<()> {
        self.automata.set_state(clause, literal, state)?;
        self.rebuild_cache();
        Ok(())
    }

    pub(crate) fn rebuild_cache(&mut self) {
        if self.cache.is_some() {
            self.cache = Some(VoteCache::build(&self.automata, &self.weights));
        }
    }

    pub fn encode(&self, x: &[u8]) -> Result<LiteralVector> {
        if x.len() != self.n_inputs() {
            return Err(Error::WidthMismatch {
                expected: self.n_inputs(),
                found: x.len(),
            });
        }
        LiteralVector::from_bits(x)
    }

    pub(crate) fn check_literals(&self, literals: &LiteralVector) -> Result<()> {
        if literals.n_inputs() != self.n_inputs() {
            return Err(Error::WidthMismatch {
                expected: self.n_inputs(),
                found: literals.n_inputs(),
            });
        }
        Ok(())
    }

    /// Clause outputs `c_j` with empty clauses firing.
    pub fn clause_outputs(&self, literals: &LiteralVector) -> Vec<bool> {
        (0..self.n_clauses())
            .map(|j| self.automata.clause_fires(j, literals, true))
            .collect()
    }

    /// `sum_j w_j c_j`, evaluated clause by clause with empty clauses firing.
    pub fn predict_raw(&self, literals: &LiteralVector) -> F {
        self.votes_direct(literals, true)
    }

    fn votes_direct(&self, literals: &LiteralVector, empty_output: bool) -> F {
        let mut sum = F::zero();
        for j in 0..self.n_clauses() {
            if self.automata.clause_fires(j, literals, empty_output) {
                sum += self.weights.get(j);
            }
        }
        sum
    }

    /// Vote sum used for prediction, honoring the empty-clause policy.
    pub fn inference_votes(&self, literals: &LiteralVector) -> F {
        let empty_output = self.params.empty_clause == EmptyClausePolicy::Fires;
        match &self.cache {
            Some(cache) => {
                let v = cache.votes(pattern_of(literals));
                if empty_output {
                    v
                } else {
                    v - cache.empty_votes()
                }
            }
            None => self.votes_direct(literals, empty_output),
        }
    }

    /// Vote sum with empty clauses firing, from the cache when available.
    pub(crate) fn training_votes(&self, literals: &LiteralVector) -> F {
        match &self.cache {
            Some(cache) => cache.votes(pattern_of(literals)),
            None => self.votes_direct(literals, true),
        }
    }

    /// Prediction in target units from a vote sum.
    pub fn output_from_votes(&self, votes: F) -> F {
        let t = self.params.resolution_f();
        self.normalizer.from_votes(votes.max(F::zero()).min(t), t)
    }

    /// Normalized prediction `clamp(votes / T, 0, 1)`.
    pub fn normalized_output(&self, votes: F) -> F {
        (votes / self.params.resolution_f())
            .max(F::zero())
            .min(F::one())
    }

    pub fn predict_literals(&self, literals: &LiteralVector) -> F {
        self.output_from_votes(self.inference_votes(literals))
    }

    /// Prediction in target units for a binary input.
    pub fn predict(&self, x: &[u8]) -> Result<F> {
        Ok(self.predict_literals(&self.encode(x)?))
    }

    pub fn predict_samples(&self, samples: &[Sample<F>]) -> Result<Vec<F>> {
        samples.iter().map(|s| self.predict(&s.x)).collect()
    }

    pub fn predict_dataset(&self, data: &Dataset<F>) -> Result<Vec<F>> {
        if data.n_bits() != self.n_inputs() {
            return Err(Error::WidthMismatch {
                expected: self.n_inputs(),
                found: data.n_bits(),
            });
        }
        self.predict_samples(data.samples())
    }

    /// Literal indices included by clause `j`.
    pub fn include_set(&self, j: usize) -> Result<Vec<usize>> {
        self.automata.include_set(j)
    }
}

/// Input pattern index of a literal vector: bit `i` is input `i`.
#[inline]
pub(crate) fn pattern_of(literals: &LiteralVector) -> usize {
    let o = literals.n_inputs();
    (literals.words()[0] & ((1u64 << o) - 1)) as usize
}
