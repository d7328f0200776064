use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bench::metrics::mae;
use crate::datagen::{Dataset, Sample};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tsetlin::LiteralVector;

use super::feedback::{activation_probability, draw_q, feedback_type, sample_active, Feedback};
use super::model::RtmModel;
use super::weights::WeightKind;

/// What one training step saw and did.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace<F> {
    pub feedback: Feedback,
    /// Raw vote sum before the step, empty clauses firing.
    pub votes: F,
    pub y_norm: F,
    pub target_norm: F,
    /// Clauses selected for feedback (`p_j = 1`), ascending.
    pub activated: Vec<usize>,
    /// `c_j` of each activated clause, before the step.
    pub fired: Vec<bool>,
}

impl<F> StepTrace<F> {
    /// Dense `P` over `m` clauses.
    pub fn activation_mask(&self, clauses: usize) -> Vec<bool> {
        let mut mask = vec![false; clauses];
        for &j in &self.activated {
            mask[j] = true;
        }
        mask
    }
}

impl<F: Scalar> RtmModel<F> {
    /// One online update from a sample whose target is in original units.
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        sample: &Sample<F>,
        rng: &mut R,
    ) -> Result<StepTrace<F>> {
        let literals = self.encode(&sample.x)?;
        self.train_literals(&literals, sample.y, rng)
    }

    pub fn train_literals<R: Rng + ?Sized>(
        &mut self,
        literals: &LiteralVector,
        target: F,
        rng: &mut R,
    ) -> Result<StepTrace<F>> {
        self.check_literals(literals)?;
        let mut activated = Vec::new();
        let mut fired = Vec::new();
        let (feedback, votes, y_norm, target_norm) =
            self.step(literals, target, rng, &mut activated, Some(&mut fired));
        Ok(StepTrace {
            feedback,
            votes,
            y_norm,
            target_norm,
            activated,
            fired,
        })
    }

    /// Prediction, feedback dispatch, automaton updates and weight updates for
    /// one sample. Everything is derived from the clause outputs and
    /// activation drawn before any state changes.
    fn step<R: Rng + ?Sized>(
        &mut self,
        literals: &LiteralVector,
        target: F,
        rng: &mut R,
        activated: &mut Vec<usize>,
        mut fired_out: Option<&mut Vec<bool>>,
    ) -> (Feedback, F, F, F) {
        let t = self.params.resolution_f();
        let votes = self.training_votes(literals);
        let y_norm = self.normalized_output(votes);
        let target_norm = self.normalizer.to_votes(target, t) / t;
        let feedback = feedback_type(y_norm, target_norm);
        activated.clear();
        if feedback == Feedback::None {
            return (feedback, votes, y_norm, target_norm);
        }
        sample_active(
            activation_probability(y_norm, target_norm),
            self.params.clauses,
            rng,
            activated,
        );

        let inv_s = 1.0 / self.params.specificity.to_f64_lossy();
        let decrement_requires_fire = self.params.decrement_requires_fire;
        let alpha = self.params.alpha;
        let rule = self.params.real_rule;
        let RtmModel {
            automata,
            weights,
            cache,
            ..
        } = self;

        for &j in activated.iter() {
            let fired = automata.clause_fires(j, literals, true);
            if let Some(out) = fired_out.as_deref_mut() {
                out.push(fired);
            }
            let old_mask = cache.as_ref().map(|_| automata.include_mask(j)[0]);
            let old_w = weights.get(j);

            match feedback {
                Feedback::TypeI => {
                    for k in 0..literals.len() {
                        if fired && literals.get(k) {
                            automata.increment(j, k);
                        } else if draw_q(inv_s, rng) {
                            automata.decrement(j, k);
                        }
                    }
                }
                Feedback::TypeII => {
                    if fired {
                        for k in 0..literals.len() {
                            if !literals.get(k) {
                                automata.increment(j, k);
                            }
                        }
                    }
                }
                Feedback::None => unreachable!(),
            }
            weights.step(j, feedback, fired, decrement_requires_fire, alpha, rule);

            if let (Some(cache), Some(old_mask)) = (cache.as_mut(), old_mask) {
                cache.replace(old_mask, old_w, automata.include_mask(j)[0], weights.get(j));
            }
        }
        (feedback, votes, y_norm, target_norm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochMetrics<F> {
    /// 0 for the untrained model.
    pub epoch: usize,
    pub train_mae: F,
    pub test_mae: F,
}

/// Learning curve and final state of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport<F> {
    pub initial: EpochMetrics<F>,
    /// One entry per completed epoch.
    pub epochs: Vec<EpochMetrics<F>>,
    pub final_weights: Vec<F>,
    pub include_sets: Vec<Vec<usize>>,
    pub elapsed: Duration,
}

impl<F: Scalar> RunReport<F> {
    /// Metrics after the last epoch, or of the initial model for a zero-epoch run.
    pub fn final_metrics(&self) -> EpochMetrics<F> {
        *self.epochs.last().unwrap_or(&self.initial)
    }

    pub fn curve(&self) -> impl Iterator<Item = &EpochMetrics<F>> {
        std::iter::once(&self.initial).chain(&self.epochs)
    }
}

struct Encoded<F> {
    literals: LiteralVector,
    target: F,
}

fn encode_all<F: Scalar>(model: &RtmModel<F>, data: &Dataset<F>) -> Result<Vec<Encoded<F>>> {
    data.samples()
        .iter()
        .map(|s| {
            Ok(Encoded {
                literals: model.encode(&s.x)?,
                target: s.y,
            })
        })
        .collect()
}

fn evaluate<F: Scalar>(model: &RtmModel<F>, data: &[Encoded<F>]) -> Result<F> {
    let preds: Vec<F> = data
        .iter()
        .map(|e| model.predict_literals(&e.literals))
        .collect();
    let targets: Vec<F> = data.iter().map(|e| e.target).collect();
    mae(&preds, &targets)
}

/// Trains for `epochs` passes over `train` in a freshly shuffled order each
/// epoch, recording train and test MAE in target units after every epoch.
pub fn fit<F: Scalar, R: Rng + ?Sized>(
    model: &mut RtmModel<F>,
    train: &Dataset<F>,
    test: &Dataset<F>,
    epochs: usize,
    rng: &mut R,
) -> Result<RunReport<F>> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::invalid("training and test sets must be non-empty"));
    }
    for data in [train, test] {
        if data.n_bits() != model.n_inputs() {
            return Err(Error::WidthMismatch {
                expected: model.n_inputs(),
                found: data.n_bits(),
            });
        }
        if data.normalizer() != model.normalizer() {
            return Err(Error::invalid(
                "dataset and model use different target ranges",
            ));
        }
    }
    let start = Instant::now();
    let train_enc = encode_all(model, train)?;
    let test_enc = encode_all(model, test)?;

    let initial = EpochMetrics {
        epoch: 0,
        train_mae: evaluate(model, &train_enc)?,
        test_mae: evaluate(model, &test_enc)?,
    };
    let mut order: Vec<usize> = (0..train_enc.len()).collect();
    let mut activated = Vec::new();
    let mut history = Vec::with_capacity(epochs);
    for epoch in 1..=epochs {
        order.shuffle(rng);
        for &i in &order {
            let e = &train_enc[i];
            model.step(&e.literals, e.target, rng, &mut activated, None);
        }
        if model.weights.kind() == WeightKind::Real {
            // Incremental float updates drift; resync once per epoch.
            model.rebuild_cache();
        }
        history.push(EpochMetrics {
            epoch,
            train_mae: evaluate(model, &train_enc)?,
            test_mae: evaluate(model, &test_enc)?,
        });
    }
    let include_sets = (0..model.n_clauses())
        .map(|j| model.include_set(j))
        .collect::<Result<_>>()?;
    Ok(RunReport {
        initial,
        epochs: history,
        final_weights: model.weights.to_vec(),
        include_sets,
        elapsed: start.elapsed(),
    })
}
