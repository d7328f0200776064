use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::feedback::Feedback;
use super::params::{RealWeightRule, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Unity,
    Integer,
    Real,
}

/// Per-clause weights. Unity weights carry no storage.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightVector<F> {
    Unity { len: usize },
    Integer(Vec<u64>),
    Real(Vec<F>),
}

impl<F: Scalar> WeightVector<F> {
    /// Initial weights: all zero for integer weights, all one for real weights.
    pub fn initial(variant: Variant, len: usize) -> Self {
        match variant {
            Variant::Rtm => WeightVector::Unity { len },
            Variant::RtmIw => WeightVector::Integer(vec![0; len]),
            Variant::RtmRw => WeightVector::Real(vec![F::one(); len]),
        }
    }

    pub fn real(values: Vec<F>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|w| !(w.is_finite() && **w >= F::zero())) {
            return Err(Error::invalid(format!(
                "real weight {bad} is negative or not finite"
            )));
        }
        Ok(WeightVector::Real(values))
    }

    pub fn kind(&self) -> WeightKind {
        match self {
            WeightVector::Unity { .. } => WeightKind::Unity,
            WeightVector::Integer(_) => WeightKind::Integer,
            WeightVector::Real(_) => WeightKind::Real,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            WeightVector::Unity { len } => *len,
            WeightVector::Integer(w) => w.len(),
            WeightVector::Real(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, j: usize) -> F {
        match self {
            WeightVector::Unity { len } => {
                assert!(j < *len, "clause {j} out of range");
                F::one()
            }
            WeightVector::Integer(w) => F::from_count(w[j]),
            WeightVector::Real(w) => w[j],
        }
    }

    pub fn to_vec(&self) -> Vec<F> {
        (0..self.len()).map(|j| self.get(j)).collect()
    }

    pub fn as_integer(&self) -> Option<&[u64]> {
        match self {
            WeightVector::Integer(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&[F]> {
        match self {
            WeightVector::Real(w) => Some(w),
            _ => None,
        }
    }

    pub fn matches(&self, variant: Variant) -> bool {
        matches!(
            (self.kind(), variant),
            (WeightKind::Unity, Variant::Rtm)
                | (WeightKind::Integer, Variant::RtmIw)
                | (WeightKind::Real, Variant::RtmRw)
        )
    }

    /// One clause's weight update. Returns whether the weight changed.
    #[inline]
    pub(crate) fn step(
        &mut self,
        j: usize,
        feedback: Feedback,
        fired: bool,
        decrement_requires_fire: bool,
        alpha: F,
        rule: RealWeightRule,
    ) -> bool {
        match self {
            WeightVector::Unity { .. } => false,
            WeightVector::Integer(w) => {
                let next = integer_step(w[j], feedback, fired, decrement_requires_fire);
                let changed = next != w[j];
                w[j] = next;
                changed
            }
            WeightVector::Real(w) => {
                let next = real_step(w[j], feedback, fired, decrement_requires_fire, alpha, rule);
                let changed = next != w[j];
                w[j] = next;
                changed
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Up,
    Down,
    Stay,
}

#[inline]
fn branch(
    feedback: Feedback,
    fired: bool,
    positive: bool,
    decrement_requires_fire: bool,
) -> Branch {
    match feedback {
        Feedback::TypeI if fired => Branch::Up,
        Feedback::TypeII if positive && (fired || !decrement_requires_fire) => Branch::Down,
        _ => Branch::Stay,
    }
}

/// Unit increment on Type I for a firing clause, unit decrement on Type II
/// while positive. Only called for clauses selected for feedback.
#[inline]
fn integer_step(w: u64, feedback: Feedback, fired: bool, decrement_requires_fire: bool) -> u64 {
    match branch(feedback, fired, w > 0, decrement_requires_fire) {
        Branch::Up => w + 1,
        Branch::Down => w - 1,
        Branch::Stay => w,
    }
}

#[inline]
fn real_step<F: Scalar>(
    w: F,
    feedback: Feedback,
    fired: bool,
    decrement_requires_fire: bool,
    alpha: F,
    rule: RealWeightRule,
) -> F {
    match (
        branch(feedback, fired, w > F::zero(), decrement_requires_fire),
        rule,
    ) {
        (Branch::Up, RealWeightRule::Multiplicative) => w * (F::one() + alpha),
        (Branch::Down, RealWeightRule::Multiplicative) => w * (F::one() - alpha),
        (Branch::Up, RealWeightRule::Additive) => w + alpha,
        (Branch::Down, RealWeightRule::Additive) => (w - alpha).max(F::zero()),
        (Branch::Stay, _) => w,
    }
}

/// Integer weight update over all clauses for one round, given the clause
/// outputs and activation mask computed before the round.
pub fn update_weights_integer(
    w: &mut [u64],
    feedback: Feedback,
    fired: &[bool],
    active: &[bool],
    decrement_requires_fire: bool,
) {
    assert_eq!(w.len(), fired.len());
    assert_eq!(w.len(), active.len());
    for j in 0..w.len() {
        if active[j] {
            w[j] = integer_step(w[j], feedback, fired[j], decrement_requires_fire);
        }
    }
}

/// Real-weight counterpart of [`update_weights_integer`].
pub fn update_weights_real<F: Scalar>(
    w: &mut [F],
    feedback: Feedback,
    fired: &[bool],
    active: &[bool],
    alpha: F,
    rule: RealWeightRule,
    decrement_requires_fire: bool,
) {
    assert_eq!(w.len(), fired.len());
    assert_eq!(w.len(), active.len());
    for j in 0..w.len() {
        if active[j] {
            w[j] = real_step(
                w[j],
                feedback,
                fired[j],
                decrement_requires_fire,
                alpha,
                rule,
            );
        }
    }
}
