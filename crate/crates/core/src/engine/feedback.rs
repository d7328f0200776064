//! Feedback dispatch: which feedback type a prediction earns, which clauses
//! are activated, and which automata each feedback kind touches.

use rand::Rng;

use crate::scalar::Scalar;
use crate::tsetlin::{FeedbackSets, LiteralVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feedback {
    /// Prediction below target: push clauses toward firing.
    TypeI,
    /// Prediction above target: push firing clauses toward silence.
    TypeII,
    None,
}

pub fn feedback_type<F: Scalar>(y_norm: F, target_norm: F) -> Feedback {
    if y_norm < target_norm {
        Feedback::TypeI
    } else if y_norm > target_norm {
        Feedback::TypeII
    } else {
        Feedback::None
    }
}

/// Per-clause activation probability: the normalized absolute error, which is
/// the vote-unit error divided by `T`.
pub fn activation_probability<F: Scalar>(y_norm: F, target_norm: F) -> f64 {
    (y_norm - target_norm).abs().to_f64_lossy().clamp(0.0, 1.0)
}

/// Draws the activation mask `P`: each clause independently with
/// [`activation_probability`].
pub fn clause_activation<F: Scalar, R: Rng + ?Sized>(
    y_norm: F,
    target_norm: F,
    clauses: usize,
    rng: &mut R,
) -> Vec<bool> {
    let mut active = Vec::new();
    sample_active(
        activation_probability(y_norm, target_norm),
        clauses,
        rng,
        &mut active,
    );
    let mut mask = vec![false; clauses];
    for j in active {
        mask[j] = true;
    }
    mask
}

/// Indices of clauses drawn i.i.d. with probability `p`, in increasing order.
///
/// Skips ahead by geometric gaps, so the cost is proportional to the number of
/// clauses selected.
pub(crate) fn sample_active<R: Rng + ?Sized>(
    p: f64,
    clauses: usize,
    rng: &mut R,
    out: &mut Vec<usize>,
) {
    out.clear();
    if p <= 0.0 || clauses == 0 {
        return;
    }
    if p >= 1.0 {
        out.extend(0..clauses);
        return;
    }
    // Gap to the next selected clause is Geometric(p): floor(ln U / ln(1 - p)).
    let log_q = (-p).ln_1p();
    let mut j = 0usize;
    loop {
        let u = 1.0 - rng.random::<f64>();
        let gap = (u.ln() / log_q).floor();
        if gap.is_nan() || gap >= (clauses - j) as f64 {
            break;
        }
        j += gap as usize;
        out.push(j);
        j += 1;
        if j >= clauses {
            break;
        }
    }
}

#[inline]
pub(crate) fn draw_q<R: Rng + ?Sized>(inv_s: f64, rng: &mut R) -> bool {
    inv_s >= 1.0 || rng.random::<f64>() < inv_s
}

/// Type II pairs for one activated clause.
fn push_type_ii(j: usize, fired: bool, literals: &LiteralVector, sets: &mut FeedbackSets) {
    if fired {
        sets.ii.extend(
            (0..literals.len())
                .filter(|&k| !literals.get(k))
                .map(|k| (j, k)),
        );
    }
}

/// `{(j, k) | l_k = 1, c_j = 1, p_j = 1}`
pub fn select_type_ia(
    fired: &[bool],
    active: &[bool],
    literals: &LiteralVector,
) -> Vec<(usize, usize)> {
    assert_eq!(fired.len(), active.len());
    let mut out = Vec::new();
    for j in (0..fired.len()).filter(|&j| active[j] && fired[j]) {
        out.extend(
            (0..literals.len())
                .filter(|&k| literals.get(k))
                .map(|k| (j, k)),
        );
    }
    out
}

/// `{(j, k) | (l_k = 0 or c_j = 0), p_j = 1, q_jk = 1}` with `q_jk ~ Bernoulli(1/s)`
/// drawn per candidate pair in `(j, k)` order.
pub fn select_type_ib<F: Scalar, R: Rng + ?Sized>(
    fired: &[bool],
    active: &[bool],
    literals: &LiteralVector,
    specificity: F,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    assert_eq!(fired.len(), active.len());
    let inv_s = 1.0 / specificity.to_f64_lossy();
    let mut out = Vec::new();
    for j in (0..fired.len()).filter(|&j| active[j]) {
        for k in 0..literals.len() {
            if !(fired[j] && literals.get(k)) && draw_q(inv_s, rng) {
                out.push((j, k));
            }
        }
    }
    out
}

/// `{(j, k) | l_k = 0, c_j = 1, p_j = 1}`
pub fn select_type_ii(
    fired: &[bool],
    active: &[bool],
    literals: &LiteralVector,
) -> Vec<(usize, usize)> {
    assert_eq!(fired.len(), active.len());
    let mut sets = FeedbackSets::default();
    for j in (0..fired.len()).filter(|&j| active[j]) {
        push_type_ii(j, fired[j], literals, &mut sets);
    }
    sets.ii
}
