use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mean absolute error.
pub fn mae<F: Scalar>(predictions: &[F], targets: &[F]) -> Result<F> {
    if predictions.len() != targets.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::invalid("mae of an empty set"));
    }
    let total: F = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (*p - *t).abs())
        .sum();
    Ok(total / F::from_usize(targets.len()).expect("length fits a float"))
}
