//! Stochastic point location on a discretized unit interval.
//!
//! A learner at `lambda` in `{0, 1/N, ..., 1}` moves one step right when the
//! environment says "increase" and one step left on "decrease", staying put
//! when that would leave `[0, 1]`. The environment points toward the unknown
//! `lambda*` with probability `p > 0.5`.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default starting point of a search.
pub const DEFAULT_INITIAL_LAMBDA: f64 = 0.5;

/// Grid position `index / n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplState {
    index: u64,
    n_steps: u64,
}

impl SplState {
    pub fn at_index(index: u64, n_steps: u64) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::invalid("SPL resolution N must be at least 1"));
        }
        if index > n_steps {
            return Err(Error::invalid(format!(
                "grid index {index} beyond N = {n_steps}"
            )));
        }
        Ok(SplState { index, n_steps })
    }

    /// The grid point equal to `lambda`; fails unless `lambda * N` is an
    /// integer within 1e-9.
    pub fn new<F: Scalar>(lambda: F, n_steps: u64) -> Result<Self> {
        let scaled = lambda.to_f64_lossy() * n_steps as f64;
        let index = scaled.round();
        if !(0.0..=n_steps as f64).contains(&index) || (scaled - index).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "lambda {lambda} is not on the grid of resolution {n_steps}"
            )));
        }
        Self::at_index(index as u64, n_steps)
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn n_steps(&self) -> u64 {
        self.n_steps
    }

    pub fn lambda<F: Scalar>(&self) -> F {
        F::from_count(self.index) / F::from_count(self.n_steps)
    }
}

/// One step: right on `increase`, left otherwise, absorbing at the ends.
pub fn spl_step(state: SplState, increase: bool) -> SplState {
    let index = if increase {
        (state.index + 1).min(state.n_steps)
    } else {
        state.index.saturating_sub(1)
    };
    SplState { index, ..state }
}

/// An informative environment around `lambda_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplEnvironment<F> {
    lambda_star: F,
    p: F,
}

impl<F: Scalar> SplEnvironment<F> {
    pub fn new(lambda_star: F, p: F) -> Result<Self> {
        if !(lambda_star >= F::zero() && lambda_star <= F::one()) {
            return Err(Error::invalid(format!(
                "lambda* = {lambda_star} outside [0, 1]"
            )));
        }
        let half = F::from_f64_lossy(0.5);
        if !(p > half && p <= F::one()) {
            return Err(Error::invalid(format!("p = {p} must lie in (0.5, 1]")));
        }
        Ok(SplEnvironment { lambda_star, p })
    }

    pub fn lambda_star(&self) -> F {
        self.lambda_star
    }

    pub fn p(&self) -> F {
        self.p
    }

    /// The environment's advice at `state`: `true` means "increase". At
    /// `lambda*` itself both directions are equally wrong and a fair coin
    /// decides.
    pub fn signal<R: Rng + ?Sized>(&self, state: SplState, rng: &mut R) -> bool {
        let lambda: F = state.lambda();
        if lambda == self.lambda_star {
            return rng.random_bool(0.5);
        }
        let toward = lambda < self.lambda_star;
        if rng.random::<f64>() < self.p.to_f64_lossy() {
            toward
        } else {
            !toward
        }
    }
}

/// Runs `steps` updates; the result holds the start point followed by every
/// visited position (`steps + 1` values).
pub fn spl_run<F: Scalar, R: Rng + ?Sized>(
    env: &SplEnvironment<F>,
    init: SplState,
    steps: usize,
    rng: &mut R,
) -> Result<Vec<F>> {
    if steps == 0 {
        return Err(Error::invalid("an SPL run needs at least one step"));
    }
    let mut state = init;
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(state.lambda());
    for _ in 0..steps {
        state = spl_step(state, env.signal(state, rng));
        trajectory.push(state.lambda());
    }
    Ok(trajectory)
}

/// `step,lambda` rows.
pub fn trajectory_csv<F: Scalar>(trajectory: &[F]) -> String {
    let mut out = String::from("step,lambda\n");
    for (i, l) in trajectory.iter().enumerate() {
        writeln!(out, "{i},{l}").unwrap();
    }
    out
}
