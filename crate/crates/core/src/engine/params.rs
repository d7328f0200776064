use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tsetlin::TaInit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Unity weights: every clause contributes one vote.
    Rtm,
    /// Non-negative integer weights learned by unit increments.
    RtmIw,
    /// Non-negative real weights with learning rate `alpha`.
    RtmRw,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Rtm, Variant::RtmIw, Variant::RtmRw];

    pub fn is_weighted(self) -> bool {
        self != Variant::Rtm
    }

    /// `T = m` for unity weights, `T = 100 m` otherwise.
    pub fn default_resolution(self, clauses: usize) -> u64 {
        let m = clauses as u64;
        if self.is_weighted() {
            100 * m
        } else {
            m
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Rtm => "rtm",
            Variant::RtmIw => "rtm-iw",
            Variant::RtmRw => "rtm-rw",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rtm" => Ok(Variant::Rtm),
            "rtm-iw" | "iw" => Ok(Variant::RtmIw),
            "rtm-rw" | "rw" => Ok(Variant::RtmRw),
            _ => Err(Error::invalid(format!(
                "unknown variant `{s}` (expected rtm, rtm-iw or rtm-rw)"
            ))),
        }
    }
}

/// How a clause with no included literals evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyClausePolicy {
    /// Outputs 1 everywhere.
    #[default]
    Fires,
    /// Outputs 1 during training and 0 when predicting.
    SilentAtInference,
}

/// Update applied to real weights on the increment/decrement branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealWeightRule {
    /// `w * (1 + alpha)` / `w * (1 - alpha)`, starting from 1.
    #[default]
    Multiplicative,
    /// `w + alpha` / `max(w - alpha, 0)`, starting from 1.
    Additive,
}

/// Hyper-parameters of one machine.
#[derive(Debug, Clone, PartialEq)]
pub struct RtmParams<F> {
    pub variant: Variant,
    /// `m`
    pub clauses: usize,
    /// `T`
    pub resolution: u64,
    /// `s`; Type Ib feedback fires with probability `1/s`.
    pub specificity: F,
    /// `N`; each automaton has `2N` states.
    pub n_states: u32,
    /// Real-weight learning rate.
    pub alpha: F,
    pub ta_init: TaInit,
    pub empty_clause: EmptyClausePolicy,
    /// Also require the clause to fire before decrementing its integer weight.
    pub decrement_requires_fire: bool,
    pub real_rule: RealWeightRule,
}

pub const DEFAULT_N_STATES: u32 = 100;
pub const DEFAULT_SPECIFICITY: f64 = 2.0;
pub const DEFAULT_ALPHA: f64 = 0.01;

impl<F: Scalar> RtmParams<F> {
    /// Defaults: `T` from [`Variant::default_resolution`], `s = 2`, `N = 100`,
    /// `alpha = 0.01`.
    pub fn new(variant: Variant, clauses: usize) -> Self {
        RtmParams {
            variant,
            clauses,
            resolution: variant.default_resolution(clauses),
            specificity: F::from_f64_lossy(DEFAULT_SPECIFICITY),
            n_states: DEFAULT_N_STATES,
            alpha: F::from_f64_lossy(DEFAULT_ALPHA),
            ta_init: TaInit::default(),
            empty_clause: EmptyClausePolicy::default(),
            decrement_requires_fire: false,
            real_rule: RealWeightRule::default(),
        }
    }

    pub fn with_resolution(mut self, t: u64) -> Self {
        self.resolution = t;
        self
    }

    pub fn with_specificity(mut self, s: F) -> Self {
        self.specificity = s;
        self
    }

    pub fn with_n_states(mut self, n: u32) -> Self {
        self.n_states = n;
        self
    }

    pub fn with_alpha(mut self, alpha: F) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.clauses == 0 {
            return Err(Error::invalid("clause count m must be at least 1"));
        }
        if self.resolution == 0 {
            return Err(Error::invalid("resolution T must be at least 1"));
        }
        if !(self.specificity.is_finite() && self.specificity >= F::one()) {
            return Err(Error::invalid(format!(
                "specificity s = {} must be finite and >= 1",
                self.specificity
            )));
        }
        if self.n_states == 0 {
            return Err(Error::invalid("states per action N must be at least 1"));
        }
        if self.variant == Variant::RtmRw
            && (self.alpha.is_nan() || self.alpha <= F::zero() || self.alpha >= F::one())
        {
            return Err(Error::invalid(format!(
                "learning rate alpha = {} must lie in (0, 1)",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn resolution_f(&self) -> F {
        F::from_count(self.resolution)
    }
}
