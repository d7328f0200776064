//! Tsetlin automata teams and conjunctive clause evaluation.
//!
//! Every clause owns one automaton per literal. An automaton with `2N` states
//! excludes its literal while its state is in `1..=N` and includes it in
//! `N+1..=2N`. The input `x` of width `o` is expanded into `2o` literals
//! `[x_1..x_o, !x_1..!x_o]`, and a clause fires when every included literal
//! is 1.
//!
//! All indices in this module are zero based: clause `j` in `0..m`, literal
//! `k` in `0..2o`, with literal `o + i` the negation of input bit `i`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD).max(1)
}

/// Input bits followed by their negations, packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiteralVector {
    words: Vec<u64>,
    n_inputs: usize,
}

impl LiteralVector {
    /// Builds `[x, 1 - x]`. Fails if any element of `x` is not 0 or 1.
    pub fn from_bits(x: &[u8]) -> Result<Self> {
        let o = x.len();
        let mut words = vec![0u64; words_for(2 * o)];
        for (i, &b) in x.iter().enumerate() {
            let k = match b {
                1 => i,
                0 => o + i,
                other => {
                    return Err(Error::invalid(format!(
                        "input bit {i} is {other}, expected 0 or 1"
                    )))
                }
            };
            words[k / WORD] |= 1 << (k % WORD);
        }
        Ok(LiteralVector { words, n_inputs: o })
    }

    /// The literal vector of the input whose bit `i` is `(pattern >> i) & 1`.
    pub fn from_pattern(pattern: usize, n_inputs: usize) -> Self {
        let bits: Vec<u8> = (0..n_inputs).map(|i| ((pattern >> i) & 1) as u8).collect();
        Self::from_bits(&bits).expect("pattern bits are binary")
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Number of literals, `2o`.
    pub fn len(&self) -> usize {
        2 * self.n_inputs
    }

    pub fn is_empty(&self) -> bool {
        self.n_inputs == 0
    }

    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len(), "literal {k} out of range");
        self.words[k / WORD] >> (k % WORD) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len()).map(|k| self.get(k) as u8).collect()
    }
}

/// Expands a binary input with its negated counterparts.
pub fn augment_literals(x: &[u8]) -> Result<LiteralVector> {
    LiteralVector::from_bits(x)
}

/// Conjunction of the literals in a packed include mask.
///
/// An empty mask yields `empty_output`.
#[inline]
pub fn clause_fires(mask: &[u64], literals: &LiteralVector, empty_output: bool) -> bool {
    let mut any = false;
    for (m, l) in mask.iter().zip(&literals.words) {
        if m & !l != 0 {
            return false;
        }
        any |= *m != 0;
    }
    any || empty_output
}

/// Conjunction over an explicit include set of literal indices.
pub fn evaluate_clause(include: &[usize], literals: &LiteralVector, empty_output: bool) -> bool {
    if include.is_empty() {
        return empty_output;
    }
    include.iter().all(|&k| literals.get(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Exclude,
    Include,
}

/// Starting state of every automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaInit {
    /// State `N`: exclude, one step from flipping.
    #[default]
    Boundary,
    /// Uniform over `{N, N+1}`.
    Random,
}

/// Index pairs `(clause, literal)` selected for each feedback kind in one step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeedbackSets {
    pub ia: Vec<(usize, usize)>,
    pub ib: Vec<(usize, usize)>,
    pub ii: Vec<(usize, usize)>,
}

impl FeedbackSets {
    pub fn is_empty(&self) -> bool {
        self.ia.is_empty() && self.ib.is_empty() && self.ii.is_empty()
    }

    pub fn clear(&mut self) {
        self.ia.clear();
        self.ib.clear();
        self.ii.clear();
    }
}

/// The `m x 2o` matrix of automaton states, with a packed include mask per
/// clause kept in sync with the states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaStateMatrix {
    states: Vec<u32>,
    include: Vec<u64>,
    n_clauses: usize,
    n_inputs: usize,
    n_states: u32,
    words: usize,
}

impl TaStateMatrix {
    pub fn new<R: Rng + ?Sized>(
        n_clauses: usize,
        n_inputs: usize,
        n_states: u32,
        init: TaInit,
        rng: &mut R,
    ) -> Result<Self> {
        Self::check_shape(n_clauses, n_inputs, n_states)?;
        let len = n_clauses * 2 * n_inputs;
        let states = match init {
            TaInit::Boundary => vec![n_states; len],
            TaInit::Random => (0..len)
                .map(|_| n_states + rng.random_range(0..=1u32))
                .collect(),
        };
        Self::from_states(n_clauses, n_inputs, n_states, states)
    }

    /// Rebuilds a matrix from row-major states, validating the range.
    pub fn from_states(
        n_clauses: usize,
        n_inputs: usize,
        n_states: u32,
        states: Vec<u32>,
    ) -> Result<Self> {
        Self::check_shape(n_clauses, n_inputs, n_states)?;
        let expected = n_clauses * 2 * n_inputs;
        if states.len() != expected {
            return Err(Error::invalid(format!(
                "expected {expected} automaton states, got {}",
                states.len()
            )));
        }
        if let Some(bad) = states.iter().find(|&&a| a < 1 || a > 2 * n_states) {
            return Err(Error::invalid(format!(
                "automaton state {bad} outside 1..={}",
                2 * n_states
            )));
        }
        let words = words_for(2 * n_inputs);
        let mut matrix = TaStateMatrix {
            states,
            include: vec![0; n_clauses * words],
            n_clauses,
            n_inputs,
            n_states,
            words,
        };
        for j in 0..n_clauses {
            for k in 0..2 * n_inputs {
                matrix.sync_bit(j, k);
            }
        }
        Ok(matrix)
    }

    fn check_shape(n_clauses: usize, n_inputs: usize, n_states: u32) -> Result<()> {
        if n_clauses == 0 || n_inputs == 0 {
            return Err(Error::invalid(
                "clause count and input width must be positive",
            ));
        }
        if n_states == 0 || n_states > u32::MAX / 2 {
            return Err(Error::invalid(format!(
                "states per action {n_states} out of range"
            )));
        }
        Ok(())
    }

    pub fn n_clauses(&self) -> usize {
        self.n_clauses
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_literals(&self) -> usize {
        2 * self.n_inputs
    }

    /// `N`, the number of states per action.
    pub fn n_states(&self) -> u32 {
        self.n_states
    }

    /// Row-major view of all states.
    pub fn states(&self) -> &[u32] {
        &self.states
    }

    #[inline]
    fn idx(&self, j: usize, k: usize) -> usize {
        debug_assert!(j < self.n_clauses && k < self.n_literals());
        j * self.n_literals() + k
    }

    pub fn state(&self, j: usize, k: usize) -> u32 {
        self.states[self.idx(j, k)]
    }

    pub fn action(&self, j: usize, k: usize) -> Action {
        if self.state(j, k) > self.n_states {
            Action::Include
        } else {
            Action::Exclude
        }
    }

    /// Overwrites one state. Used when constructing models by hand.
    pub fn set_state(&mut self, j: usize, k: usize, value: u32) -> Result<()> {
        self.check_index(j, k)?;
        if value < 1 || value > 2 * self.n_states {
            return Err(Error::invalid(format!(
                "automaton state {value} outside 1..={}",
                2 * self.n_states
            )));
        }
        let i = self.idx(j, k);
        self.states[i] = value;
        self.sync_bit(j, k);
        Ok(())
    }

    fn check_index(&self, j: usize, k: usize) -> Result<()> {
        if j >= self.n_clauses {
            return Err(Error::Index {
                index: j,
                len: self.n_clauses,
            });
        }
        if k >= self.n_literals() {
            return Err(Error::Index {
                index: k,
                len: self.n_literals(),
            });
        }
        Ok(())
    }

    /// Literal indices whose automaton currently includes them.
    pub fn include_set(&self, j: usize) -> Result<Vec<usize>> {
        if j >= self.n_clauses {
            return Err(Error::Index {
                index: j,
                len: self.n_clauses,
            });
        }
        Ok((0..self.n_literals())
            .filter(|&k| self.state(j, k) > self.n_states)
            .collect())
    }

    #[inline]
    pub fn include_mask(&self, j: usize) -> &[u64] {
        &self.include[j * self.words..(j + 1) * self.words]
    }

    pub fn is_empty_clause(&self, j: usize) -> bool {
        self.include_mask(j).iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn clause_fires(&self, j: usize, literals: &LiteralVector, empty_output: bool) -> bool {
        clause_fires(self.include_mask(j), literals, empty_output)
    }

    #[inline]
    fn sync_bit(&mut self, j: usize, k: usize) {
        let include = self.states[self.idx(j, k)] > self.n_states;
        let w = &mut self.include[j * self.words + k / WORD];
        let bit = 1u64 << (k % WORD);
        if include {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// Adds one to a state, saturating at `2N`. Returns whether the action flipped.
    #[inline]
    pub fn increment(&mut self, j: usize, k: usize) -> bool {
        let i = self.idx(j, k);
        let a = self.states[i];
        if a >= 2 * self.n_states {
            return false;
        }
        self.states[i] = a + 1;
        if a == self.n_states {
            self.sync_bit(j, k);
            return true;
        }
        false
    }

    /// Subtracts one from a state, saturating at 1. Returns whether the action flipped.
    #[inline]
    pub fn decrement(&mut self, j: usize, k: usize) -> bool {
        let i = self.idx(j, k);
        let a = self.states[i];
        if a <= 1 {
            return false;
        }
        self.states[i] = a - 1;
        if a == self.n_states + 1 {
            self.sync_bit(j, k);
            return true;
        }
        false
    }

    /// `A <- ((A + Ia) - Ib) + II`, saturating into `[1, 2N]`.
    pub fn apply_feedback(&mut self, fb: &FeedbackSets) -> Result<()> {
        for &(j, k) in fb.ia.iter().chain(&fb.ib).chain(&fb.ii) {
            self.check_index(j, k)?;
        }
        for &(j, k) in &fb.ia {
            self.increment(j, k);
        }
        for &(j, k) in &fb.ib {
            self.decrement(j, k);
        }
        for &(j, k) in &fb.ii {
            self.increment(j, k);
        }
        Ok(())
    }
}
