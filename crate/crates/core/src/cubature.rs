//! Quantization-based cubature on greedy sequences.
//!
//! `I_n(f) = Σ p_i f(a_i)` can be maintained along a greedy sequence with
//! three evaluations of `f` per insertion: the new cell takes mass `p_-` from
//! its left neighbour and `p_+` from its right one, and nothing else moves.

use crate::distributions::Distribution1D;
use crate::greedy1d::{GreedySequence, InsertionStep};

/// Running value of the recursive cubature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureState {
    pub n: usize,
    pub value: f64,
}

/// `Σ p_i f(a_i)` over the current sorted points and weights.
pub fn integrate_full(seq: &GreedySequence, f: impl Fn(f64) -> f64) -> f64 {
    seq.sorted_points()
        .iter()
        .zip(seq.weights())
        .map(|(&a, &p)| p * f(a))
        .sum()
}

impl CubatureState {
    /// `I_1(f) = f(a_1)`.
    pub fn start(seq: &GreedySequence, f: impl Fn(f64) -> f64) -> Self {
        CubatureState {
            n: 1,
            value: f(seq.points()[0]),
        }
    }

    /// Replays one insertion. `points` are the sequence points in insertion
    /// order, at least up to the new point; `step` is the insertion that took
    /// the state from `n` to `n + 1` points.
    pub fn advance(&mut self, step: &InsertionStep, points: &[f64], f: impl Fn(f64) -> f64) {
        let new = f(points[self.n]);
        if let Some(l) = step.left_idx {
            self.value -= step.p_minus * (f(points[l]) - new);
        }
        if let Some(r) = step.right_idx {
            self.value -= step.p_plus * (f(points[r]) - new);
        }
        self.n += 1;
    }
}

/// Builds `n` greedy points of `dist` and returns `I_1(f), …, I_n(f)` from the
/// recursive update.
pub fn integrate_stream(dist: Distribution1D, f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let seq = GreedySequence::build(dist, n);
    replay(&seq, f)
}

/// Recursive cubature trace along an already built sequence.
pub fn replay(seq: &GreedySequence, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut state = CubatureState::start(seq, &f);
    let mut trace = Vec::with_capacity(seq.len());
    trace.push(state.value);
    for step in seq.steps() {
        state.advance(step, seq.points(), &f);
        trace.push(state.value);
    }
    trace
}
