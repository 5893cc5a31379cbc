use crate::Complex;

/// Value of a truncated series together with the bookkeeping needed to judge
/// it: an empirical tail estimate, the number of terms actually summed, and
/// whether the tail estimate met the requested target.
///
/// Invariant: `converged` implies `tail_estimate <= target` at the time the
/// flag was set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex,
    pub tail_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesResult {
    pub fn new(value: Complex, tail_estimate: f64, terms_used: usize, target: f64) -> Self {
        SeriesResult {
            value,
            tail_estimate,
            terms_used,
            converged: tail_estimate <= target,
        }
    }

    pub fn exact(value: Complex) -> Self {
        SeriesResult {
            value,
            tail_estimate: 0.0,
            terms_used: 1,
            converged: true,
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    /// Combine bookkeeping of a sub-result into an accumulated one.
    pub fn absorb(&mut self, other: &SeriesResult) {
        self.tail_estimate += other.tail_estimate;
        self.terms_used += other.terms_used;
        self.converged &= other.converged;
    }
}
