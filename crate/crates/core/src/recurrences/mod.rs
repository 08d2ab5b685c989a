//! Variable-coefficient linear recurrences: the second-order recurrence
//! `x_n = a_n x_{n-1} + b_n x_{n-2} (+ c_n)`, the affine vector recurrence
//! built on Kronecker and Hadamard products, and the full-history recurrence
//! `w_n = Σ_{j<n} a_{n,j} w_j (+ c_n)`.
//!
//! Each closed form has a direct-iteration oracle next to it.

mod affine;
mod full_history;
mod order2;

use serde::{Deserialize, Serialize};

use crate::algebra::{RingElem, Scalar};
use crate::error::{Error, Result};

pub use affine::{affine_vector_closed, affine_vector_oracle, AffineVectorProblem};
pub use full_history::{
    full_history_chains, full_history_nonhom_vector, full_history_oracle, ChainSum, FullHistoryProblem,
};
pub use order2::{
    kron_surviving_count, order2_closed_fibword, order2_closed_kron, order2_nonhom_closed, order2_oracle, theta,
    theta_with_cutoff, Order2Problem,
};

/// A sequence indexed from `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedSeq<T = RingElem> {
    pub start: u64,
    pub values: Vec<T>,
}

impl<T: Scalar> IndexedSeq<T> {
    pub fn new(start: u64, values: Vec<T>) -> Self {
        IndexedSeq { start, values }
    }

    /// `f(start), f(start + 1), …, f(end)`.
    pub fn from_fn(start: u64, end: u64, f: impl FnMut(u64) -> T) -> Self {
        IndexedSeq { start, values: (start..=end).map(f).collect() }
    }

    /// Last index with a value, `None` when empty.
    pub fn end(&self) -> Option<u64> {
        (self.values.len() as u64).checked_sub(1).map(|d| self.start + d)
    }

    pub fn get(&self, n: u64, name: &str) -> Result<&T> {
        n.checked_sub(self.start)
            .and_then(|i| self.values.get(i as usize))
            .ok_or_else(|| Error::MissingCoefficient { name: name.to_string(), index: n.to_string() })
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> IndexedSeq<U> {
        IndexedSeq { start: self.start, values: self.values.iter().map(f).collect() }
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}
