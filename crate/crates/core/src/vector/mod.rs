//! Finite row vectors with concatenation, Kronecker and Hadamard products.
//!
//! Indices in the public API are 1-based: `slice(b, l, m)` is the inclusive
//! range `b_l ..= b_m`. Infinite vectors only ever appear as finite
//! prefixes with an explicit length.

mod step;
mod words;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{RingElem, Scalar};
use crate::error::{out_of_range, Error, Result};

pub use step::{kron_power_log, step, step_prefix_kron};
pub use words::{cp, fib, fib_word_generalized, fib_word_prefix, BitWord};

#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowVec<T = RingElem> {
    entries: Vec<T>,
}

impl<T> RowVec<T> {
    pub fn new(entries: Vec<T>) -> Self {
        RowVec { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    /// 1-based access.
    pub fn get(&self, j: usize) -> Result<&T> {
        j.checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .ok_or_else(|| out_of_range(format!("entry {j}"), format!("1..={}", self.len())))
    }
}

impl<T: Scalar> RowVec<T> {
    pub fn ones(m: usize) -> Self {
        RowVec::new(vec![T::one(); m])
    }

    pub fn zeros(m: usize) -> Self {
        RowVec::new(vec![T::zero(); m])
    }

    /// `0_{len-1} ⌢ ⟨value⟩`.
    pub fn unit_last(len: usize, value: T) -> Self {
        let mut v = Self::zeros(len);
        if let Some(last) = v.entries.last_mut() {
            *last = value;
        }
        v
    }

    pub fn concat(&self, other: &RowVec<T>) -> RowVec<T> {
        let mut entries = Vec::with_capacity(self.len() + other.len());
        entries.extend_from_slice(&self.entries);
        entries.extend_from_slice(&other.entries);
        RowVec::new(entries)
    }

    /// `(a × b)_{(i-1)|b| + j} = a_i b_j`.
    pub fn kron(&self, other: &RowVec<T>) -> RowVec<T> {
        let mut entries = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a.clone() * b);
            }
        }
        RowVec::new(entries)
    }

    /// `n`-fold Kronecker self-product; `⟨1⟩` for `n = 0`.
    pub fn kron_power(&self, n: u32) -> RowVec<T> {
        (0..n).fold(RowVec::new(vec![T::one()]), |acc, _| acc.kron(self))
    }

    pub fn hadamard(&self, other: &RowVec<T>) -> Result<RowVec<T>> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        Ok(RowVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() * b).collect()))
    }

    pub fn add(&self, other: &RowVec<T>) -> Result<RowVec<T>> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        Ok(RowVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b).collect()))
    }

    pub fn scale(&self, factor: &T) -> RowVec<T> {
        RowVec::new(self.entries.iter().map(|a| a.clone() * factor).collect())
    }

    /// Inclusive 1-based slice `b_l ..= b_m`.
    pub fn slice(&self, l: usize, m: usize) -> Result<RowVec<T>> {
        if l < 1 || l > m || m > self.len() {
            return Err(out_of_range(format!("slice {l}..={m}"), format!("1 <= l <= m <= {}", self.len())));
        }
        Ok(RowVec::new(self.entries[l - 1..m].to_vec()))
    }

    pub fn reverse(&self) -> RowVec<T> {
        RowVec::new(self.entries.iter().rev().cloned().collect())
    }

    /// `Σ_j b_j t^{j-1}`, evaluated by Horner's rule.
    pub fn weighted_sum(&self, t: &T) -> T {
        self.entries.iter().rev().fold(T::zero(), |acc, b| acc * t + b)
    }

    /// Plain entry sum `|b|_1`.
    pub fn sum(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, b| acc + b)
    }
}

impl RowVec<RingElem> {
    pub fn from_ints(values: &[i64]) -> Self {
        RowVec::new(values.iter().map(|&v| RingElem::from_int(v)).collect())
    }
}

impl<T: Scalar> From<&BitWord> for RowVec<T> {
    fn from(word: &BitWord) -> Self {
        RowVec::new(word.bits().iter().map(|&b| if b == 1 { T::one() } else { T::zero() }).collect())
    }
}

impl<T: fmt::Debug> fmt::Debug for RowVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

impl<T: Scalar> fmt::Display for RowVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&e.render())?;
        }
        f.write_str(">")
    }
}

/// Checks `|a × b|_t = |a|_{t^{|b|}} · |b|_t`.
pub fn weighted_sum_kron_identity_check(a: &RowVec, b: &RowVec, t: &RingElem) -> bool {
    let lhs = a.kron(b).weighted_sum(t);
    let rhs = &a.weighted_sum(&t.pow(b.len() as u32)) * &b.weighted_sum(t);
    lhs == rhs
}

/// Prefix of the infinite Kronecker power `a × a × ⋯` for `a_1 = 1`.
///
/// Entry `j` is the product of `a_{d+1}` over the base-`|a|` digits `d` of
/// `j - 1`; leading zero digits contribute `a_1 = 1`, which is what makes
/// the prefix well defined.
pub fn kron_power_prefix<T: Scalar>(a: &RowVec<T>, len: usize) -> Result<RowVec<T>> {
    let base = a.len();
    if base < 2 || !a.entries[0].is_one() {
        return Err(Error::Parse("infinite Kronecker power needs at least two entries and a leading 1".into()));
    }
    let entries = (0..len)
        .map(|idx| {
            let mut rest = idx;
            let mut acc = T::one();
            while rest > 0 {
                let d = rest % base;
                if d != 0 {
                    acc = acc * &a.entries[d];
                }
                rest /= base;
            }
            acc
        })
        .collect();
    Ok(RowVec::new(entries))
}
