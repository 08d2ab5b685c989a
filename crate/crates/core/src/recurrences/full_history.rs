use serde::{Deserialize, Serialize};

use super::IndexedSeq;
use crate::algebra::{RingElem, Scalar};
use crate::error::{out_of_range, Error, Result};
use crate::exec::{map_range, Exec};
use crate::vector::RowVec;

/// `w_n = c_n + Σ_{j=0}^{n-1} a_{n,j} w_j` for `n ≥ 1`.
///
/// `a[n - 1][j]` holds `a_{n,j}`; `c` absent means homogeneous.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullHistoryProblem<T = RingElem> {
    pub w0: T,
    pub a: Vec<Vec<T>>,
    pub c: Option<IndexedSeq<T>>,
}

impl<T: Scalar> FullHistoryProblem<T> {
    pub fn a(&self, n: usize, j: usize) -> Result<&T> {
        n.checked_sub(1)
            .and_then(|row| self.a.get(row))
            .and_then(|row| if j < n { row.get(j) } else { None })
            .ok_or_else(|| Error::MissingCoefficient { name: "a".into(), index: format!("{n},{j}") })
    }

    fn c(&self, n: usize) -> Result<T> {
        match &self.c {
            Some(c) => c.get(n as u64, "c").cloned(),
            None => Ok(T::zero()),
        }
    }
}

/// `Σ_{j=0}^n w_j` by direct iteration.
pub fn full_history_oracle<T: Scalar>(p: &FullHistoryProblem<T>, n: usize) -> Result<T> {
    let mut w = vec![p.w0.clone()];
    for m in 1..=n {
        let mut next = p.c(m)?;
        for (j, wj) in w.iter().enumerate() {
            next = next + &(p.a(m, j)?.clone() * wj);
        }
        w.push(next);
    }
    Ok(w.iter().fold(T::zero(), |acc, v| acc + v))
}

/// Result of the chain enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSum<T> {
    pub value: T,
    /// Number of chains visited, including the empty chain.
    pub chains: u64,
}

/// `w_0 Σ_{v} Π_k a_{v_k, v_{k-1}}` over all strictly increasing chains
/// `v ⊆ {1..n}` with `v_0 = 0`; the empty chain contributes 1.
pub fn full_history_chains<T: Scalar>(p: &FullHistoryProblem<T>, n: usize, exec: Exec) -> Result<ChainSum<T>> {
    if p.c.is_some() {
        return Err(Error::HomogeneousOnly);
    }
    if n > 40 {
        return Err(out_of_range(format!("n = {n}"), "n <= 40"));
    }
    for m in 1..=n {
        for j in 0..m {
            p.a(m, j)?;
        }
    }
    // Each branch owns the chains whose first element is `first`.
    let branches = map_range(exec, 1..n as u64 + 1, |first| {
        let first = first as usize;
        let mut acc = ChainSum { value: T::zero(), chains: 0 };
        extend_chains(p, n, first, p.a(first, 0).expect("checked").clone(), &mut acc);
        acc
    });
    let mut total = ChainSum { value: T::one(), chains: 1 };
    for b in branches {
        total.value = total.value + &b.value;
        total.chains += b.chains;
    }
    total.value = total.value * &p.w0;
    Ok(total)
}

fn extend_chains<T: Scalar>(p: &FullHistoryProblem<T>, n: usize, last: usize, product: T, acc: &mut ChainSum<T>) {
    acc.value = std::mem::replace(&mut acc.value, T::zero()) + &product;
    acc.chains += 1;
    for next in last + 1..=n {
        let factor = p.a(next, last).expect("checked");
        extend_chains(p, n, next, product.clone() * factor, acc);
    }
}

/// Entry sum of `w′_n = w′_{n-1} ⌢ (w′_{n-1} q_n) + c_n (0_{2^n-1} ⌢ 1)`,
/// where `(q_n)_1 = a_{n,0}` and block `2^{k-1}+1 ..= 2^k` of `q_n` is
/// `a_{n,k}`.
pub fn full_history_nonhom_vector<T: Scalar>(p: &FullHistoryProblem<T>, n: usize) -> Result<T> {
    if n > 24 {
        return Err(out_of_range(format!("n = {n}"), "n <= 24"));
    }
    let mut w = RowVec::new(vec![p.w0.clone()]);
    for m in 1..=n {
        let mut q = Vec::with_capacity(1 << (m - 1));
        q.push(p.a(m, 0)?.clone());
        for k in 1..m {
            let coeff = p.a(m, k)?;
            q.extend(std::iter::repeat_n(coeff.clone(), 1 << (k - 1)));
        }
        let tail = w.hadamard(&RowVec::new(q))?;
        w = w.concat(&tail).add(&RowVec::unit_last(1 << m, p.c(m)?))?;
    }
    Ok(w.sum())
}
