use serde::{Deserialize, Serialize};

use super::{affine_vector_closed, AffineVectorProblem, IndexedSeq};
use crate::algebra::{RingElem, Scalar};
use crate::error::{out_of_range, Error, Result};
use crate::exec::{sum_range, Exec};
use crate::vector::{fib, fib_word_generalized, fib_word_prefix, step, BitWord, RowVec};

/// `x_n = a_n x_{n-1} + b_n x_{n-2} + c_n` for `n ≥ 3`; `c` absent means
/// the homogeneous recurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order2Problem<T = RingElem> {
    pub x1: T,
    pub x2: T,
    pub a: IndexedSeq<T>,
    pub b: IndexedSeq<T>,
    pub c: Option<IndexedSeq<T>>,
}

impl<T: Scalar> Order2Problem<T> {
    pub fn homogeneous(&self) -> Order2Problem<T> {
        Order2Problem { c: None, ..self.clone() }
    }

    fn a(&self, n: u64) -> Result<&T> {
        self.a.get(n, "a")
    }

    fn b(&self, n: u64) -> Result<&T> {
        self.b.get(n, "b")
    }

    fn c(&self, n: u64) -> Result<T> {
        match &self.c {
            Some(c) => c.get(n, "c").cloned(),
            None => Ok(T::zero()),
        }
    }

    fn require_homogeneous(&self) -> Result<()> {
        if self.c.is_some() {
            Err(Error::HomogeneousOnly)
        } else {
            Ok(())
        }
    }
}

fn require_at_least(n: u64, min: u64) -> Result<()> {
    if n < min {
        Err(out_of_range(format!("n = {n}"), format!("n >= {min}")))
    } else {
        Ok(())
    }
}

/// `x_n` by direct iteration.
pub fn order2_oracle<T: Scalar>(p: &Order2Problem<T>, n: u64) -> Result<T> {
    require_at_least(n, 1)?;
    let (mut prev, mut cur) = (p.x1.clone(), p.x2.clone());
    if n == 1 {
        return Ok(prev);
    }
    for k in 3..=n {
        let next = p.a(k)?.clone() * &cur + &(p.b(k)?.clone() * &prev) + &p.c(k)?;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Closed form over the Fibonacci word: a sum of exactly `f_n` products.
pub fn order2_closed_fibword<T: Scalar>(p: &Order2Problem<T>, n: u64, exec: Exec) -> Result<T> {
    p.require_homogeneous()?;
    require_at_least(n, 3)?;
    let len = fib(n as u32) as usize;
    let word = fib_word_prefix(len);
    // generalized[k - 3] is the word of order k, for k = 3..=n+1
    let generalized: Vec<BitWord> = (3..=n + 1).map(|k| fib_word_generalized(k as u32, len)).collect::<Result<_>>()?;
    let a: Vec<&T> = (3..=n).map(|k| p.a(k)).collect::<Result<_>>()?;
    let b: Vec<&T> = (3..=n).map(|k| p.b(k)).collect::<Result<_>>()?;
    let diff = p.x1.clone() - p.x2.clone();

    Ok(sum_range(exec, 0..len as u64, T::zero(), |idx| {
        let j = idx as usize;
        let mut term = if word.bits()[j] == 1 { diff.clone() + &p.x2 } else { p.x2.clone() };
        for k in 0..a.len() {
            let here = generalized[k].bits()[j];
            let next = generalized[k + 1].bits()[j];
            if here == 1 {
                term = term * b[k];
            }
            if here + next == 0 {
                term = term * a[k];
            }
        }
        term
    }))
}

/// `ϑ(n) = Π_k (1 − [3·2^k, 2^k]_n)` with the product cut at `k ≤ kmax`.
pub fn theta_with_cutoff(n: u64, kmax: u32) -> u8 {
    let blocked = (0..=kmax).any(|k| step(3 << k, 1 << k, n) == 1);
    u8::from(!blocked)
}

/// `ϑ(n)`; factors with `k > ⌈log₂ n⌉` equal 1 because their pattern only
/// starts after position `3·2^k ≥ n`.
pub fn theta(n: u64) -> u8 {
    let ceil_log2 = u64::BITS - n.saturating_sub(1).leading_zeros();
    theta_with_cutoff(n, ceil_log2)
}

/// Number of window indices `j` with `ϑ(2^{n-1} − j + 1) = 1`.
pub fn kron_surviving_count(n: u64) -> u64 {
    let hi = 1u64 << (n - 1);
    let lo = (1u64 << (n - 2)) + 1;
    (lo..=hi).filter(|&j| theta(hi - j + 1) == 1).count() as u64
}

/// Closed form indexed by the Kronecker-product construction.
pub fn order2_closed_kron<T: Scalar>(p: &Order2Problem<T>, n: u64, exec: Exec) -> Result<T> {
    p.require_homogeneous()?;
    require_at_least(n, 3)?;
    if n > 62 {
        return Err(out_of_range(format!("n = {n}"), "n <= 62"));
    }
    let a: Vec<&T> = (3..=n).map(|k| p.a(k)).collect::<Result<_>>()?;
    let b: Vec<&T> = (3..=n).map(|k| p.b(k)).collect::<Result<_>>()?;
    let hi = 1u64 << (n - 1);
    let lo = (1u64 << (n - 2)) + 1;
    let diff = p.x2.clone() - p.x1.clone();

    Ok(sum_range(exec, lo..hi + 1, T::zero(), |j| {
        if theta(hi - j + 1) == 0 {
            return T::zero();
        }
        let mut term = if step(1, 1, j) == 1 { diff.clone() + &p.x1 } else { p.x1.clone() };
        for k in 0..a.len() {
            if step(3 << k, 1 << k, j) == 1 {
                term = term * a[k];
            }
            if step(1 << k, 1 << k, j) == 0 {
                term = term * b[k];
            }
        }
        term
    }))
}

/// Nonhomogeneous closed form: builds `r′_{n-1}` through the affine vector
/// closed form (not by iteration) and sums entries `2^{n-2}+1 ..= 2^{n-1}`.
///
/// Step `m` of the vector recurrence carries `c_{m+1}`, matching the
/// `b_{m+1}, a_{m+1}` it uses; see the errata report for the index shift.
pub fn order2_nonhom_closed<T: Scalar>(p: &Order2Problem<T>, n: u64) -> Result<T> {
    require_at_least(n, 3)?;
    if n > 30 {
        return Err(out_of_range(format!("n = {n}"), "n <= 30"));
    }
    let steps = n - 1;
    let mut problem = AffineVectorProblem {
        x1: RowVec::new(vec![p.x1.clone(), p.x2.clone()]),
        b: Vec::new(),
        a: Vec::new(),
        c: Vec::new(),
    };
    let pair = BitWord::new(vec![1, 1])?;
    for m in 2..=steps {
        let h = RowVec::new(vec![T::zero(), T::one(), p.b(m + 1)?.clone(), p.a(m + 1)?.clone()]);
        let len = 1usize << m;
        problem.b.push(pair.clone());
        problem.a.push(h.kron(&RowVec::ones(1 << (m - 2))));
        problem.c.push(RowVec::unit_last(len, p.c(m + 1)?));
    }
    let r = affine_vector_closed(&problem, steps as usize)?;
    let half = 1usize << (n - 2);
    Ok(r.slice(half + 1, 2 * half)?.sum())
}
