use serde::{Deserialize, Serialize};

use crate::algebra::{RingElem, Scalar};
use crate::error::{out_of_range, Error, Result};
use crate::vector::{BitWord, RowVec};

/// `x_n = a_n (b_n × x_{n-1}) + c_n` for `n ≥ 2`, with 0/1 words `b_n`.
///
/// `b`, `a` and `c` hold the terms for `n = 2, 3, …` (element 0 is `n = 2`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineVectorProblem<T = RingElem> {
    pub x1: RowVec<T>,
    pub b: Vec<BitWord>,
    pub a: Vec<RowVec<T>>,
    pub c: Vec<RowVec<T>>,
}

impl<T: Scalar> AffineVectorProblem<T> {
    /// `|x_1| · Π_{i=2}^n |b_i|`.
    pub fn dimension(&self, n: usize) -> Result<usize> {
        let words = self.words_up_to(n)?;
        Ok(words.iter().fold(self.x1.len(), |acc, b| acc * b.len()))
    }

    fn words_up_to(&self, n: usize) -> Result<&[BitWord]> {
        let count = n.saturating_sub(1);
        if count > self.b.len() || count > self.a.len() || count > self.c.len() {
            return Err(out_of_range(
                format!("n = {n}"),
                format!("n <= {}", 1 + self.b.len().min(self.a.len()).min(self.c.len())),
            ));
        }
        Ok(&self.b[..count])
    }

    fn check_dimensions(&self, n: usize) -> Result<()> {
        for k in 2..=n {
            let want = self.dimension(k)?;
            for got in [self.a[k - 2].len(), self.c[k - 2].len()] {
                if got != want {
                    return Err(Error::DimensionMismatch { left: got, right: want });
                }
            }
        }
        Ok(())
    }
}

/// Iterates the defining recurrence.
pub fn affine_vector_oracle<T: Scalar>(p: &AffineVectorProblem<T>, n: usize) -> Result<RowVec<T>> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    p.check_dimensions(n)?;
    let mut x = p.x1.clone();
    for k in 2..=n {
        let spread = RowVec::<T>::from(&p.b[k - 2]).kron(&x);
        x = p.a[k - 2].hadamard(&spread)?.add(&p.c[k - 2])?;
    }
    Ok(x)
}

/// Closed form
/// `x_n = (b_{n,2} × x_1) Π_{k=2}^n (b_{n,k+1} × a_k)
///      + Σ_{i=2}^n (b_{n,i+1} × c_i) Π_{k=i+1}^n (b_{n,k+1} × a_k)`
/// with `b_{n,k} = b_n × ⋯ × b_k` and `b_{n,k} = ⟨1⟩` for `k > n`.
pub fn affine_vector_closed<T: Scalar>(p: &AffineVectorProblem<T>, n: usize) -> Result<RowVec<T>> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    p.check_dimensions(n)?;
    let dim = p.dimension(n)?;

    // spread[k] = b_{n,k} for k in 2..=n+1
    let mut spread: Vec<RowVec<T>> = vec![RowVec::new(Vec::new()); n + 2];
    spread[n + 1] = RowVec::ones(1);
    for k in (2..=n).rev() {
        spread[k] = spread[k + 1].kron(&RowVec::from(&p.b[k - 2]));
    }

    // suffix[i] = Π_{k=i}^n (b_{n,k+1} × a_k); suffix[n+1] is all ones
    let mut suffix: Vec<RowVec<T>> = vec![RowVec::new(Vec::new()); n + 2];
    suffix[n + 1] = RowVec::ones(dim);
    for k in (2..=n).rev() {
        let factor = spread[k + 1].kron(&p.a[k - 2]);
        suffix[k] = suffix[k + 1].hadamard(&factor)?;
    }

    let mut x = spread[2].kron(&p.x1).hadamard(&suffix[2])?;
    for i in 2..=n {
        let forced = spread[i + 1].kron(&p.c[i - 2]).hadamard(&suffix[i + 1])?;
        x = x.add(&forced)?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Rational};

    fn word(bits: &[u8]) -> BitWord {
        BitWord::new(bits.to_vec()).unwrap()
    }

    fn rv(values: &[i64]) -> RowVec<Rational> {
        RowVec::new(values.iter().map(|&v| rational(v, 1)).collect())
    }

    #[test]
    fn homogeneous_all_ones_collapses_to_spread() {
        let b = vec![word(&[1, 0]), word(&[1, 1, 0])];
        let x1 = rv(&[2, 3]);
        let p = AffineVectorProblem {
            x1: x1.clone(),
            b: b.clone(),
            a: vec![RowVec::ones(4), RowVec::ones(12)],
            c: vec![RowVec::zeros(4), RowVec::zeros(12)],
        };
        let spread = RowVec::<Rational>::from(&b[1]).kron(&RowVec::from(&b[0])).kron(&x1);
        assert_eq!(affine_vector_closed(&p, 3).unwrap(), spread);
        assert_eq!(affine_vector_oracle(&p, 3).unwrap(), spread);
    }

    #[test]
    fn scalar_affine_recurrence() {
        // x_n = a_n x_{n-1} + c_n with x_1 = 2
        let p = AffineVectorProblem {
            x1: rv(&[2]),
            b: vec![word(&[1]); 3],
            a: vec![rv(&[3]), rv(&[5]), rv(&[7])],
            c: vec![rv(&[1]), rv(&[-1]), rv(&[4])],
        };
        let expected = 7 * (5 * (3 * 2 + 1) - 1) + 4;
        assert_eq!(affine_vector_closed(&p, 4).unwrap(), rv(&[expected]));
        assert_eq!(affine_vector_oracle(&p, 4).unwrap(), rv(&[expected]));
        assert_eq!(affine_vector_closed(&p, 1).unwrap(), rv(&[2]));
    }

    #[test]
    fn dimension_violation_is_reported() {
        let p = AffineVectorProblem {
            x1: rv(&[1, 1]),
            b: vec![word(&[1, 1])],
            a: vec![RowVec::ones(3)],
            c: vec![RowVec::zeros(4)],
        };
        assert!(matches!(affine_vector_closed(&p, 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(affine_vector_oracle(&p, 2), Err(Error::DimensionMismatch { .. })));
        assert!(affine_vector_closed(&p, 3).is_err());
    }
}
