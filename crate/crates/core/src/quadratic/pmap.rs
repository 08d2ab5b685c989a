//! Iterates of `p(x) = λ(x + 1)x` and three routes to their coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{binomial, CoeffTable, Monomial, Rational, RingElem};
use crate::error::{check_limit, out_of_range, Result};
use crate::exec::{map_range, Exec};
use crate::guard::Guards;
use crate::vector::RowVec;

/// `p(x) = λx² + λx`.
pub fn p_poly() -> RingElem {
    let lam = RingElem::lambda();
    &lam * &(&RingElem::x_pow(2) + &RingElem::x())
}

/// `p^{(n)}(x)` by repeated composition; `p^{(0)} = x`.
pub fn p_iterate_oracle(n: u32, guards: &Guards) -> Result<RingElem> {
    check_limit("p iterate", u64::from(n), u64::from(guards.p_iterate_max))?;
    let p = p_poly();
    let mut acc = RingElem::x();
    for _ in 0..n {
        acc = acc.compose_x(&p);
    }
    Ok(acc)
}

/// Which binomial the step coefficients `q_{k,i}` use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QBinomial {
    /// `q_{k,i} = λ^i C(i, k − i)`, forced by expanding `(λx(x+1))^i`.
    #[default]
    Corrected,
    /// The printed `q_{k,i} = λ^i C(i, k − 1)`.
    PaperVerbatim,
}

/// `q_{k,i}`; zero whenever the binomial is out of range.
pub fn q_entry(k: u64, i: u64, variant: QBinomial) -> RingElem {
    let lower = match variant {
        QBinomial::Corrected => k as i64 - i as i64,
        QBinomial::PaperVerbatim => k as i64 - 1,
    };
    let c = binomial(i, lower);
    RingElem::monomial(Rational::from_integer(c), Monomial::new(0, i as i64))
}

/// `g_{0,1} = 1`, `g_{n,k} = Σ_{i=1}^{2^{n-1}} q_{k,i} g_{n-1,i}`.
pub fn p_coeffs_recursion(n: u32, variant: QBinomial, guards: &Guards) -> Result<CoeffTable> {
    check_limit("p coefficient recursion", u64::from(n), u64::from(guards.p_iterate_max))?;
    let mut table = CoeffTable { n: 0, entries: BTreeMap::from([(1, RingElem::one())]) };
    for level in 1..=n {
        let prev_len = 1u64 << (level - 1);
        let mut entries = BTreeMap::new();
        for k in 1..=(1u64 << level) {
            let mut g = RingElem::zero();
            for i in 1..=prev_len {
                let q = q_entry(k, i, variant);
                if !q.is_zero() {
                    g += &(&q * &table.get(i));
                }
            }
            entries.insert(k, g);
        }
        table = CoeffTable { n: level, entries };
    }
    Ok(table)
}

/// `ω_n = 2^{n(n-1)/2}`.
pub fn omega(n: u32) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

/// `μ_{i,j} = ⌈(1 + i mod ω_{j+1}) / ω_j⌉`.
pub fn mu(i: u64, j: u32) -> u64 {
    (1 + i % omega(j + 1)).div_ceil(omega(j))
}

/// Coefficients from the closed double sum
/// `g_{n,k} = Σ_{i=(k-1)ω_n}^{kω_n - 1} Π_{j=1}^n λ^{μ_{i,j-1}} C(μ_{i,j-1}, μ_{i,j} − μ_{i,j-1})`.
pub fn p_coeffs_closed(n: u32, exec: Exec, guards: &Guards) -> Result<CoeffTable> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    check_limit("p closed form", u64::from(n), u64::from(guards.p_closed_max))?;
    let width = omega(n);
    let rows = map_range(exec, 1..(1u64 << n) + 1, |k| {
        let mut by_exp: BTreeMap<i64, BigInt> = BTreeMap::new();
        for i in (k - 1) * width..k * width {
            let mut exp = 0i64;
            let mut coeff = BigInt::one();
            for j in 1..=n {
                let lo = mu(i, j - 1);
                let hi = mu(i, j);
                coeff *= binomial(lo, hi as i64 - lo as i64);
                if coeff.is_zero() {
                    break;
                }
                exp += lo as i64;
            }
            if !coeff.is_zero() {
                *by_exp.entry(exp).or_default() += coeff;
            }
        }
        let g = RingElem::from_terms(by_exp.into_iter().map(|(e, c)| (Monomial::new(0, e), Rational::from_integer(c))));
        (k, g)
    });
    Ok(CoeffTable { n, entries: rows.into_iter().collect() })
}

/// Entry order used when flattening the `q_{k,i}` into a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QOrdering {
    /// `(q_{1,i})_i ⌢ (q_{2,i})_i ⌢ …`, the order that rebuilds `g_{n,k}`.
    KMajor,
    /// `(q_{k,1})_k ⌢ (q_{k,2})_k ⌢ …`.
    Transposed,
    KMajorReversed,
    TransposedReversed,
}

impl QOrdering {
    pub const ALL: [QOrdering; 4] =
        [QOrdering::KMajor, QOrdering::Transposed, QOrdering::KMajorReversed, QOrdering::TransposedReversed];

    pub fn name(self) -> &'static str {
        match self {
            QOrdering::KMajor => "k-major",
            QOrdering::Transposed => "transposed",
            QOrdering::KMajorReversed => "k-major-reversed",
            QOrdering::TransposedReversed => "transposed-reversed",
        }
    }

    pub fn parse(text: &str) -> Option<QOrdering> {
        QOrdering::ALL.into_iter().find(|o| o.name() == text)
    }
}

/// The vector `q_k` of length `2^{2k-1}`.
pub fn q_vector(k: u32, ordering: QOrdering, variant: QBinomial, guards: &Guards) -> Result<RowVec> {
    if k < 1 {
        return Err(out_of_range("k = 0", "k >= 1"));
    }
    check_limit("q vector", u64::from(k), u64::from(guards.q_vector_max))?;
    let inner = 1u64 << (k - 1);
    let outer = 1u64 << k;
    let mut entries = Vec::with_capacity((inner * outer) as usize);
    match ordering {
        QOrdering::KMajor | QOrdering::KMajorReversed => {
            for kk in 1..=outer {
                for i in 1..=inner {
                    entries.push(q_entry(kk, i, variant));
                }
            }
        }
        QOrdering::Transposed | QOrdering::TransposedReversed => {
            for i in 1..=inner {
                for kk in 1..=outer {
                    entries.push(q_entry(kk, i, variant));
                }
            }
        }
    }
    if matches!(ordering, QOrdering::KMajorReversed | QOrdering::TransposedReversed) {
        entries.reverse();
    }
    Ok(RowVec::new(entries))
}

/// `p_0 = ⟨1⟩`, `p_n = (1_{2^n} × p_{n-1})(q_n × 1_{ω_{n-1}})`.
pub fn p_vector(n: u32, variant: QBinomial, guards: &Guards) -> Result<RowVec> {
    let len = 1u64 << (n * (n + 1) / 2);
    guards.entries("p vector", len)?;
    let mut p = RowVec::new(vec![RingElem::one()]);
    for level in 1..=n {
        let q = q_vector(level, QOrdering::KMajor, variant, guards)?;
        let spread = q.kron(&RowVec::ones(omega(level - 1) as usize));
        p = RowVec::ones(1 << level).kron(&p).hadamard(&spread)?;
    }
    Ok(p)
}

/// Reads `g_{n,k} = |(p_n)_{1+(k-1)ω_n}^{kω_n}|_1` off the vector.
pub fn coeffs_from_p_vector(n: u32, p: &RowVec) -> Result<CoeffTable> {
    let width = omega(n) as usize;
    let mut entries = BTreeMap::new();
    for k in 1..=(1usize << n) {
        entries.insert(k as u64, p.slice(1 + (k - 1) * width, k * width)?.sum());
    }
    Ok(CoeffTable { n, entries })
}

/// Both sides of the generating-polynomial identity for `|q_k|_t`
/// (with `t` carried by `x`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenpolyReport {
    pub k: u32,
    pub ordering: QOrdering,
    pub vector_side: String,
    pub formula_side: String,
    /// `vector_side − formula_side`.
    pub difference: String,
    pub equal: bool,
}

/// `λ(1 + t^m) Σ_{r=0}^{m-1} (λt^m + λt^{2m+1})^r` with `m = 2^{k-1}`.
pub fn genpoly_formula(k: u32) -> RingElem {
    let m = 1u32 << (k - 1);
    let lam = RingElem::lambda();
    let base = &(&lam * &RingElem::x_pow(m)) + &(&lam * &RingElem::x_pow(2 * m + 1));
    let mut geometric = RingElem::zero();
    let mut power = RingElem::one();
    for _ in 0..m {
        geometric += &power;
        power = &power * &base;
    }
    &(&lam * &(&RingElem::one() + &RingElem::x_pow(m))) * &geometric
}

pub fn q_genpoly_compare(k: u32, ordering: QOrdering, guards: &Guards) -> Result<GenpolyReport> {
    if k < 1 {
        return Err(out_of_range("k = 0", "k >= 1"));
    }
    check_limit("generating polynomial", u64::from(k), u64::from(guards.genpoly_max))?;
    let vector_side = q_vector(k, ordering, QBinomial::Corrected, guards)?.weighted_sum(&RingElem::x());
    let formula_side = genpoly_formula(k);
    let difference = &vector_side - &formula_side;
    Ok(GenpolyReport {
        k,
        ordering,
        equal: difference.is_zero(),
        vector_side: vector_side.to_string(),
        formula_side: formula_side.to_string(),
        difference: difference.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn lam(e: i64) -> RingElem {
        RingElem::lambda_pow(e)
    }

    #[test]
    fn oracle_small_iterates() {
        let g = Guards::default();
        assert_eq!(p_iterate_oracle(0, &g).unwrap(), RingElem::x());
        assert_eq!(p_iterate_oracle(1, &g).unwrap(), p_poly());
        assert!(p_iterate_oracle(13, &g).is_err());
    }

    #[test]
    fn recursion_tables() {
        let g = Guards::default();
        let t1 = p_coeffs_recursion(1, QBinomial::Corrected, &g).unwrap();
        assert_eq!(t1.get(1), lam(1));
        assert_eq!(t1.get(2), lam(1));
        let t2 = p_coeffs_recursion(2, QBinomial::Corrected, &g).unwrap();
        let expected = [lam(2), &lam(3) + &lam(2), lam(3).scale(&rational(2, 1)), lam(3)];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(&t2.get(k as u64 + 1), e, "k={}", k + 1);
        }
        let verbatim = p_coeffs_recursion(2, QBinomial::PaperVerbatim, &g).unwrap();
        assert_eq!(verbatim.get(1), &lam(2) + &lam(3));
    }

    #[test]
    fn mu_values() {
        assert_eq!(omega(0), 1);
        assert_eq!(omega(1), 1);
        assert_eq!(omega(2), 2);
        assert_eq!(omega(3), 8);
        for i in 0..200 {
            assert_eq!(mu(i, 0), 1);
            for j in 0..5 {
                let m = mu(i, j);
                assert!((1..=1 << j).contains(&m));
            }
        }
        assert_eq!((mu(1, 0), mu(1, 1)), (1, 2));
    }

    #[test]
    fn closed_small_tables() {
        let g = Guards::default();
        let t1 = p_coeffs_closed(1, Exec::Sequential, &g).unwrap();
        assert_eq!((t1.get(1), t1.get(2)), (lam(1), lam(1)));
        let t2 = p_coeffs_closed(2, Exec::Parallel, &g).unwrap();
        assert_eq!(t2.get(1), lam(2));
        assert_eq!(t2.get(2), &lam(2) + &lam(3));
        assert!(p_coeffs_closed(7, Exec::Sequential, &g).is_err());
    }

    #[test]
    fn q_vectors() {
        let g = Guards::default();
        let q1 = q_vector(1, QOrdering::KMajor, QBinomial::Corrected, &g).unwrap();
        assert_eq!(q1, RowVec::new(vec![lam(1), lam(1)]));
        let q2 = q_vector(2, QOrdering::KMajor, QBinomial::Corrected, &g).unwrap();
        let z = RingElem::zero();
        let expected = vec![lam(1), z.clone(), lam(1), lam(2), z.clone(), lam(2).scale(&rational(2, 1)), z, lam(2)];
        assert_eq!(q2, RowVec::new(expected));
        assert_eq!(q1.weighted_sum(&RingElem::x()), &lam(1) + &(&lam(1) * &RingElem::x()));
    }

    #[test]
    fn p_vector_rebuilds_coefficients() {
        let g = Guards::default();
        for n in 0..=4 {
            let p = p_vector(n, QBinomial::Corrected, &g).unwrap();
            assert_eq!(p.len() as u64, 1 << (n * (n + 1) / 2));
            if n >= 1 {
                let table = coeffs_from_p_vector(n, &p).unwrap();
                assert_eq!(table, p_coeffs_recursion(n, QBinomial::Corrected, &g).unwrap());
            }
        }
    }

    #[test]
    fn genpoly_anchors() {
        let g = Guards::default();
        let k1 = q_genpoly_compare(1, QOrdering::KMajor, &g).unwrap();
        assert!(k1.equal);
        assert_eq!(k1.formula_side, "x*l + l");
        // λ + λt² + λ²t² + λ²t⁴ + λ²t⁵ + λ²t⁷
        let expected = RingElem::from_terms([
            (Monomial::new(0, 1), rational(1, 1)),
            (Monomial::new(2, 1), rational(1, 1)),
            (Monomial::new(2, 2), rational(1, 1)),
            (Monomial::new(4, 2), rational(1, 1)),
            (Monomial::new(5, 2), rational(1, 1)),
            (Monomial::new(7, 2), rational(1, 1)),
        ]);
        assert_eq!(genpoly_formula(2), expected);
        assert!(!q_genpoly_compare(2, QOrdering::KMajor, &g).unwrap().equal);
    }
}
