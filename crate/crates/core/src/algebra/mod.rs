//! Exact scalars: big rationals, the `(x, λ)` ring and binomial coefficients.

mod ring;

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use ring::{Monomial, RingElem, TermJson};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Commutative ring operations needed by the recurrence evaluators.
///
/// Implemented for [`Rational`] (fast numeric suites) and [`RingElem`]
/// (symbolic identities).
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Sub<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Canonical text form used in reports.
    fn render(&self) -> String;
}

impl Scalar for Rational {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for RingElem {
    fn render(&self) -> String {
        self.to_string()
    }
}

/// `C(n, k)`, zero whenever `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// Coefficients `g_{n,k}(λ)` of `x^k`, `k = 1..=2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffTable {
    pub n: u32,
    pub entries: BTreeMap<u64, RingElem>,
}

impl CoeffTable {
    /// Reads the coefficients of `x^1 ..= x^{2^n}` off a polynomial.
    pub fn from_polynomial(n: u32, poly: &RingElem) -> Result<CoeffTable> {
        let len = 1u64 << n;
        let mut entries = BTreeMap::new();
        for k in 1..=len {
            entries.insert(k, poly.coeff_of_x(k as u32));
        }
        let table = CoeffTable { n, entries };
        let stray = poly.x_coefficients().keys().any(|&d| d == 0 || u64::from(d) > len);
        if stray {
            return Err(Error::Parse(format!("polynomial has powers of x outside 1..={len}")));
        }
        Ok(table)
    }

    pub fn get(&self, k: u64) -> RingElem {
        self.entries.get(&k).cloned().unwrap_or_default()
    }

    /// `Σ_k g_{n,k} x^k`.
    pub fn to_polynomial(&self) -> RingElem {
        let mut out = RingElem::zero();
        for (&k, g) in &self.entries {
            out += &g.shift(k as u32, 0);
        }
        out
    }

    /// Entry count is `2^n` and no entry depends on `x`.
    pub fn is_well_formed(&self) -> bool {
        self.entries.len() as u64 == 1u64 << self.n
            && self.entries.keys().copied().eq(1..=(1u64 << self.n))
            && self.entries.values().all(|g| g.x_degree().is_none_or(|d| d == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(2, -1), BigInt::zero());
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![BigInt::one()];
        for n in 0..40u64 {
            for (k, expected) in row.iter().enumerate() {
                assert_eq!(&binomial(n, k as i64), expected);
            }
            let mut next = vec![BigInt::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rational(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rational(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn coeff_table_round_trip() {
        let p = &(&RingElem::lambda() * &RingElem::x_pow(2)) + &(&RingElem::lambda() * &RingElem::x());
        let table = CoeffTable::from_polynomial(1, &p).unwrap();
        assert!(table.is_well_formed());
        assert_eq!(table.get(1), RingElem::lambda());
        assert_eq!(table.to_polynomial(), p);
        assert!(CoeffTable::from_polynomial(0, &p).is_err());
    }
}
