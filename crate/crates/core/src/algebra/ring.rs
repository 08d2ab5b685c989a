//! Polynomials in `x` whose coefficients are Laurent polynomials in `λ` over
//! the rationals.
//!
//! Every symbolic quantity in the crate lives in this one ring: the iterated
//! maps, the coefficient tables `g_{n,k}(λ)` and the entries of row vectors.
//! Storage is sparse and canonical (no zero coefficients), so structural
//! equality is polynomial identity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Exponent pair of a single term `x^x · λ^lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: u32,
    pub lambda: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, lambda: 0 };

    pub fn new(x: u32, lambda: i64) -> Self {
        Monomial { x, lambda }
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial { x: self.x + other.x, lambda: self.lambda + other.lambda }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    terms: BTreeMap<Monomial, Rational>,
}

impl RingElem {
    pub fn constant(value: Rational) -> Self {
        Self::monomial(value, Monomial::ONE)
    }

    pub fn from_int(value: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(value)))
    }

    pub fn monomial(coeff: Rational, mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        RingElem { terms }
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), Monomial::new(1, 0))
    }

    /// The parameter `λ`.
    pub fn lambda() -> Self {
        Self::lambda_pow(1)
    }

    pub fn lambda_pow(exp: i64) -> Self {
        Self::monomial(Rational::one(), Monomial::new(0, exp))
    }

    pub fn x_pow(exp: u32) -> Self {
        Self::monomial(Rational::one(), Monomial::new(exp, 0))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut out = RingElem::default();
        for (mono, coeff) in terms {
            out.add_term(mono, coeff);
        }
        out
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: Monomial) -> Rational {
        self.terms.get(&mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// Returns the rational value if the element is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Highest power of `x` present, `None` for zero.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x).max()
    }

    /// Coefficient of `x^deg`, a Laurent polynomial in `λ` alone.
    pub fn coeff_of_x(&self, deg: u32) -> RingElem {
        RingElem::from_terms(
            self.terms.iter().filter(|(m, _)| m.x == deg).map(|(m, c)| (Monomial::new(0, m.lambda), c.clone())),
        )
    }

    /// Groups the element by powers of `x`.
    pub fn x_coefficients(&self) -> BTreeMap<u32, RingElem> {
        let mut out: BTreeMap<u32, RingElem> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.x).or_default().add_term(Monomial::new(0, m.lambda), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> RingElem {
        if factor.is_zero() {
            return RingElem::zero();
        }
        RingElem { terms: self.terms.iter().map(|(m, c)| (*m, c * factor)).collect() }
    }

    /// Multiplies by the monomial `x^dx λ^dl`.
    pub fn shift(&self, dx: u32, dl: i64) -> RingElem {
        let by = Monomial::new(dx, dl);
        RingElem { terms: self.terms.iter().map(|(m, c)| (m.times(by), c.clone())).collect() }
    }

    pub fn pow(&self, mut exp: u32) -> RingElem {
        let mut base = self.clone();
        let mut acc = RingElem::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `q` for `x`; powers of `λ` pass through.
    pub fn compose_x(&self, q: &RingElem) -> RingElem {
        let groups = self.x_coefficients();
        let mut acc = RingElem::zero();
        let mut prev: Option<u32> = None;
        for (&deg, coeff) in groups.iter().rev() {
            if let Some(p) = prev {
                acc = &acc * &q.pow(p - deg);
            }
            acc += coeff;
            prev = Some(deg);
        }
        if let Some(p) = prev {
            acc = &acc * &q.pow(p);
        }
        acc
    }

    /// Exact evaluation at rational `x` and `λ`.
    pub fn eval_at(&self, x_val: &Rational, lambda_val: &Rational) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let lam = rational_pow(lambda_val, m.lambda)?;
            let xv = rational_pow(x_val, i64::from(m.x))?;
            total += c * lam * xv;
        }
        Ok(total)
    }

    /// Specialises `λ` to a rational value, keeping `x` symbolic.
    pub fn eval_lambda(&self, lambda_val: &Rational) -> Result<RingElem> {
        let mut out = RingElem::zero();
        for (m, c) in &self.terms {
            let lam = rational_pow(lambda_val, m.lambda)?;
            out.add_term(Monomial::new(m.x, 0), c * lam);
        }
        Ok(out)
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson {
                xexp: m.x,
                lexp: m.lambda,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<RingElem> {
        let mut out = RingElem::zero();
        for t in terms {
            let num: BigInt = t.num.parse().map_err(|_| Error::Parse(format!("bad numerator `{}`", t.num)))?;
            let den: BigInt = t.den.parse().map_err(|_| Error::Parse(format!("bad denominator `{}`", t.den)))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            out.add_term(Monomial::new(t.xexp, t.lexp), Rational::new(num, den));
        }
        Ok(out)
    }
}

/// JSON form of one term; bigints travel as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub xexp: u32,
    pub lexp: i64,
    pub num: String,
    pub den: String,
}

impl Serialize for RingElem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RingElem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        RingElem::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn rational_pow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp >= 0 {
        Ok(num_traits::pow(base.clone(), exp as usize))
    } else if base.is_zero() {
        Err(Error::ZeroLambda)
    } else {
        Ok(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
    }
}

impl fmt::Display for RingElem {
    /// Sorted term list, highest `x` power first, e.g. `9*l^3 + 6*l^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if *m == Monomial::ONE || !mag.is_one() {
                factors.push(mag.to_string());
            }
            match m.x {
                0 => {}
                1 => factors.push("x".into()),
                d => factors.push(format!("x^{d}")),
            }
            match m.lambda {
                0 => {}
                1 => factors.push("l".into()),
                e => factors.push(format!("l^{e}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for RingElem {
    fn from(value: Rational) -> Self {
        RingElem::constant(value)
    }
}

impl From<i64> for RingElem {
    fn from(value: i64) -> Self {
        RingElem::from_int(value)
    }
}

impl Zero for RingElem {
    fn zero() -> Self {
        RingElem::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for RingElem {
    fn one() -> Self {
        RingElem::from_int(1)
    }
}

impl AddAssign<&RingElem> for RingElem {
    fn add_assign(&mut self, rhs: &RingElem) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&RingElem> for RingElem {
    fn sub_assign(&mut self, rhs: &RingElem) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add<&RingElem> for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add<&RingElem> for RingElem {
    type Output = RingElem;
    fn add(mut self, rhs: &RingElem) -> RingElem {
        self += rhs;
        self
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(mut self, rhs: RingElem) -> RingElem {
        self += &rhs;
        self
    }
}

impl Sub<&RingElem> for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(mut self, rhs: RingElem) -> RingElem {
        self -= &rhs;
        self
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

impl Mul<&RingElem> for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        if self.is_zero() || rhs.is_zero() {
            return RingElem::zero();
        }
        let mut out = RingElem::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(*mb), ca * cb);
            }
        }
        out
    }
}

impl Mul<&RingElem> for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        &self * rhs
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> RingElem {
        RingElem::lambda()
    }

    fn x() -> RingElem {
        RingElem::x()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn p1() -> RingElem {
        &(&lam() * &x().pow(2)) + &(&lam() * &x())
    }

    #[test]
    fn additive_inverse_cancels() {
        let sum = &(&lam() + &x()) + &(-lam());
        assert_eq!(sum, x());
    }

    #[test]
    fn multiplicative_identity() {
        assert_eq!(&p1() * &RingElem::one(), p1());
    }

    #[test]
    fn schoolbook_square() {
        // (λx + λ)^2 = λ²x² + 2λ²x + λ²
        let base = &(&lam() * &x()) + &lam();
        let expected = RingElem::from_terms([
            (Monomial::new(2, 2), q(1, 1)),
            (Monomial::new(1, 2), q(2, 1)),
            (Monomial::new(0, 2), q(1, 1)),
        ]);
        assert_eq!(&base * &base, expected);
        assert_eq!(base.pow(2), expected);
    }

    #[test]
    fn compose_examples() {
        let sq = x().pow(2);
        let x1 = &x() + &RingElem::one();
        let expected = &(&x().pow(2) + &x().scale(&q(2, 1))) + &RingElem::one();
        assert_eq!(sq.compose_x(&x1), expected);
        assert_eq!(p1().compose_x(&x()), p1());

        // p(p(x)) = λ³x⁴ + 2λ³x³ + (λ³+λ²)x² + λ²x
        let pp = p1().compose_x(&p1());
        let expected = RingElem::from_terms([
            (Monomial::new(4, 3), q(1, 1)),
            (Monomial::new(3, 3), q(2, 1)),
            (Monomial::new(2, 3), q(1, 1)),
            (Monomial::new(2, 2), q(1, 1)),
            (Monomial::new(1, 2), q(1, 1)),
        ]);
        assert_eq!(pp, expected);
    }

    #[test]
    fn compose_of_constant_and_zero() {
        let c = RingElem::from_int(5);
        assert_eq!(c.compose_x(&p1()), c);
        assert_eq!(RingElem::zero().compose_x(&p1()), RingElem::zero());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p1().eval_at(&q(2, 1), &q(1, 1)).unwrap(), q(6, 1));
        assert_eq!(RingElem::lambda_pow(-1).eval_at(&q(0, 1), &q(2, 1)).unwrap(), q(1, 2));
        assert_eq!(RingElem::lambda_pow(-1).eval_at(&q(1, 1), &q(0, 1)), Err(Error::ZeroLambda));
    }

    #[test]
    fn display_is_sorted() {
        let v = RingElem::from_terms([
            (Monomial::new(0, 3), q(9, 1)),
            (Monomial::new(0, 2), q(6, 1)),
            (Monomial::new(0, 0), q(1, 1)),
        ]);
        assert_eq!(v.to_string(), "9*l^3 + 6*l^2 + 1");
        assert_eq!(RingElem::zero().to_string(), "0");
        let w = &x().scale(&q(-1, 2)) + &RingElem::lambda_pow(-1);
        assert_eq!(w.to_string(), "-1/2*x + l^-1");
        assert_eq!((-RingElem::one()).to_string(), "-1");
    }

    #[test]
    fn json_round_trip() {
        let v = &p1().scale(&q(-3, 7)) + &RingElem::lambda_pow(-2);
        let text = serde_json::to_string(&v).unwrap();
        let back: RingElem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(text.contains("\"num\":\"-3\""));
    }
}
