//! The map `s(x) = λ(x² − 1) + 1`, its vector construction and the exponent
//! formulas read off it.
//!
//! Convention: vector level `ℓ` carries the iterate `s^{(ℓ-1)}(x)` because
//! `|s_1|_1 = x`. Functions taking an iterate count say so in their name.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, RingElem};
use crate::error::{check_limit, out_of_range, Error, Result};
use crate::guard::Guards;
use crate::vector::{kron_power_log, kron_power_prefix, step, RowVec};

/// How `λ` is carried while building vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LambdaMode {
    #[default]
    Symbolic,
    Rational(Rational),
}

impl LambdaMode {
    pub fn lambda(&self) -> Result<RingElem> {
        match self {
            LambdaMode::Symbolic => Ok(RingElem::lambda()),
            LambdaMode::Rational(v) if v.is_zero() => Err(Error::ZeroLambda),
            LambdaMode::Rational(v) => Ok(RingElem::constant(v.clone())),
        }
    }

    pub fn lambda_inv(&self) -> Result<RingElem> {
        match self {
            LambdaMode::Symbolic => Ok(RingElem::lambda_pow(-1)),
            LambdaMode::Rational(v) if v.is_zero() => Err(Error::ZeroLambda),
            LambdaMode::Rational(v) => Ok(RingElem::constant(v.recip())),
        }
    }
}

/// `s(x) = λ(x² − 1) + 1`.
pub fn s_poly() -> RingElem {
    let lam = RingElem::lambda();
    &(&lam * &(&RingElem::x_pow(2) - &RingElem::one())) + &RingElem::one()
}

/// `s^{(t)}(x)` by composition.
pub fn s_iterate_oracle(t: u32) -> RingElem {
    let s = s_poly();
    (0..t).fold(RingElem::x(), |acc, _| acc.compose_x(&s))
}

/// Vector length at a level, `2^{2^{level-1}}`.
pub fn s_vector_len(level: u32) -> u64 {
    1u64 << (1u64 << (level - 1))
}

fn check_level(level: u32, guards: &Guards) -> Result<()> {
    if level < 1 {
        return Err(out_of_range("level = 0", "level >= 1"));
    }
    check_limit("s vector level", u64::from(level), u64::from(guards.s_level_max))?;
    guards.entries("s vector", s_vector_len(level))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SVector {
    pub level: u32,
    pub entries: RowVec,
}

/// `s_1 = ⟨x − 1, 1⟩`.
pub fn s1() -> RowVec {
    RowVec::new(vec![&RingElem::x() - &RingElem::one(), RingElem::one()])
}

/// `s_ℓ = λ s_{ℓ-1}^{⟨2⟩} − (λ − 1)(0 ⌢ 1)`.
pub fn s_vector_direct(level: u32, mode: &LambdaMode, guards: &Guards) -> Result<SVector> {
    check_level(level, guards)?;
    let lam = mode.lambda()?;
    let correction = &lam - &RingElem::one();
    let mut s = s1();
    for _ in 2..=level {
        let mut next = s.kron(&s).scale(&lam).into_entries();
        if let Some(last) = next.last_mut() {
            *last -= &correction;
        }
        s = RowVec::new(next);
    }
    Ok(SVector { level, entries: s })
}

/// `l_n = 1_{2^{2^n} − 1} ⌢ ⟨λ^{-1}⟩`.
pub fn l_vector(n: u32, mode: &LambdaMode, guards: &Guards) -> Result<RowVec> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    let len = s_vector_len(n + 1);
    guards.entries("l vector", len)?;
    let mut v = RowVec::<RingElem>::ones(len as usize).into_entries();
    *v.last_mut().expect("nonempty") = mode.lambda_inv()?;
    Ok(RowVec::new(v))
}

/// `r_{λ,n} = Π_{i=1}^n l_i^{⟨2^{n-i}⟩}`, length `2^{2^n}`.
pub fn r_lambda(n: u32, mode: &LambdaMode, guards: &Guards) -> Result<RowVec> {
    let len = s_vector_len(n + 1);
    guards.entries("r vector", len)?;
    let mut acc = RowVec::<RingElem>::ones(len as usize);
    for i in 1..=n {
        let factor = l_vector(i, mode, guards)?.kron_power(1 << (n - i));
        acc = acc.hadamard(&factor)?;
    }
    Ok(acc)
}

/// First `len` entries of the infinite product `r_λ = Π_i l_i^{⟨∞⟩}`.
/// Only factors with `|l_i| ≤ len` differ from 1 on the prefix.
pub fn r_lambda_prefix(len: usize, mode: &LambdaMode, guards: &Guards) -> Result<RowVec> {
    guards.entries("r prefix", len as u64)?;
    let mut acc = RowVec::<RingElem>::ones(len);
    let mut i = 1;
    while i < 6 && s_vector_len(i + 1) <= len as u64 {
        let factor = kron_power_prefix(&l_vector(i, mode, guards)?, len)?;
        acc = acc.hadamard(&factor)?;
        i += 1;
    }
    Ok(acc)
}

/// The three right-hand sides of the solved vector recurrence, each compared
/// entrywise with the directly built vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq1Report {
    pub level: u32,
    /// `|s_ℓ|_1 = s^{(ℓ-1)}(x)`.
    pub sum_matches_iterate: bool,
    /// `λ s_{ℓ-1}^{⟨2⟩} l_{ℓ-1}`.
    pub via_previous_level: bool,
    /// `λ^{2^{ℓ-1}-1} s_1^{⟨2^{ℓ-1}⟩} r_{λ,ℓ-1}`.
    pub via_finite_product: bool,
    /// Same with the prefix of the infinite product.
    pub via_infinite_prefix: bool,
}

impl Eq1Report {
    pub fn all_hold(&self) -> bool {
        self.sum_matches_iterate && self.via_previous_level && self.via_finite_product && self.via_infinite_prefix
    }
}

pub fn s_closed_eq1_report(level: u32, mode: &LambdaMode, guards: &Guards) -> Result<Eq1Report> {
    if level < 2 {
        return Err(out_of_range(format!("level = {level}"), "level >= 2"));
    }
    let direct = s_vector_direct(level, mode, guards)?.entries;
    let lam = mode.lambda()?;
    let prev = s_vector_direct(level - 1, mode, guards)?.entries;
    let via_previous = prev.kron(&prev).scale(&lam).hadamard(&l_vector(level - 1, mode, guards)?)?;

    let power = 1u32 << (level - 1);
    let prefactor = lam.pow(power - 1);
    let base = s1().kron_power(power).scale(&prefactor);
    let via_product = base.hadamard(&r_lambda(level - 1, mode, guards)?)?;
    let via_prefix = base.hadamard(&r_lambda_prefix(direct.len(), mode, guards)?)?;

    let iterate = s_iterate_oracle(level - 1);
    let iterate = match mode {
        LambdaMode::Symbolic => iterate,
        LambdaMode::Rational(v) => iterate.eval_lambda(v)?,
    };
    Ok(Eq1Report {
        level,
        sum_matches_iterate: direct.sum() == iterate,
        via_previous_level: via_previous == direct,
        via_finite_product: via_product == direct,
        via_infinite_prefix: via_prefix == direct,
    })
}

pub fn s_closed_eq1_check(level: u32, guards: &Guards) -> Result<bool> {
    Ok(s_closed_eq1_report(level, &LambdaMode::Symbolic, guards)?.all_hold())
}

/// `(h_n)_j = 2^{n-1} − Σ_k [2^k, 2^k]_j`, the power of `x − 1` in entry `j`
/// of `s_1^{⟨2^{n-1}⟩}`.
pub fn h_exponent(j: u64, n: u32) -> Result<u64> {
    if !(1..=6).contains(&n) || j < 1 || j > s_vector_len(n) {
        return Err(out_of_range(format!("h exponent j={j} n={n}"), "1 <= n <= 6, 1 <= j <= 2^(2^(n-1))"));
    }
    let bits: u64 = (0..(1u32 << (n - 1))).map(|k| u64::from(step(1 << k, 1 << k, j))).sum();
    Ok((1u64 << (n - 1)) - bits)
}

/// Which `i` the double sum for `log₂ r_{2,n}` starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum R2LogStart {
    /// `i ≥ 1`, matching `r = Π_{i≥1} l_i`.
    FromOne,
    /// `i ≥ 0` as printed; adds the `⟨1, 2⟩` factor.
    FromZero,
}

/// `(log₂ r_{2,n})_j = Σ_{i,k} [2^{2^i k}(2^{2^i} − 1), 2^{2^i k}]_j`: the
/// `e` with `(r_{λ,n})_j = λ^{-e}`. Terms whose first 1-position exceeds `j`
/// are dropped.
pub fn r2log_exponent_with(j: u64, n: u32, start: R2LogStart) -> Result<u64> {
    if n > 5 || j < 1 || j > s_vector_len(n + 1) {
        return Err(out_of_range(format!("r2log exponent j={j} n={n}"), "n <= 5, 1 <= j <= 2^(2^n)"));
    }
    Ok(r2log_unbounded(j, start))
}

/// The exponent sum for any `j`, relying only on the cutoffs.
pub fn r2log_unbounded(j: u64, start: R2LogStart) -> u64 {
    let first = match start {
        R2LogStart::FromOne => 1,
        R2LogStart::FromZero => 0,
    };
    let mut total = 0;
    for i in first..6u32 {
        let m = 1u128 << (1u32 << i);
        if m > u128::from(j) {
            break;
        }
        total += kron_power_log(m as u64, 64, j);
    }
    total
}

pub fn r2log_exponent(j: u64, n: u32) -> Result<u64> {
    r2log_exponent_with(j, n, R2LogStart::FromOne)
}

/// Exponents of `x − 1` read off `⟨2, 1⟩^{⟨2^{n-1}⟩}` built directly.
pub fn h_exponents_direct(n: u32, guards: &Guards) -> Result<Vec<u64>> {
    guards.entries("h vector", s_vector_len(n))?;
    let base = RowVec::<Rational>::new(vec![Rational::from_integer(2.into()), Rational::one()]);
    base.kron_power(1 << (n - 1)).iter().map(log2_exact).collect()
}

fn log2_exact(value: &Rational) -> Result<u64> {
    let numer = value.numer();
    if !value.denom().is_one() || numer.sign() != num_bigint::Sign::Plus || !(numer & (numer - 1u32)).is_zero() {
        return Err(Error::Parse(format!("{value} is not a power of two")));
    }
    Ok(numer.bits() - 1)
}

/// `e_j` with `(r_{λ,n})_j = λ^{-e_j}`, read off the constructed vector.
pub fn r2log_exponents_direct(n: u32, guards: &Guards) -> Result<Vec<u64>> {
    r_lambda(n, &LambdaMode::Symbolic, guards)?.iter().map(neg_lambda_exponent).collect()
}

fn neg_lambda_exponent(entry: &RingElem) -> Result<u64> {
    let mut terms = entry.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if m.x == 0 && m.lambda <= 0 && c.is_one() => Ok(m.lambda.unsigned_abs()),
        _ => Err(Error::Parse(format!("{entry} is not a power of 1/λ"))),
    }
}

/// One reading of the summation in the `(x − 1)`-expansion of the iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperLimit {
    /// `2^{2^ℓ}` as printed.
    Printed,
    /// `2^{2^{ℓ-1}}`, the length of `s_1^{⟨2^{ℓ-1}⟩}`.
    VectorLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetIterate {
    /// Compare with `s^{(ℓ)}(x)` as printed.
    Level,
    /// Compare with `s^{(ℓ-1)}(x)`.
    LevelMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2Convention {
    pub upper_limit: UpperLimit,
    pub target: TargetIterate,
}

impl Eq2Convention {
    pub const ALL: [Eq2Convention; 4] = [
        Eq2Convention { upper_limit: UpperLimit::Printed, target: TargetIterate::Level },
        Eq2Convention { upper_limit: UpperLimit::Printed, target: TargetIterate::LevelMinusOne },
        Eq2Convention { upper_limit: UpperLimit::VectorLength, target: TargetIterate::Level },
        Eq2Convention { upper_limit: UpperLimit::VectorLength, target: TargetIterate::LevelMinusOne },
    ];

    pub fn name(&self) -> String {
        let limit = match self.upper_limit {
            UpperLimit::Printed => "limit=2^(2^n)",
            UpperLimit::VectorLength => "limit=2^(2^(n-1))",
        };
        let target = match self.target {
            TargetIterate::Level => "iterate=n",
            TargetIterate::LevelMinusOne => "iterate=n-1",
        };
        format!("{limit},{target}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eq2Status {
    Matches,
    Differs,
    /// The summation runs past the end of the exponent vectors.
    OutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2Outcome {
    pub convention: String,
    pub status: Eq2Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2LevelReport {
    pub level: u32,
    pub sum: String,
    pub outcomes: Vec<Eq2Outcome>,
}

/// `λ^{2^{ℓ-1}-1} Σ_{j=1}^{L} (x − 1)^{(h_ℓ)_j} λ^{-(log₂ r_{2,ℓ-1})_j}` with
/// `L = 2^{2^{ℓ-1}}`.
pub fn eq2_sum(level: u32, guards: &Guards) -> Result<RingElem> {
    check_level(level, guards)?;
    let len = s_vector_len(level);
    let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for j in 1..=len {
        let h = h_exponent(j, level)?;
        let e = r2log_exponent(j, level - 1)?;
        *counts.entry((h, e)).or_default() += 1;
    }
    let xm1 = &RingElem::x() - &RingElem::one();
    let mut total = RingElem::zero();
    for ((h, e), count) in counts {
        let term = xm1.pow(h as u32).shift(0, -(e as i64)).scale(&Rational::from_integer(count.into()));
        total += &term;
    }
    Ok(total.shift(0, (1i64 << (level - 1)) - 1))
}

pub fn s_closed_eq2_check(level: u32, guards: &Guards) -> Result<Eq2LevelReport> {
    let sum = eq2_sum(level, guards)?;
    let outcomes = Eq2Convention::ALL
        .iter()
        .map(|conv| {
            let status = match conv.upper_limit {
                UpperLimit::Printed => Eq2Status::OutOfRange,
                UpperLimit::VectorLength => {
                    let t = match conv.target {
                        TargetIterate::Level => level,
                        TargetIterate::LevelMinusOne => level - 1,
                    };
                    if s_iterate_oracle(t) == sum {
                        Eq2Status::Matches
                    } else {
                        Eq2Status::Differs
                    }
                }
            };
            Eq2Outcome { convention: conv.name(), status }
        })
        .collect();
    Ok(Eq2LevelReport { level, sum: sum.to_string(), outcomes })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2Reconciliation {
    pub levels: Vec<Eq2LevelReport>,
    /// Conventions that match at every level checked.
    pub consistent: Vec<String>,
}

pub fn eq2_reconcile(levels: std::ops::RangeInclusive<u32>, guards: &Guards) -> Result<Eq2Reconciliation> {
    let levels: Vec<Eq2LevelReport> = levels.map(|l| s_closed_eq2_check(l, guards)).collect::<Result<_>>()?;
    let consistent = Eq2Convention::ALL
        .iter()
        .map(Eq2Convention::name)
        .filter(|name| {
            levels
                .iter()
                .all(|lvl| lvl.outcomes.iter().any(|o| &o.convention == name && o.status == Eq2Status::Matches))
        })
        .collect();
    Ok(Eq2Reconciliation { levels, consistent })
}

/// Entries of `s_1^{⟨n⟩}` as `(x − 1)` exponents: `n − popcount(j − 1)`.
pub(crate) fn s1_power_exponent(j: u64, n: u32) -> u64 {
    u64::from(n) - u64::from((j - 1).count_ones())
}
