//! Integer tables `κ_{n,k}` from the iterate at `x = 2`.
//!
//! Normalisation: `s^{(n)}(2) = λ^{2^n − 1} Σ_{k=0}^{2^n − 1} κ_{n,k} λ^{-k}`,
//! so `κ_1 = (3, 1)` from `s(2) = 3λ + 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, RingElem};
use crate::error::{check_limit, out_of_range, Error, Result};
use crate::guard::{bigint_strings, Guards};

use super::smap::{r_lambda, s_poly, LambdaMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaSource {
    Direct,
    Recursion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaTable {
    pub n: u32,
    pub source: KappaSource,
    #[serde(with = "bigint_strings")]
    pub counts: Vec<BigInt>,
}

impl KappaTable {
    pub fn get(&self, k: usize) -> BigInt {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }
}

/// How the direct table is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaMethod {
    /// Count exponents in the constructed vector `r_{λ,n}` (length `2^{2^n}`).
    Vector,
    /// Expand `s^{(n)}(2)` as a Laurent polynomial in `λ`.
    Symbolic,
}

pub fn kappa_direct(n: u32, method: KappaMethod, guards: &Guards) -> Result<KappaTable> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    let width = 1usize << n;
    let counts = match method {
        KappaMethod::Vector => {
            check_limit("kappa via vectors", u64::from(n), u64::from(guards.kappa_vector_max))?;
            let r = r_lambda(n, &LambdaMode::Symbolic, guards)?;
            let mut counts = vec![BigInt::zero(); width];
            for entry in r.iter() {
                let e = entry.terms().next().map(|(m, _)| m.lambda.unsigned_abs() as usize).unwrap_or(0);
                if e >= width {
                    return Err(out_of_range(format!("exponent {e}"), format!("0..{width}")));
                }
                counts[e] += 1;
            }
            counts
        }
        KappaMethod::Symbolic => {
            check_limit("kappa via expansion", u64::from(n), u64::from(guards.kappa_symbolic_max))?;
            let value = s_iterate_at_two(n);
            let top = (width - 1) as i64;
            let mut counts = vec![BigInt::zero(); width];
            for (m, c) in value.terms() {
                let k = top - m.lambda;
                if m.x != 0 || !(0..=top).contains(&k) || !c.is_integer() {
                    return Err(Error::Parse(format!("unexpected term in s^({n})(2)")));
                }
                counts[k as usize] = c.to_integer();
            }
            counts
        }
    };
    Ok(KappaTable { n, source: KappaSource::Direct, counts })
}

/// `s^{(n)}(2)` as a Laurent polynomial in `λ`.
pub fn s_iterate_at_two(n: u32) -> RingElem {
    let s = s_poly();
    let mut value = RingElem::constant(Rational::from_integer(2.into()));
    for _ in 0..n {
        value = s.compose_x(&value);
    }
    value
}

/// A delta correction `sign · δ_{k, 2^{n+shift} + offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub sign: i8,
    pub shift: i32,
    pub offset: i64,
}

impl DeltaTerm {
    /// Position `k` at level `n`, `None` if it falls below zero.
    pub fn position(&self, n: u32) -> Option<u64> {
        let exp = n as i64 + i64::from(self.shift);
        if exp < 0 {
            return None;
        }
        let pos = (1i64 << exp) + self.offset;
        u64::try_from(pos).ok()
    }
}

impl fmt::Display for DeltaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign < 0 { "-" } else { "+" })?;
        match self.shift {
            0 => f.write_str("2^n")?,
            s if s > 0 => write!(f, "2^(n+{s})")?,
            s => write!(f, "2^(n{s})")?,
        }
        match self.offset {
            0 => Ok(()),
            o if o > 0 => write!(f, "+{o}"),
            o => write!(f, "{o}"),
        }
    }
}

/// A list of delta corrections, written like `+2^(n-1),-2^(n-2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DeltaRule {
    pub terms: Vec<DeltaTerm>,
}

impl DeltaRule {
    /// The corrections as printed: `δ_{k,2^{n-1}} − δ_{k,2^{n-2}}`.
    pub fn printed() -> DeltaRule {
        DeltaRule::parse("+2^(n-1),-2^(n-2)").expect("valid rule")
    }

    /// Candidate corrections tried by default.
    pub fn default_candidates() -> Vec<DeltaRule> {
        ["+2^n-1,-2^(n-1)", "+2^n-1,-2^n-2"].iter().map(|s| DeltaRule::parse(s).expect("valid rule")).collect()
    }

    pub fn parse(text: &str) -> Result<DeltaRule> {
        let terms =
            text.split(',').map(str::trim).filter(|t| !t.is_empty()).map(parse_term).collect::<Result<Vec<_>>>()?;
        Ok(DeltaRule { terms })
    }

    pub fn value(&self, n: u32, k: u64) -> i64 {
        self.terms.iter().filter(|t| t.position(n) == Some(k)).map(|t| i64::from(t.sign)).sum()
    }
}

fn parse_term(text: &str) -> Result<DeltaTerm> {
    let bad = || Error::Parse(format!("bad delta term `{text}`"));
    let (sign, rest) = match text.as_bytes().first() {
        Some(b'+') => (1, &text[1..]),
        Some(b'-') => (-1, &text[1..]),
        _ => (1, text),
    };
    let rest = rest.strip_prefix("2^").ok_or_else(bad)?;
    let (shift, rest) = if let Some(inner) = rest.strip_prefix("(n") {
        let close = inner.find(')').ok_or_else(bad)?;
        let shift: i32 = inner[..close].parse().map_err(|_| bad())?;
        (shift, &inner[close + 1..])
    } else if let Some(rest) = rest.strip_prefix('n') {
        (0, rest)
    } else {
        return Err(bad());
    };
    let offset = if rest.is_empty() { 0 } else { rest.strip_prefix('+').unwrap_or(rest).parse().map_err(|_| bad())? };
    Ok(DeltaTerm { sign, shift, offset })
}

impl fmt::Display for DeltaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl TryFrom<String> for DeltaRule {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        DeltaRule::parse(&value)
    }
}

impl From<DeltaRule> for String {
    fn from(rule: DeltaRule) -> String {
        rule.to_string()
    }
}

/// Tables `κ_1 ..= κ_n` from `κ_{n,0} = 3^{2^{n-1}}`, `κ_{1,k} = δ_{k,1}` and
/// `κ_{n,k} = deltas + Σ_{i=0}^k κ_{n-1,k-i} κ_{n-1,i}` for `k ≥ 1`.
pub fn kappa_recursion_with(n: u32, rule: &DeltaRule, guards: &Guards) -> Result<Vec<KappaTable>> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    check_limit("kappa recursion", u64::from(n), u64::from(guards.kappa_recursion_max))?;
    let mut tables =
        vec![KappaTable { n: 1, source: KappaSource::Recursion, counts: vec![BigInt::from(3), BigInt::one()] }];
    for level in 2..=n {
        let prev = &tables.last().expect("nonempty").counts;
        let width = 1usize << level;
        let mut counts = vec![BigInt::zero(); width];
        counts[0] = num_traits::pow(BigInt::from(3), 1usize << (level - 1));
        for (k, slot) in counts.iter_mut().enumerate().skip(1) {
            let mut acc = BigInt::from(rule.value(level, k as u64));
            for i in 0..=k {
                if let (Some(a), Some(b)) = (prev.get(k - i), prev.get(i)) {
                    acc += a * b;
                }
            }
            *slot = acc;
        }
        tables.push(KappaTable { n: level, source: KappaSource::Recursion, counts });
    }
    Ok(tables)
}

pub fn kappa_recursion(n: u32, guards: &Guards) -> Result<KappaTable> {
    Ok(kappa_recursion_with(n, &DeltaRule::printed(), guards)?.pop().expect("nonempty"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaMismatch {
    pub k: usize,
    pub recursion: String,
    pub direct: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaLevelComparison {
    pub n: u32,
    pub agree: bool,
    pub mismatches: Vec<KappaMismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateVerdict {
    pub rule: DeltaRule,
    pub matches_all: bool,
    /// Smallest `n` where the candidate disagrees with the direct table.
    pub first_failure: Option<u32>,
}

/// Checks of the closed evaluations `κ_{n,0} = 3^{2^{n-1}}` and
/// `κ_{n,1} = 2^{n-1} 3^{2^{n-1} − 1}` against the direct table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaFormulaCheck {
    pub n: u32,
    pub kappa0_holds: bool,
    pub kappa1_holds: bool,
    /// `Σ_k κ_{n,k} = 2^{2^n}`.
    pub total_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaReport {
    pub n_max: u32,
    pub direct: Vec<KappaTable>,
    pub printed: Vec<KappaTable>,
    pub printed_vs_direct: Vec<KappaLevelComparison>,
    pub candidates: Vec<CandidateVerdict>,
    pub formulas: Vec<KappaFormulaCheck>,
}

fn compare(recursion: &KappaTable, direct: &KappaTable) -> KappaLevelComparison {
    let width = recursion.counts.len().max(direct.counts.len());
    let mismatches: Vec<KappaMismatch> = (0..width)
        .filter(|&k| recursion.get(k) != direct.get(k))
        .map(|k| KappaMismatch { k, recursion: recursion.get(k).to_string(), direct: direct.get(k).to_string() })
        .collect();
    KappaLevelComparison { n: direct.n, agree: mismatches.is_empty(), mismatches }
}

pub fn kappa_formula_check(table: &KappaTable) -> KappaFormulaCheck {
    let n = table.n;
    let half = 1usize << (n - 1);
    let three = BigInt::from(3);
    let kappa0 = num_traits::pow(three.clone(), half);
    let kappa1 = num_traits::pow(BigInt::from(2), (n - 1) as usize) * num_traits::pow(three, half - 1);
    let total = BigInt::one() << (1usize << n);
    KappaFormulaCheck {
        n,
        kappa0_holds: table.get(0) == kappa0,
        kappa1_holds: table.get(1) == kappa1,
        total_holds: table.total() == total,
    }
}

pub fn kappa_reconcile(n_max: u32, candidates: &[DeltaRule], guards: &Guards) -> Result<KappaReport> {
    if n_max > 10 {
        return Err(out_of_range(format!("n_max = {n_max}"), "n_max <= 10"));
    }
    let direct: Vec<KappaTable> =
        (1..=n_max).map(|n| kappa_direct(n, KappaMethod::Symbolic, guards)).collect::<Result<_>>()?;
    let printed = if n_max >= 1 { kappa_recursion_with(n_max, &DeltaRule::printed(), guards)? } else { vec![] };
    let printed_vs_direct = printed.iter().zip(&direct).map(|(p, d)| compare(p, d)).collect();
    let candidates = candidates
        .iter()
        .map(|rule| {
            let tables = if n_max >= 1 { kappa_recursion_with(n_max, rule, guards)? } else { vec![] };
            let first_failure = tables.iter().zip(&direct).find(|(t, d)| !compare(t, d).agree).map(|(t, _)| t.n);
            Ok(CandidateVerdict { rule: rule.clone(), matches_all: first_failure.is_none(), first_failure })
        })
        .collect::<Result<_>>()?;
    let formulas = direct.iter().map(kappa_formula_check).collect();
    Ok(KappaReport { n_max, direct, printed, printed_vs_direct, candidates, formulas })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn direct_tables() {
        let g = Guards::default();
        for method in [KappaMethod::Vector, KappaMethod::Symbolic] {
            assert_eq!(kappa_direct(1, method, &g).unwrap().counts, ints(&[3, 1]));
            assert_eq!(kappa_direct(2, method, &g).unwrap().counts, ints(&[9, 6, 0, 1]));
        }
        for n in 1..=4 {
            assert_eq!(
                kappa_direct(n, KappaMethod::Vector, &g).unwrap(),
                kappa_direct(n, KappaMethod::Symbolic, &g).unwrap(),
                "n={n}"
            );
        }
        assert!(kappa_direct(5, KappaMethod::Vector, &g).is_err());
    }

    #[test]
    fn printed_recursion_values() {
        let g = Guards::default();
        assert_eq!(kappa_recursion(1, &g).unwrap().counts, ints(&[3, 1]));
        assert_eq!(kappa_recursion(2, &g).unwrap().counts, ints(&[9, 5, 2, 0]));
    }

    #[test]
    fn delta_rules_parse_and_print() {
        for text in ["+2^(n-1),-2^(n-2)", "+2^n-1,-2^(n-1)", "+2^n-1,-2^n-2", "-2^(n+1)+3"] {
            assert_eq!(DeltaRule::parse(text).unwrap().to_string(), text);
        }
        assert!(DeltaRule::parse("+3^n").is_err());
        assert!(DeltaRule::parse("+2^(n-1").is_err());
        let rule = DeltaRule::parse("+2^n-1,-2^(n-1)").unwrap();
        assert_eq!(rule.value(2, 3), 1);
        assert_eq!(rule.value(2, 2), -1);
        assert_eq!(rule.value(2, 1), 0);
    }

    #[test]
    fn reconcile_small() {
        let g = Guards::default();
        let r1 = kappa_reconcile(1, &DeltaRule::default_candidates(), &g).unwrap();
        assert!(r1.printed_vs_direct.iter().all(|c| c.agree));
        let r2 = kappa_reconcile(2, &DeltaRule::default_candidates(), &g).unwrap();
        assert!(!r2.printed_vs_direct[1].agree);
        assert!(r2.candidates.iter().all(|c| c.matches_all));
    }
}
