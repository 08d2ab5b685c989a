//! The sequence `f_n(x) = |λ^{n-1} s_1^{⟨n⟩} (r)_1^{2^n}|_1` and the
//! conjectured rule
//! `f_n = f_{n/2}∘s` (n even), `λx f_{n-1}` (n odd > 1), `x` (n = 1).
//!
//! This produces a verdict table; it does not assert the rule.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Rational, RingElem};
use crate::error::{check_limit, out_of_range, Error, Result};
use crate::guard::Guards;

use super::smap::{r2log_unbounded, r_lambda, s1_power_exponent, s_poly, LambdaMode, R2LogStart};

/// Which infinite vector supplies the prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RMode {
    /// `r_λ`, entries `λ^{-e}`.
    #[default]
    Lambda,
    /// `r_2`, entries `2^{e}` (the `λ^{-1} ↦ 2` reading of `log₂ r_2`).
    Two,
}

/// `f_n(x)`.
pub fn f_value(n: u32, mode: RMode, guards: &Guards) -> Result<RingElem> {
    if n < 1 {
        return Err(out_of_range("n = 0", "n >= 1"));
    }
    check_limit("hypothesis n", u64::from(n), u64::from(guards.hypothesis_max))?;
    let len = 1u64 << n;
    guards.entries("hypothesis prefix", len)?;
    let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for j in 1..=len {
        let h = s1_power_exponent(j, n);
        let e = r2log_unbounded(j, R2LogStart::FromOne);
        *counts.entry((h, e)).or_default() += 1;
    }
    let xm1 = &RingElem::x() - &RingElem::one();
    let two = Rational::from_integer(2.into());
    let mut total = RingElem::zero();
    for ((h, e), count) in counts {
        let mut term = xm1.pow(h as u32).scale(&Rational::from_integer(count.into()));
        term = match mode {
            RMode::Lambda => term.shift(0, -(e as i64)),
            RMode::Two => term.scale(&num_traits::pow(two.clone(), e as usize)),
        };
        total += &term;
    }
    Ok(total.shift(0, i64::from(n) - 1))
}

/// Confirms the exponent formula reproduces the constructed `r_{λ,m}` on the
/// prefix used for `n`, with `m` the least level whose length covers `2^n`.
pub fn validate_prefix(n: u32, guards: &Guards) -> Result<bool> {
    let len = 1u64 << n;
    let mut m = 1;
    while (1u64 << (1u64 << m)) < len {
        m += 1;
    }
    let r = r_lambda(m, &LambdaMode::Symbolic, guards)?;
    Ok((1..=len).all(|j| {
        let e = r2log_unbounded(j, R2LogStart::FromOne) as i64;
        r.get(j as usize).map(|v| *v == RingElem::lambda_pow(-e)).unwrap_or(false)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisRow {
    pub n: u32,
    /// `base`, `even` or `odd`.
    pub rule: String,
    pub f_n: String,
    pub predicted: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisReport {
    pub n_max: u32,
    pub r_mode: RMode,
    pub prefix_validated: bool,
    pub rows: Vec<HypothesisRow>,
}

pub fn f_hypothesis_check(n_max: u32, mode: RMode, guards: &Guards) -> Result<HypothesisReport> {
    if n_max < 1 {
        return Err(out_of_range("n_max = 0", "n_max >= 1"));
    }
    check_limit("hypothesis n", u64::from(n_max), u64::from(guards.hypothesis_max))?;
    let values: Vec<RingElem> = (1..=n_max).map(|n| f_value(n, mode, guards)).collect::<Result<_>>()?;
    let f = |n: u32| &values[(n - 1) as usize];
    let s = s_poly();
    let rows = (1..=n_max)
        .map(|n| {
            let (rule, predicted) = if n == 1 {
                ("base", RingElem::x())
            } else if n % 2 == 0 {
                ("even", f(n / 2).compose_x(&s))
            } else {
                ("odd", &(&RingElem::lambda() * &RingElem::x()) * f(n - 1))
            };
            HypothesisRow {
                n,
                rule: rule.to_string(),
                holds: *f(n) == predicted,
                f_n: f(n).to_string(),
                predicted: predicted.to_string(),
            }
        })
        .collect();
    let prefix_validated = validate_prefix(n_max.min(16), guards)?;
    Ok(HypothesisReport { n_max, r_mode: mode, prefix_validated, rows })
}

/// Structural validation of a serialized report: required keys with the
/// right JSON types, no unknown keys, rows numbered `1..=n_max`.
pub fn validate_hypothesis_json(value: &Value) -> Result<()> {
    let fail = |msg: &str| Err(Error::Parse(format!("hypothesis report: {msg}")));
    let Some(obj) = value.as_object() else { return fail("not an object") };
    let expected = ["n_max", "r_mode", "prefix_validated", "rows"];
    if obj.len() != expected.len() || !expected.iter().all(|k| obj.contains_key(*k)) {
        return fail("wrong top-level keys");
    }
    let Some(n_max) = obj["n_max"].as_u64() else { return fail("n_max must be an integer") };
    if !matches!(obj["r_mode"].as_str(), Some("lambda" | "two")) {
        return fail("r_mode must be \"lambda\" or \"two\"");
    }
    if !obj["prefix_validated"].is_boolean() {
        return fail("prefix_validated must be a boolean");
    }
    let Some(rows) = obj["rows"].as_array() else { return fail("rows must be an array") };
    if rows.len() as u64 != n_max {
        return fail("row count must equal n_max");
    }
    for (idx, row) in rows.iter().enumerate() {
        let Some(r) = row.as_object() else { return fail("row is not an object") };
        if r.len() != 5 {
            return fail("row has wrong keys");
        }
        if r.get("n").and_then(Value::as_u64) != Some(idx as u64 + 1) {
            return fail("rows must be numbered 1..=n_max");
        }
        if !matches!(r.get("rule").and_then(Value::as_str), Some("base" | "even" | "odd")) {
            return fail("rule must be base, even or odd");
        }
        for key in ["f_n", "predicted"] {
            if !r.get(key).is_some_and(Value::is_string) {
                return fail("f_n and predicted must be strings");
            }
        }
        if !r.get("holds").is_some_and(Value::is_boolean) {
            return fail("holds must be a boolean");
        }
    }
    Ok(())
}
