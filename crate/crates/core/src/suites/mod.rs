//! Verification suites: closed forms against oracles on seeded random and
//! symbolic instances, plus reconciliation reports.

pub mod errata;
pub mod instances;
pub mod report;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{CoeffTable, Rational, RingElem, Scalar};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::guard::Guards;
use crate::quadratic::{
    coeffs_from_p_vector, eq2_reconcile, f_hypothesis_check, h_exponent, h_exponents_direct, kappa_direct,
    kappa_formula_check, kappa_reconcile, p_coeffs_closed, p_coeffs_recursion, p_iterate_oracle, p_vector,
    q_genpoly_compare, r2log_exponent, r2log_exponents_direct, s_closed_eq1_report, validate_hypothesis_json,
    DeltaRule, KappaMethod, LambdaMode, QBinomial, QOrdering, RMode,
};
use crate::recurrences::{
    affine_vector_closed, affine_vector_oracle, full_history_chains, full_history_nonhom_vector, full_history_oracle,
    kron_surviving_count, order2_closed_fibword, order2_closed_kron, order2_nonhom_closed, order2_oracle,
    Order2Problem,
};
use crate::vector::{fib, step, step_prefix_kron, weighted_sum_kron_identity_check, RowVec};

pub use errata::all_findings;
pub use instances::{random_instance, Instance};
pub use report::{render, render_errata_markdown, Finding, FindingStatus, Format, MismatchRecord, SuiteReport};

use instances::{
    case_rng, describe_affine, describe_full_history, describe_order2, random_affine, random_full_history,
    random_order2, small_ring_elem, symbolic_full_history, symbolic_order2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Thm1,
    Thm2,
    Thm3,
    Lemma1,
    Nonhom2,
    Nonhomfull,
    Thm4,
    Eq1,
    Eq2,
    Exponents,
    Kappa,
    Genpoly,
    Hypothesis,
    Vectorlaws,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
        Suite::Lemma1,
        Suite::Nonhom2,
        Suite::Nonhomfull,
        Suite::Thm4,
        Suite::Eq1,
        Suite::Eq2,
        Suite::Exponents,
        Suite::Kappa,
        Suite::Genpoly,
        Suite::Hypothesis,
        Suite::Vectorlaws,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Lemma1 => "lemma1",
            Suite::Nonhom2 => "nonhom2",
            Suite::Nonhomfull => "nonhomfull",
            Suite::Thm4 => "thm4",
            Suite::Eq1 => "eq1",
            Suite::Eq2 => "eq2",
            Suite::Exponents => "exponents",
            Suite::Kappa => "kappa",
            Suite::Genpoly => "genpoly",
            Suite::Hypothesis => "hypothesis",
            Suite::Vectorlaws => "vectorlaws",
        }
    }

    pub fn parse(text: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == text).ok_or_else(|| Error::UnknownSuite(text.to_string()))
    }

    pub fn default_n_max(self) -> u32 {
        match self {
            Suite::Thm1 => 18,
            Suite::Thm2 => 16,
            Suite::Thm3 => 14,
            Suite::Lemma1 => 6,
            Suite::Nonhom2 | Suite::Nonhomfull => 12,
            Suite::Thm4 | Suite::Eq1 | Suite::Eq2 => 5,
            Suite::Exponents | Suite::Genpoly => 4,
            Suite::Kappa => 6,
            Suite::Hypothesis => 12,
            Suite::Vectorlaws => 0,
        }
    }

    pub fn default_cases(self) -> u32 {
        match self {
            Suite::Thm1 | Suite::Thm2 => 100,
            Suite::Thm3 | Suite::Lemma1 | Suite::Nonhom2 | Suite::Nonhomfull => 50,
            Suite::Vectorlaws => 200,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n_max: u32,
    pub cases: u32,
    pub master_seed: u64,
    pub format: Format,
    pub guards: Guards,
    /// Scheduling only; never changes the report.
    pub exec: Exec,
    /// Use the printed `q_{k,i}` binomial in the thm4 suite.
    pub paper_verbatim: bool,
    pub r_mode: RMode,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            suite,
            n_max: suite.default_n_max(),
            cases: suite.default_cases(),
            master_seed: 42,
            format: Format::Json,
            guards: Guards::default(),
            exec: Exec::default(),
            paper_verbatim: false,
            r_mode: RMode::Lambda,
        }
    }
}

/// Outcome of one exact check.
type Check = std::result::Result<(), Box<MismatchRecord>>;

#[derive(Default)]
struct Tally {
    passed: u64,
    failed: u64,
    mismatches: Vec<MismatchRecord>,
}

impl Tally {
    fn absorb(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            match c {
                Ok(()) => self.passed += 1,
                Err(m) => {
                    self.failed += 1;
                    self.mismatches.push(*m);
                }
            }
        }
    }

    fn finish(self, cfg: &SuiteConfig, cases: u64, findings: Vec<Finding>, reports: Value) -> SuiteReport {
        SuiteReport {
            suite: cfg.suite.name().to_string(),
            cases,
            passed: self.passed,
            failed: self.failed,
            mismatches: self.mismatches,
            findings,
            reports,
        }
    }
}

struct Ctx<'a> {
    suite: &'a str,
    conventions: &'a [String],
}

impl Ctx<'_> {
    fn eq<T: Scalar>(&self, instance: impl FnOnce() -> Value, n: u64, expected: &T, actual: &T) -> Check {
        self.cmp(expected == actual, instance, n, || expected.render(), || actual.render())
    }

    fn cmp(
        &self,
        ok: bool,
        instance: impl FnOnce() -> Value,
        n: u64,
        expected: impl FnOnce() -> String,
        actual: impl FnOnce() -> String,
    ) -> Check {
        if ok {
            return Ok(());
        }
        Err(Box::new(MismatchRecord {
            suite: self.suite.to_string(),
            instance: instance(),
            n,
            expected: expected(),
            actual: actual(),
            conventions: self.conventions.to_vec(),
        }))
    }

    fn holds(&self, ok: bool, instance: impl FnOnce() -> Value, n: u64) -> Check {
        self.cmp(ok, instance, n, || "holds".into(), || "fails".into())
    }
}

fn render_vec<T: Scalar>(v: &RowVec<T>) -> String {
    v.iter().map(Scalar::render).collect::<Vec<_>>().join(", ")
}

fn render_table(t: &CoeffTable, k: u64) -> String {
    t.get(k).to_string()
}

/// Flattens per-case check lists in case order.
fn per_case<F>(exec: Exec, cases: u32, f: F) -> Result<Vec<Check>>
where
    F: Fn(u64) -> Result<Vec<Check>> + Sync + Send,
{
    let results = map_range(exec, 0..u64::from(cases), f);
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn base_conventions(cfg: &SuiteConfig) -> Vec<String> {
    let v: &[&str] = match cfg.suite {
        Suite::Thm1 => &["fib-base=f1=f2=1"],
        Suite::Thm2 => &["fib-base=f1=f2=1", "surviving-count=f_n"],
        Suite::Nonhom2 => &["c-index=n+1"],
        Suite::Thm3 | Suite::Nonhomfull => &["empty-chain=included"],
        Suite::Thm4 if cfg.paper_verbatim => &["q-binomial=C(i,k-1)"],
        Suite::Thm4 => &["q-binomial=C(i,k-i)"],
        Suite::Eq1 | Suite::Eq2 | Suite::Exponents => &["iterate=level-1", "r2log-start=1"],
        Suite::Kappa => &["kappa-norm=lambda^(2^n-1)"],
        Suite::Hypothesis if cfg.r_mode == RMode::Two => &["r-mode=two"],
        Suite::Hypothesis => &["r-mode=lambda"],
        Suite::Lemma1 | Suite::Genpoly | Suite::Vectorlaws => &[],
    };
    v.iter().map(|s| s.to_string()).collect()
}

/// Runs a suite. `Err` means a usage or resource error (exit code 2); the
/// report's [`SuiteReport::exit_code`] is 0 or 1.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let conventions = base_conventions(cfg);
    let ctx = Ctx { suite: cfg.suite.name(), conventions: &conventions };
    match cfg.suite {
        Suite::Thm1 | Suite::Thm2 => order2_suite(cfg, &ctx),
        Suite::Thm3 => thm3_suite(cfg, &ctx),
        Suite::Lemma1 => lemma1_suite(cfg, &ctx),
        Suite::Nonhom2 => nonhom2_suite(cfg, &ctx),
        Suite::Nonhomfull => nonhomfull_suite(cfg, &ctx),
        Suite::Thm4 => thm4_suite(cfg, &ctx),
        Suite::Eq1 => eq1_suite(cfg, &ctx),
        Suite::Eq2 => eq2_suite(cfg, &ctx),
        Suite::Exponents => exponents_suite(cfg, &ctx),
        Suite::Kappa => kappa_suite(cfg, &ctx),
        Suite::Genpoly => genpoly_suite(cfg, &ctx),
        Suite::Hypothesis => hypothesis_suite(cfg, &ctx),
        Suite::Vectorlaws => vectorlaws_suite(cfg, &ctx),
    }
}

fn require_n_max(cfg: &SuiteConfig, lo: u32, hi: u32) -> Result<()> {
    if cfg.n_max < lo || cfg.n_max > hi {
        return Err(crate::error::out_of_range(
            format!("{} n_max = {}", cfg.suite.name(), cfg.n_max),
            format!("{lo} <= n_max <= {hi}"),
        ));
    }
    Ok(())
}

fn order2_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    let kron = cfg.suite == Suite::Thm2;
    require_n_max(cfg, 3, if kron { 24 } else { 40 })?;
    let n_max = u64::from(cfg.n_max);
    let closed = |p: &Order2Problem<Rational>, n| {
        if kron {
            order2_closed_kron(p, n, Exec::Sequential)
        } else {
            order2_closed_fibword(p, n, Exec::Sequential)
        }
    };
    let mut tally = Tally::default();
    tally.absorb(per_case(cfg.exec, cfg.cases, |case| {
        let p = random_order2(&mut case_rng(cfg.master_seed, case, ctx.suite), n_max, false);
        (3..=n_max).map(|n| Ok(ctx.eq(|| describe_order2(&p), n, &order2_oracle(&p, n)?, &closed(&p, n)?))).collect()
    })?);

    // Symbolic identity: with independent symbols, equality is identity of
    // the expressions, and the number of monomials is f_n.
    let (sym, table) = symbolic_order2(n_max, false);
    let sym_checks = map_range(cfg.exec, 3..n_max + 1, |n| -> Result<Vec<Check>> {
        let oracle = order2_oracle(&sym, n)?;
        let value = if kron {
            order2_closed_kron(&sym, n, Exec::Sequential)?
        } else {
            order2_closed_fibword(&sym, n, Exec::Sequential)?
        };
        let describe = || json!({"generator": "symbolic"});
        let mut checks = vec![
            ctx.eq(describe, n, &oracle, &value),
            ctx.cmp(
                value.num_terms() as u64 == fib(n as u32),
                describe,
                n,
                || fib(n as u32).to_string(),
                || value.num_terms().to_string(),
            ),
        ];
        if n == 3 {
            let decoded = table.decode(&value)?;
            let expected =
                BTreeMap::from([("a3*x2".to_string(), Rational::one()), ("b3*x1".to_string(), Rational::one())]);
            checks.push(ctx.cmp(decoded == expected, describe, 3, || "a3*x2 + b3*x1".into(), || value.to_string()));
        }
        if kron {
            let count = kron_surviving_count(n);
            checks.push(ctx.cmp(
                count == fib(n as u32),
                || json!({"check": "surviving-count"}),
                n,
                || fib(n as u32).to_string(),
                || count.to_string(),
            ));
        }
        Ok(checks)
    });
    for c in sym_checks {
        tally.absorb(c?);
    }
    Ok(tally.finish(cfg, u64::from(cfg.cases), vec![], Value::Null))
}

fn thm3_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 1, 24)?;
    let n_max = cfg.n_max as usize;
    let mut tally = Tally::default();
    tally.absorb(per_case(cfg.exec, cfg.cases, |case| {
        let p = random_full_history(&mut case_rng(cfg.master_seed, case, ctx.suite), n_max, false);
        let mut checks = Vec::new();
        for n in 0..=n_max {
            let chains = full_history_chains(&p, n, Exec::Sequential)?;
            let describe = || describe_full_history(&p);
            checks.push(ctx.eq(describe, n as u64, &full_history_oracle(&p, n)?, &chains.value));
            checks.push(ctx.cmp(
                chains.chains == 1 << n,
                describe,
                n as u64,
                || (1u64 << n).to_string(),
                || chains.chains.to_string(),
            ));
        }
        // n = 1: the empty chain contributes w_0 alongside w_0 a_{1,0}.
        let one = full_history_chains(&p, 1, Exec::Sequential)?.value;
        let with_empty = p.w0.clone() + &(p.w0.clone() * p.a(1, 0)?);
        checks.push(ctx.eq(|| describe_full_history(&p), 1, &with_empty, &one));
        Ok(checks)
    })?);
    let (sym, _) = symbolic_full_history(n_max.min(8));
    for n in 0..=n_max.min(8) {
        let chains = full_history_chains(&sym, n, cfg.exec)?;
        let describe = || json!({"generator": "symbolic"});
        tally.absorb([
            ctx.eq(describe, n as u64, &full_history_oracle(&sym, n)?, &chains.value),
            ctx.cmp(
                chains.value.num_terms() == 1 << n,
                describe,
                n as u64,
                || (1u64 << n).to_string(),
                || chains.value.num_terms().to_string(),
            ),
        ]);
    }
    Ok(tally.finish(cfg, u64::from(cfg.cases), vec![], Value::Null))
}

fn lemma1_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 1, 10)?;
    let n_max = cfg.n_max as usize;
    let mut tally = Tally::default();
    tally.absorb(per_case(cfg.exec, cfg.cases, |case| {
        let p = random_affine(&mut case_rng(cfg.master_seed, case, ctx.suite), n_max);
        (1..=n_max)
            .map(|n| {
                let expected = affine_vector_oracle(&p, n)?;
                let actual = affine_vector_closed(&p, n)?;
                Ok(ctx.cmp(
                    expected == actual,
                    || describe_affine(&p),
                    n as u64,
                    || render_vec(&expected),
                    || render_vec(&actual),
                ))
            })
            .collect()
    })?);
    Ok(tally.finish(cfg, u64::from(cfg.cases), vec![], Value::Null))
}

fn zero_c(p: &Order2Problem<Rational>) -> Order2Problem<Rational> {
    Order2Problem { c: p.c.as_ref().map(|c| c.map(|_| Rational::zero())), ..p.clone() }
}

fn nonhom2_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 3, 20)?;
    let n_max = u64::from(cfg.n_max);
    let mut tally = Tally::default();
    tally.absorb(per_case(cfg.exec, cfg.cases, |case| {
        let p = random_order2(&mut case_rng(cfg.master_seed, case, ctx.suite), n_max, true);
        let zero = zero_c(&p);
        let hom = p.homogeneous();
        let mut checks = Vec::new();
        for n in 3..=n_max {
            checks.push(ctx.eq(|| describe_order2(&p), n, &order2_oracle(&p, n)?, &order2_nonhom_closed(&p, n)?));
            checks.push(ctx.eq(
                || describe_order2(&zero),
                n,
                &order2_closed_kron(&hom, n, Exec::Sequential)?,
                &order2_nonhom_closed(&zero, n)?,
            ));
        }
        Ok(checks)
    })?);
    let findings = vec![errata::nonhom_c_index(cfg.master_seed)?];
    Ok(tally.finish(cfg, u64::from(cfg.cases), findings, Value::Null))
}

fn nonhomfull_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 1, 20)?;
    let n_max = cfg.n_max as usize;
    let mut tally = Tally::default();
    tally.absorb(per_case(cfg.exec, cfg.cases, |case| {
        let p = random_full_history(&mut case_rng(cfg.master_seed, case, ctx.suite), n_max, true);
        let zero = crate::recurrences::FullHistoryProblem {
            c: p.c.as_ref().map(|c| c.map(|_| Rational::zero())),
            ..p.clone()
        };
        let hom = crate::recurrences::FullHistoryProblem { c: None, ..p.clone() };
        let mut checks = Vec::new();
        for n in 0..=n_max {
            checks.push(ctx.eq(
                || describe_full_history(&p),
                n as u64,
                &full_history_oracle(&p, n)?,
                &full_history_nonhom_vector(&p, n)?,
            ));
            checks.push(ctx.eq(
                || describe_full_history(&zero),
                n as u64,
                &full_history_chains(&hom, n, Exec::Sequential)?.value,
                &full_history_nonhom_vector(&zero, n)?,
            ));
        }
        Ok(checks)
    })?);
    Ok(tally.finish(cfg, u64::from(cfg.cases), vec![], Value::Null))
}

fn thm4_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 1, cfg.guards.p_closed_max)?;
    let variant = if cfg.paper_verbatim { QBinomial::PaperVerbatim } else { QBinomial::Corrected };
    let mut tally = Tally::default();
    for n in 1..=cfg.n_max {
        let oracle = CoeffTable::from_polynomial(n, &p_iterate_oracle(n, &cfg.guards)?)?;
        let recursion = p_coeffs_recursion(n, variant, &cfg.guards)?;
        let closed = p_coeffs_closed(n, cfg.exec, &cfg.guards)?;
        let mut tables = vec![("recursion", recursion), ("closed", closed)];
        if n <= 4 {
            let p = p_vector(n, variant, &cfg.guards)?;
            tables.push(("vector", coeffs_from_p_vector(n, &p)?));
        }
        for (method, table) in &tables {
            for k in 1..=(1u64 << n) {
                tally.absorb([ctx.cmp(
                    oracle.get(k) == table.get(k),
                    || json!({"method": method, "k": k}),
                    u64::from(n),
                    || render_table(&oracle, k),
                    || render_table(table, k),
                )]);
            }
        }
    }
    let findings = vec![errata::q_binomial(&cfg.guards)?];
    Ok(tally.finish(cfg, 1, findings, Value::Null))
}

fn eq1_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 2, cfg.guards.s_level_max)?;
    let mut tally = Tally::default();
    let modes = [LambdaMode::Symbolic, LambdaMode::Rational(crate::algebra::rational(1, 2))];
    for (mi, mode) in modes.iter().enumerate() {
        let top = if mi == 0 { cfg.n_max } else { cfg.n_max.min(4) };
        for level in 2..=top {
            let r = s_closed_eq1_report(level, mode, &cfg.guards)?;
            let lambda = if mi == 0 { "symbolic" } else { "1/2" };
            for (name, ok) in [
                ("sum", r.sum_matches_iterate),
                ("previous-level", r.via_previous_level),
                ("finite-product", r.via_finite_product),
                ("infinite-prefix", r.via_infinite_prefix),
            ] {
                tally.absorb([ctx.holds(ok, || json!({"check": name, "lambda": lambda}), u64::from(level))]);
            }
        }
    }
    let findings = vec![errata::s_iterate_index(&cfg.guards)?];
    Ok(tally.finish(cfg, 1, findings, Value::Null))
}

fn eq2_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 2, cfg.guards.s_level_max)?;
    let rec = eq2_reconcile(2..=cfg.n_max, &cfg.guards)?;
    let mut tally = Tally::default();
    tally.absorb([ctx.cmp(
        rec.consistent.len() == 1,
        || json!({"check": "one-consistent-convention"}),
        u64::from(cfg.n_max),
        || "exactly one".into(),
        || format!("{:?}", rec.consistent),
    )]);
    let findings = vec![errata::eq2_upper_limit(&rec)];
    Ok(tally.finish(cfg, 1, findings, serde_json::to_value(&rec).expect("serializable")))
}

fn exponents_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 1, 4)?;
    let mut tally = Tally::default();
    for n in 1..=cfg.n_max {
        let h = h_exponents_direct(n, &cfg.guards)?;
        let checks: Vec<Check> = h
            .iter()
            .enumerate()
            .map(|(i, &direct)| {
                let j = i as u64 + 1;
                let formula = h_exponent(j, n)?;
                Ok(ctx.cmp(
                    formula == direct,
                    || json!({"exponent": "h", "j": j}),
                    u64::from(n),
                    || direct.to_string(),
                    || formula.to_string(),
                ))
            })
            .collect::<Result<_>>()?;
        tally.absorb(checks);
        let r = r2log_exponents_direct(n, &cfg.guards)?;
        let checks: Vec<Check> = r
            .iter()
            .enumerate()
            .map(|(i, &direct)| {
                let j = i as u64 + 1;
                let formula = r2log_exponent(j, n)?;
                Ok(ctx.cmp(
                    formula == direct,
                    || json!({"exponent": "r2log", "j": j}),
                    u64::from(n),
                    || direct.to_string(),
                    || formula.to_string(),
                ))
            })
            .collect::<Result<_>>()?;
        tally.absorb(checks);
    }
    let findings = vec![errata::r2log_start(&cfg.guards)?];
    Ok(tally.finish(cfg, 1, findings, Value::Null))
}

fn kappa_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 2, 10)?;
    let mut tally = Tally::default();
    let anchors: [(u32, &[i64]); 2] = [(1, &[3, 1]), (2, &[9, 6, 0, 1])];
    for (n, expected) in anchors {
        let t = kappa_direct(n, KappaMethod::Symbolic, &cfg.guards)?;
        let want: Vec<num_bigint::BigInt> = expected.iter().map(|&v| v.into()).collect();
        tally.absorb([ctx.cmp(
            t.counts == want,
            || json!({"check": "anchor"}),
            u64::from(n),
            || format!("{expected:?}"),
            || format!("{:?}", t.counts),
        )]);
    }
    for n in 1..=cfg.n_max.min(cfg.guards.kappa_vector_max) {
        let v = kappa_direct(n, KappaMethod::Vector, &cfg.guards)?;
        let s = kappa_direct(n, KappaMethod::Symbolic, &cfg.guards)?;
        tally.absorb([ctx.cmp(
            v == s,
            || json!({"check": "vector-vs-symbolic"}),
            u64::from(n),
            || format!("{:?}", s.counts),
            || format!("{:?}", v.counts),
        )]);
    }
    let rep = kappa_reconcile(cfg.n_max, &DeltaRule::default_candidates(), &cfg.guards)?;
    for f in &rep.formulas {
        let t = rep.direct[(f.n - 1) as usize].clone();
        tally.absorb([
            ctx.holds(f.kappa0_holds, || json!({"check": "kappa0"}), u64::from(f.n)),
            ctx.holds(f.kappa1_holds, || json!({"check": "kappa1"}), u64::from(f.n)),
            ctx.holds(f.total_holds, || json!({"check": "total"}), u64::from(f.n)),
        ]);
        debug_assert_eq!(kappa_formula_check(&t), *f);
    }
    let findings = errata::kappa_findings(&rep);
    Ok(tally.finish(cfg, 1, findings, serde_json::to_value(&rep).expect("serializable")))
}

fn genpoly_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 1, cfg.guards.genpoly_max)?;
    let mut tally = Tally::default();
    let mut reports = Vec::new();
    for k in 1..=cfg.n_max {
        for ordering in QOrdering::ALL {
            let r = q_genpoly_compare(k, ordering, &cfg.guards)?;
            if k == 1 {
                tally.absorb([ctx.cmp(
                    r.equal,
                    || json!({"ordering": ordering.name()}),
                    1,
                    || r.formula_side.clone(),
                    || r.vector_side.clone(),
                )]);
            }
            reports.push(r);
        }
    }
    let findings = vec![errata::genpoly(&reports)];
    Ok(tally.finish(cfg, 1, findings, serde_json::to_value(&reports).expect("serializable")))
}

fn hypothesis_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    require_n_max(cfg, 2, cfg.guards.hypothesis_max)?;
    let rep = f_hypothesis_check(cfg.n_max, cfg.r_mode, &cfg.guards)?;
    let value = serde_json::to_value(&rep).expect("serializable");
    let mut tally = Tally::default();
    tally.absorb([
        ctx.cmp(
            rep.rows[0].f_n == RingElem::x().to_string(),
            || json!({"check": "f1"}),
            1,
            || "x".into(),
            || rep.rows[0].f_n.clone(),
        ),
        ctx.holds(validate_hypothesis_json(&value).is_ok(), || json!({"check": "schema"}), u64::from(cfg.n_max)),
        ctx.holds(rep.prefix_validated, || json!({"check": "prefix"}), u64::from(cfg.n_max)),
    ]);
    let findings = vec![errata::hypothesis(&rep)];
    Ok(tally.finish(cfg, 1, findings, value))
}

fn random_ring_vec<R: Rng>(rng: &mut R, len: usize) -> RowVec {
    RowVec::new((0..len).map(|_| small_ring_elem(rng)).collect())
}

fn vectorlaws_suite(cfg: &SuiteConfig, ctx: &Ctx) -> Result<SuiteReport> {
    let mut tally = Tally::default();
    tally.absorb(per_case(cfg.exec, cfg.cases, |case| {
        let mut rng = case_rng(cfg.master_seed, case, ctx.suite);
        let (la, lb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_ring_vec(&mut rng, la);
        let b = random_ring_vec(&mut rng, lb);
        let c = random_ring_vec(&mut rng, la);
        let d = random_ring_vec(&mut rng, lb);
        let describe = || json!({"a": render_vec(&a), "b": render_vec(&b), "c": render_vec(&c), "d": render_vec(&d)});
        let cat_lhs = a.concat(&b).hadamard(&c.concat(&d))?;
        let cat_rhs = a.hadamard(&c)?.concat(&b.hadamard(&d)?);
        let kron_lhs = a.kron(&b).hadamard(&c.kron(&d))?;
        let kron_rhs = a.hadamard(&c)?.kron(&b.hadamard(&d)?);
        let t = small_ring_elem(&mut rng);
        Ok(vec![
            ctx.cmp(cat_lhs == cat_rhs, describe, case, || render_vec(&cat_rhs), || render_vec(&cat_lhs)),
            ctx.cmp(kron_lhs == kron_rhs, describe, case, || render_vec(&kron_rhs), || render_vec(&kron_lhs)),
            ctx.holds(weighted_sum_kron_identity_check(&a, &b, &t), describe, case),
            ctx.holds(weighted_sum_kron_identity_check(&a, &b, &RingElem::x()), describe, case),
            ctx.cmp(
                a.kron(&b).kron(&c) == a.kron(&b.kron(&c)),
                describe,
                case,
                || "associative".into(),
                || "not associative".into(),
            ),
        ])
    })?);
    // Ceiling formula against the literal periodic pattern.
    for l in 1..=8u64 {
        for m in 1..=8u64 {
            let pattern: Vec<u8> = (1..=200u64).map(|j| u8::from((j - 1) % (l + m) >= l)).collect();
            let formula: Vec<u8> = (1..=200u64).map(|j| step(l, m, j)).collect();
            let kron = step_prefix_kron(l as usize, m as usize, 200);
            let describe = || json!({"l": l, "m": m});
            tally.absorb([
                ctx.cmp(pattern == formula, describe, 200, || format!("{pattern:?}"), || format!("{formula:?}")),
                ctx.cmp(
                    kron.bits() == pattern.as_slice(),
                    describe,
                    200,
                    || format!("{pattern:?}"),
                    || kron.to_string(),
                ),
            ]);
        }
    }
    Ok(tally.finish(cfg, u64::from(cfg.cases), vec![], Value::Null))
}

/// Exit code for a suite run: 0 all checks hold, 1 a check failed, 2 usage
/// or resource error.
pub fn exit_code(result: &Result<SuiteReport>) -> i32 {
    match result {
        Ok(r) => r.exit_code(),
        Err(_) => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(suite: Suite) -> SuiteConfig {
        let mut cfg = SuiteConfig::new(suite);
        cfg.cases = cfg.cases.min(3);
        cfg.n_max = match suite {
            Suite::Thm1 | Suite::Thm2 | Suite::Nonhom2 => 8,
            Suite::Thm3 | Suite::Nonhomfull => 6,
            Suite::Thm4 | Suite::Eq1 | Suite::Eq2 => 3,
            Suite::Exponents | Suite::Genpoly => 2,
            Suite::Kappa => 3,
            Suite::Hypothesis => 5,
            _ => cfg.n_max,
        };
        cfg
    }

    #[test]
    fn every_suite_passes_small() {
        for suite in Suite::ALL {
            let report = run_suite(&quick(suite)).unwrap();
            assert_eq!(report.failed, 0, "{suite:?}: {:?}", report.mismatches);
            assert!(report.passed > 0, "{suite:?}");
        }
    }

    #[test]
    fn names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(Suite::parse(suite.name()).unwrap(), suite);
        }
        assert!(matches!(Suite::parse("thm9"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn verbatim_binomial_fails() {
        let mut cfg = quick(Suite::Thm4);
        cfg.paper_verbatim = true;
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.exit_code(), 1);
        assert!(report.mismatches.iter().any(|m| m.n == 2 && m.instance["k"] == 1));
    }

    #[test]
    fn schedule_does_not_change_report() {
        let mut cfg = quick(Suite::Thm1);
        cfg.exec = Exec::Sequential;
        let a = render(&run_suite(&cfg).unwrap(), Format::Json);
        cfg.exec = Exec::Parallel;
        assert_eq!(a, render(&run_suite(&cfg).unwrap(), Format::Json));
    }

    #[test]
    fn bad_n_max_is_usage_error() {
        let mut cfg = SuiteConfig::new(Suite::Thm4);
        cfg.n_max = 9;
        assert_eq!(exit_code(&run_suite(&cfg)), 2);
    }
}
