//! Iterates of the quadratic maps `p(x) = λ(x + 1)x` and
//! `s(x) = λ(x² − 1) + 1`: closed-form coefficients, vector constructions,
//! exponent formulas, the `κ` tables and the `f_n` hypothesis.

mod hypothesis;
mod kappa;
mod pmap;
mod smap;

pub use hypothesis::{
    f_hypothesis_check, f_value, validate_hypothesis_json, validate_prefix, HypothesisReport, HypothesisRow, RMode,
};
pub use kappa::{
    kappa_direct, kappa_formula_check, kappa_reconcile, kappa_recursion, kappa_recursion_with, s_iterate_at_two,
    CandidateVerdict, DeltaRule, DeltaTerm, KappaFormulaCheck, KappaLevelComparison, KappaMethod, KappaMismatch,
    KappaReport, KappaSource, KappaTable,
};
pub use pmap::{
    coeffs_from_p_vector, genpoly_formula, mu, omega, p_coeffs_closed, p_coeffs_recursion, p_iterate_oracle, p_poly,
    p_vector, q_entry, q_genpoly_compare, q_vector, GenpolyReport, QBinomial, QOrdering,
};
pub use smap::{
    eq2_reconcile, eq2_sum, h_exponent, h_exponents_direct, l_vector, r2log_exponent, r2log_exponent_with,
    r2log_exponents_direct, r2log_unbounded, r_lambda, r_lambda_prefix, s1, s_closed_eq1_check, s_closed_eq1_report,
    s_closed_eq2_check, s_iterate_oracle, s_poly, s_vector_direct, s_vector_len, Eq1Report, Eq2Convention,
    Eq2LevelReport, Eq2Outcome, Eq2Reconciliation, Eq2Status, LambdaMode, R2LogStart, SVector, TargetIterate,
    UpperLimit,
};
