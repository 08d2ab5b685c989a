//! Exact closed forms for recursively defined sequences, each paired with a
//! brute-force oracle.
//!
//! * [`algebra`]: rationals and the ring of polynomials in `x` with
//!   Laurent-polynomial-in-`λ` coefficients.
//! * [`vector`]: row vectors with concatenation, Kronecker and Hadamard
//!   products, step functions and Fibonacci words.
//! * [`recurrences`]: second-order, affine-vector and full-history linear
//!   recurrences with variable coefficients.
//! * [`quadratic`]: iterates of `λ(x + 1)x` and `λ(x² − 1) + 1`.
//! * [`suites`]: deterministic randomized verification suites and the
//!   machine-readable errata ledger.

pub mod algebra;
pub mod error;
pub mod exec;
pub mod guard;
pub mod quadratic;
pub mod recurrences;
pub mod suites;
pub mod vector;

pub use error::{Error, Result};
pub use exec::Exec;
pub use guard::Guards;
