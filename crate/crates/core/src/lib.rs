//! Exact modular-symbols decomposition of the Jacobian of X₀(N) and
//! evaluation of the classical and quadratic Chabauty finiteness conditions.
//!
//! The pipeline is:
//!
//! 1. [`modsym`] builds weight-2 modular symbols for Γ₀(N) over ℚ and exposes
//!    the cuspidal and plus subspaces together with Hecke operators.
//! 2. [`decomposition`] splits the plus-cuspidal space into Galois orbits of
//!    eigenforms (with old-form multiplicities), giving the isogeny factors of J₀(N).
//! 3. [`criterion`] turns a [`decomposition::Decomposition`] and a Mordell–Weil
//!    rank into three-valued verdicts for `rank < g` and `rank < g + rNS − 1`.
//! 4. [`io`] handles JSON ingestion, report emission, caching and level scans.
//!
//! Everything in the algebraic core is exact: matrices and polynomials carry
//! arbitrary-precision rationals and integers.

pub mod criterion;
pub mod decomposition;
mod error;
pub mod io;
pub mod linalg;
pub mod modsym;
pub mod poly;

pub use error::{Error, Result};

/// Exact rational scalar used throughout the linear algebra.
pub type Q = num_rational::BigRational;
