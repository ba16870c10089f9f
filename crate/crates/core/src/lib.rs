//! Numerical machinery for a mixed-dimension vector sieve bound on primes
//! `p = m^2 + n^2 + 1` with `p + 2` almost prime.
//!
//! The crate is organized bottom-up:
//!
//! - [`primes`] and [`factor`]: segmented prime streams and smallest-prime-factor tables.
//! - [`sieve_functions`]: the semi-linear and linear beta-sieve functions `F`, `f`,
//!   from closed forms and continuation of their delay differential equations.
//! - [`constants`]: the Euler products `C`, `c1`, `c2`, `c3`.
//! - [`quadrature`] and [`integrals`]: adaptive Gauss-Kronrod integration and the two
//!   one-dimensional integrals entering the objective.
//! - [`combiner`]: the two-variable vector-sieve functions `F(σ1, σ2)` and `f(σ1, σ2)`.
//! - [`objective`]: the objectives `G` and `H` and the parameter searches.
//! - [`empirical`]: exact enumeration of the sifted sets, identity checks and the prime census.

pub mod combiner;
pub mod constants;
pub mod empirical;
pub mod error;
pub mod factor;
pub mod integrals;
mod interp;
pub mod objective;
pub mod primes;
pub mod quadrature;
pub mod sieve_functions;
mod summation;

pub use combiner::{CombinerResult, SieveTables};
pub use error::{Error, Result};
pub use objective::{Objective, ObjectiveReport, SearchParams};
pub use quadrature::QuadratureResult;
pub use sieve_functions::{SieveDimension, SieveFunctionTable, Which};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `e^γ`, pinned to the correctly rounded double of `exp(EULER_GAMMA)`.
pub const EXP_GAMMA: f64 = 1.781_072_417_990_198;
