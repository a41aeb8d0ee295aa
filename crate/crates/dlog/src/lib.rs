//! Multi-target birthday attack on the discrete logarithm problem.
//!
//! Given public keys `y_i = g^(x_i)` in a cyclic group of order `N`, the
//! attack raises each key (and the generator) to a row of random distinct
//! exponents, sorts the union of all rows by canonical encoding, and turns
//! every collision into a linear congruence in the unknown exponents.
//! Solving the accumulated system over `Z_N` recovers all keys at once at a
//! per-key cost below one baby-step giant-step run.
//!
//! The crate also ships the probability side: lower bounds on the collision
//! count of the union table, the exact uniform-multiset collision model, and
//! Monte Carlo cross-checks, plus exhaustive-search and baby-step giant-step
//! baselines used as oracles and benchmark comparators. Everything is
//! deterministic under a fixed seed.

pub(crate) mod arith;
pub mod attack;
pub mod baselines;
pub mod bigfloat;
pub mod cli;
pub mod collision;
pub mod group;
pub mod modlinalg;
pub mod probability;

pub use attack::DEFAULT_SEED;
