//! Exact computation on finite probability spaces.
//!
//! This crate builds the category of finite spaces and exact-rational
//! stochastic matrices, and on top of it the category of probability spaces
//! and measure-preserving kernels taken modulo almost-sure equality, where
//! Bayesian inversion is a dagger. It computes invariant σ-algebras of
//! stochastic dynamical systems as colimit/limit quotients, ergodic
//! decompositions, equilibrium idempotents and their splittings, and orbit
//! structure of finite permutation actions — all in arbitrary-precision
//! rational arithmetic, so every identity it reports is exact.
//!
//! Every categorical law the engine relies on is also executable: the
//! [`laws`] module runs seeded randomized suites that check each law as an
//! exact matrix identity and report counterexamples with full reproduction
//! data.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability. The `finstoch` binary exposes the same machinery as
//! `analyze`, `split`, `exchangeable`, `axioms`, `iso` and `dot` subcommands
//! over a JSON chain-spec format.

pub mod chainspec;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod exchangeable;
pub mod fixtures;
pub mod generate;
pub mod idempotent;
pub mod kernel;
pub mod laws;
pub mod ps;
pub mod rational;
pub mod report;
pub mod space;

pub use error::{Error, Result};
pub use kernel::Kernel;
pub use ps::{as_equal, bayesian_inverse, find_ps_iso, Partition, ProbSpace, PsMorphism};
pub use rational::{parse_rat, rat, Rat};
pub use space::{Dist, FinSpace};
