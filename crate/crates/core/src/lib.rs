//! Symbolic rank-one systems.
//!
//! Finite rank-one words and the built-from relation ([`words`]), canonical
//! generating sequences and the ultrametric between codes ([`canonical`]),
//! the `O(N, r)` / `U(v, s)` neighborhoods of the code space ([`topology`]),
//! replacement schemes and the density construction ([`isomorphism`]),
//! cylinder measures ([`measure`]) and exact finite-stage cutting-and-stacking
//! towers ([`tower`]).
//!
//! All arithmetic is exact: every ratio, measure and interval endpoint is a
//! [`Rational`]. Nothing is ever rounded.

pub mod canonical;
pub mod corpus;
mod error;
pub mod exec;
pub mod isomorphism;
pub mod measure;
pub mod rational;
pub mod sample;
pub mod topology;
pub mod tower;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use rational::Rational;
pub use words::{BuildDecomposition, FiniteWord, Stage, Tail, WordPresentation};

/// Default cap on the length of any materialized word.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
