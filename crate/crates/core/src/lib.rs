//! Moment bounds, optimized constants and empirical checks for primes in
//! short intervals.
//!
//! The closed-form evaluators and the optimizer are generic over
//! [`scalar::RealScalar`] (`f32`, `f64`); the combinatorial tables and the
//! Selberg integrals also run over exact rationals. The aliases below fix
//! the common choices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod constants;
pub mod error;
pub mod optimizer;
pub mod report;
pub mod scalar;
pub mod sieve;
pub mod verify;

pub use constants::{BoundContext, Mode};
pub use error::{Error, Result};
pub use optimizer::{Objective, SearchConfig, SearchPoint};
pub use sieve::{sieve_primes, PrimeDataset, SieveOptions};
pub use verify::{CheckReport, CheckStatus};

/// Default working precision.
pub type Real = f64;
/// Exact arithmetic for identities.
pub type Exact = num_rational::BigRational;

pub type Context = BoundContext<Real>;
pub type ContextF32 = BoundContext<f32>;
pub type Config = SearchConfig<Real>;
pub type ConfigF32 = SearchConfig<f32>;
pub type Point = SearchPoint<Real>;
pub type PointF32 = SearchPoint<f32>;
