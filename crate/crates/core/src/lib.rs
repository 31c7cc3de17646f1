//! Estimates and verifies the index of summability of pairs of Banach spaces.
//!
//! The crate has three layers:
//!
//! * [`bounds`] evaluates the closed-form lower, upper and exact values of the
//!   index, each behind an explicit hypothesis check, and aggregates them.
//! * [`numerics`] builds the extremal multilinear operators (random-sign,
//!   diagonal and coordinate operators) and computes the norms that enter the
//!   defining quotient: operator norms on products of `ℓ_p` balls, weak `ℓ_q`
//!   norms of vector families and Rademacher averages.
//! * [`experiments`] sweeps the dimension, fits the growth exponent of the
//!   quotient on a log-log scale and checks it against [`bounds`].
//!
//! [`io`] holds the artifact formats and configuration files consumed by the
//! command-line front end.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod exponent;
pub mod io;
pub mod numerics;
pub mod parallel;

pub use error::{Error, Result};
pub use exponent::Exponent;

/// Version string embedded in every emitted artifact.
pub const VERSION: &str = concat!("summability ", env!("CARGO_PKG_VERSION"));
