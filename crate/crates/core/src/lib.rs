//! Numerics for the isotropic alpha-stable transition density
//!
//! ```text
//! g(t, x, y) = (2π)^{-d} ∫ exp{ i(x - y, λ) - c t |λ|^α } dλ,   0 < α < 2,
//! ```
//!
//! and for the two pseudo-differential operators with symbols `|λ|^κ`
//! (`Δ_κ`) and `λ |λ|^{κ-1}` (`∇_κ`) applied to it in the spatial variable.
//!
//! Everything reduces to the unit-scale functions
//!
//! ```text
//! D(κ, x) = (2π)^{-d} ∫ |λ|^κ        e^{i(x,λ) - |λ|^α} dλ
//! N(κ, x) = (2π)^{-d} ∫ λ |λ|^{κ-1}  e^{i(x,λ) - |λ|^α} dλ
//! ```
//!
//! which are evaluated through a one-dimensional Hankel-type integral
//! ([`hankel`]). The crate also provides the closed-form large-|x| constants
//! ([`asymptotics`]), empirical certification of two-sided bounds
//! ([`bounds`]) and brute-force validators ([`oracle`]).

// negated comparisons are how NaN arguments get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotics;
pub mod bounds;
mod error;
pub mod hankel;
pub mod kappa;
pub mod kernels;
pub mod oracle;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use hankel::{HankelConfig, HankelIntegrand, QuadResult, Strategy};
pub use kappa::KappaOrder;
pub use kernels::{SpacePoint, StableParams};
