//! One-dimensional quadrature building blocks used by the Hankel engine.
//!
//! * [`gauss_kronrod`] - globally adaptive 10/21-point Gauss-Kronrod.
//! * [`tanh_sinh`] - double-exponential rule for integrable endpoint singularities.
//! * [`wynn`] - epsilon-algorithm extrapolation of partial sums.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

mod gauss_kronrod;
mod tanh_sinh;
mod wynn;

pub use gauss_kronrod::{gauss_kronrod, gk21};
pub use tanh_sinh::tanh_sinh;
pub use wynn::{wynn_epsilon, WynnEstimate};

/// Scalar types the rules integrate: real and complex doubles.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

/// Result of a single quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct Integral<V> {
    pub value: V,
    pub err: f64,
    pub evals: usize,
    /// `false` when the budget ran out before the tolerance was met.
    pub converged: bool,
}
