//! Gamma and Bessel functions at the accuracy the quadrature layer needs.
//!
//! | Function | Range |
//! |----------|-------|
//! | [`gamma`], [`ln_gamma`] | `x > 0` |
//! | [`bessel_j`] | real order `μ ≥ -1/2`, `t ≥ 0` |
//! | [`bessel_j_zeros`] | first `n` positive zeros of `J_μ` |
//! | [`bessel_k`] | real `z > 0` for any order, complex `Re z > 0` for half-integer order |

mod bessel_j;
mod bessel_k;
mod gamma;
mod zeros;

pub use bessel_j::{bessel_j, bessel_j_derivative, switch_point, BesselOrder, T_SWITCH};
pub use bessel_k::{bessel_k, bessel_k_real};
pub use gamma::{gamma, ln_gamma, GAMMA_MAX_ARG};
pub use zeros::bessel_j_zeros;

pub(crate) use bessel_j::j_unchecked;
pub(crate) use bessel_k::k_half_integer;
pub(crate) use zeros::ZeroIter;
