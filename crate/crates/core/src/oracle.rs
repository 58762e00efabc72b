//! Brute-force validators: the closed-form Cauchy case (`α = 1`) and a
//! midpoint tensor-grid evaluation of the defining Fourier integral.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::gauss_kronrod;

/// How an oracle value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    CauchyClosedForm,
    TensorGrid,
}

/// Box half-width `L` and points per axis `n` of the coarse level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub method: OracleMethod,
    pub grid: Option<GridSpec>,
    /// `|v(n) - v(2n)|` for tensor grids, where `v(m)` is the plain midpoint
    /// sum. `value` is `v(2n)` with the leading origin error removed by
    /// Richardson extrapolation.
    pub refinement: Option<f64>,
}

fn check_t(t: f64, c: f64) -> Result<()> {
    if !(t > 0.0) || !(c > 0.0) || !t.is_finite() || !c.is_finite() {
        return Err(Error::domain(format!("need t > 0 and c > 0, got t={t}, c={c}")));
    }
    Ok(())
}

/// `Γ((d+1)/2) π^{-(d+1)/2} · ct / ((ct)² + radius²)^{(d+1)/2}`.
pub fn cauchy_density(d: u32, c: f64, t: f64, radius: f64) -> Result<f64> {
    check_t(t, c)?;
    if d == 0 {
        return Err(Error::domain("dimension d must be >= 1"));
    }
    let s = c * t;
    let e = 0.5 * (d as f64 + 1.0);
    let ln = libm::lgamma(e) - e * PI.ln() + s.ln() - e * (s * s + radius * radius).ln();
    Ok(ln.exp())
}

/// First or second `x`-derivative of the one-dimensional Cauchy density
/// `g = (s/π) / (s² + x²)`, `s = ct`.
pub fn cauchy_derivatives(d: u32, c: f64, t: f64, x: f64, order: u32) -> Result<f64> {
    if d != 1 {
        return Err(Error::UnsupportedDimension(format!(
            "closed-form Cauchy derivatives are one-dimensional, got d={d}"
        )));
    }
    check_t(t, c)?;
    let s = c * t;
    let q = s * s + x * x;
    match order {
        1 => Ok(-2.0 * s * x / (PI * q * q)),
        2 => Ok(s * (6.0 * x * x - 2.0 * s * s) / (PI * q * q * q)),
        _ => Err(Error::domain(format!("derivative order must be 1 or 2, got {order}"))),
    }
}

/// `∫_{[-1,1]^d} |u|^κ du`, `κ > -d`, `d ≤ 3`.
///
/// The cube splits into `2d` pyramids over its faces, giving
/// `2d/(κ+d) ∫_{[-1,1]^{d-1}} (1 + |w|²)^{κ/2} dw`.
fn cube_moment(d: u32, kappa: f64) -> f64 {
    let pre = 2.0 * d as f64 / (kappa + d as f64);
    match d {
        1 => pre,
        2 => pre * 2.0 * gauss_kronrod(|w: f64| (1.0 + w * w).powf(0.5 * kappa), 0.0, 1.0, 0.0, 1e-14, 50).value,
        _ => {
            let inner = |a: f64| {
                gauss_kronrod(|b: f64| (1.0 + a * a + b * b).powf(0.5 * kappa), 0.0, 1.0, 0.0, 1e-14, 50).value
            };
            pre * 4.0 * gauss_kronrod(inner, 0.0, 1.0, 0.0, 1e-14, 50).value
        }
    }
}

/// Half-width `L` such that the mass of `|λ|^κ e^{-|λ|^α}` outside the ball
/// of radius `L` is below `1e-10` of the whole.
pub fn default_half_width(d: u32, alpha: f64, kappa: f64) -> f64 {
    // ∫_L^∞ λ^{κ+d-1} e^{-λ^α} dλ = Γ(a, L^α)/α with a = (κ+d)/α
    let a = (kappa + d as f64) / alpha;
    let total = libm::tgamma(a);
    let mut l = 4.0f64;
    loop {
        let s = l.powf(alpha);
        let bound = if s > a { ((a - 1.0) * s.ln() - s).exp() * s / (s - (a - 1.0)).max(1.0) } else { f64::INFINITY };
        if bound <= 1e-10 * total {
            return l;
        }
        l *= 1.05;
    }
}

/// Smallest odd point count that resolves `max|x|` on `[-L, L]`.
pub fn default_points(max_radius: f64, half_width: f64) -> usize {
    let n = (4.0 * max_radius * half_width / PI).ceil() as usize;
    n.max(64) | 1
}

fn check_grid(d: u32, alpha: f64, kappa: f64, xs: &[Vec<f64>], half_width: f64, n: usize) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedDimension(format!("tensor grids support d <= 3, got {d}")));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    if !(kappa > -(d as f64)) {
        return Err(Error::domain(format!("requires kappa > -d, got {kappa}")));
    }
    if !(half_width > 0.0) || n < 2 {
        return Err(Error::domain("grid needs L > 0 and n >= 2"));
    }
    for x in xs {
        if x.len() != d as usize {
            return Err(Error::domain("point dimension differs from d"));
        }
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let m = (n | 1) as f64;
        if r * half_width / m > PI / 4.0 {
            return Err(Error::Resolution(format!(
                "|x| L / n = {} exceeds pi/4; increase n",
                r * half_width / m
            )));
        }
    }
    Ok(())
}

/// Midpoint sum on an odd `m`-point grid (the origin is a node) for every
/// point in `xs`. Uses the evenness of the integrand in each coordinate.
fn level_sum(d: u32, alpha: f64, kappa: f64, xs: &[Vec<f64>], half_width: f64, n: usize) -> Vec<f64> {
    let m = n | 1;
    let h = 2.0 * half_width / m as f64;
    let kmax = (m - 1) / 2;
    let du = d as usize;
    let radial = |rad: f64| -> f64 { (kappa * rad.ln() - rad.powf(alpha)).exp() };
    // origin cell: exact cube integral of |λ|^κ, as a cell average
    let origin = (0.5 * h).powf(kappa + d as f64) * cube_moment(d, kappa) / h.powi(d as i32);
    let weights: Vec<f64> = (0..=kmax).map(|k| if k == 0 { 1.0 } else { 2.0 }).collect();
    // cos tables with the symmetry weights folded in: [x][axis][k]
    let cos: Vec<Vec<Vec<f64>>> = xs
        .iter()
        .map(|x| {
            (0..du)
                .map(|j| (0..=kmax).map(|k| weights[k] * (x[j] * k as f64 * h).cos()).collect())
                .collect()
        })
        .collect();
    let nx = xs.len();
    let sums: Vec<f64> = if d == 1 {
        (0..=kmax)
            .into_par_iter()
            .fold(
                || vec![0.0; nx],
                |mut acc, k| {
                    let f = if k == 0 { origin } else { radial(k as f64 * h) };
                    for (i, a) in acc.iter_mut().enumerate() {
                        *a += f * cos[i][0][k];
                    }
                    acc
                },
            )
            .reduce(|| vec![0.0; nx], add_vecs)
    } else {
        let qmax = du * kmax * kmax;
        let table: Vec<f64> = (0..=qmax)
            .into_par_iter()
            .map(|q| if q == 0 { origin } else { radial(h * (q as f64).sqrt()) })
            .collect();
        let last_axis_trivial = xs.iter().all(|x| x[du - 1] == 0.0);
        (0..=kmax)
            .into_par_iter()
            .fold(
                || vec![0.0; nx],
                |mut acc, k1| {
                    let b1 = k1 * k1;
                    for k2 in 0..=kmax {
                        let b2 = b1 + k2 * k2;
                        if d == 2 {
                            let f = table[b2];
                            for (i, a) in acc.iter_mut().enumerate() {
                                *a += f * cos[i][0][k1] * cos[i][1][k2];
                            }
                        } else if last_axis_trivial {
                            let mut s = 0.0;
                            for k3 in 0..=kmax {
                                s += weights[k3] * table[b2 + k3 * k3];
                            }
                            for (i, a) in acc.iter_mut().enumerate() {
                                *a += s * cos[i][0][k1] * cos[i][1][k2];
                            }
                        } else {
                            for (i, a) in acc.iter_mut().enumerate() {
                                let c3 = &cos[i][2];
                                let mut s = 0.0;
                                for k3 in 0..=kmax {
                                    s += c3[k3] * table[b2 + k3 * k3];
                                }
                                *a += s * cos[i][0][k1] * cos[i][1][k2];
                            }
                        }
                    }
                    acc
                },
            )
            .reduce(|| vec![0.0; nx], add_vecs)
    };
    let pre = (h / (2.0 * PI)).powi(d as i32);
    sums.into_iter().map(|s| s * pre).collect()
}

fn add_vecs(mut a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// `(2π)^{-d} ∫_{[-L,L]^d} |λ|^κ e^{i(x,λ) - |λ|^α} dλ` by the midpoint rule
/// at `n` and `2n` points per axis, for several points `x` at once.
pub fn tensor_grid_d_many(
    d: u32,
    alpha: f64,
    kappa: f64,
    xs: &[Vec<f64>],
    half_width: f64,
    n: usize,
) -> Result<Vec<OracleResult>> {
    check_grid(d, alpha, kappa, xs, half_width, n)?;
    let coarse = level_sum(d, alpha, kappa, xs, half_width, n);
    let fine = level_sum(d, alpha, kappa, xs, half_width, 2 * n);
    // the midpoint error is dominated by c h^p from the non-smooth origin:
    // p = κ + d, or κ + α + d when |λ|^κ is a polynomial
    let even = kappa >= 0.0 && kappa.fract() == 0.0 && (kappa as i64) % 2 == 0;
    let p = kappa + d as f64 + if even { alpha } else { 0.0 };
    let rho = ((2 * n) | 1) as f64 / (n | 1) as f64;
    let gain = 1.0 / (rho.powf(p) - 1.0);
    Ok(coarse
        .into_iter()
        .zip(fine)
        .map(|(c, f)| OracleResult {
            value: f + (f - c) * gain,
            method: OracleMethod::TensorGrid,
            grid: Some(GridSpec { half_width, points: n }),
            refinement: Some((c - f).abs()),
        })
        .collect())
}

/// Single-point [`tensor_grid_d_many`].
pub fn tensor_grid_d(d: u32, alpha: f64, kappa: f64, x: &[f64], half_width: f64, n: usize) -> Result<OracleResult> {
    Ok(tensor_grid_d_many(d, alpha, kappa, &[x.to_vec()], half_width, n)?.remove(0))
}

/// [`cauchy_density`] wrapped as an oracle result.
pub fn cauchy_oracle(d: u32, c: f64, t: f64, radius: f64) -> Result<OracleResult> {
    Ok(OracleResult {
        value: cauchy_density(d, c, t, radius)?,
        method: OracleMethod::CauchyClosedForm,
        grid: None,
        refinement: None,
    })
}
