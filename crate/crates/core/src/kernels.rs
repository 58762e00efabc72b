//! The density `g`, its fractional Laplacian `Δ_κ g` and gradient `∇_κ g`.
//!
//! All of them come from the unit-scale radial functions
//!
//! ```text
//! D(κ, r) = (2π)^{-d/2} r^{1-d/2} ∫₀^∞ u^{d/2+κ} e^{-u^α} J_{d/2-1}(r u) du
//! n(κ, r) = (2π)^{-d/2} r^{1-d/2} ∫₀^∞ u^{d/2+κ} e^{-u^α} J_{d/2}(r u) du
//! ```
//!
//! with `N(κ, x) = i n(κ, |x|) x/|x|`, and the scaling relations
//!
//! ```text
//! Δ_κ g(t,·,y)(x) = (ct)^{-(d+κ)/α} D(κ, (ct)^{-1/α}(x-y))
//! ∇_κ g(t,·,y)(x) = (ct)^{-(d+κ)/α} N(κ, (ct)^{-1/α}(x-y))
//! ```
//!
//! `g` itself is `Δ_0 g`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hankel::{eval_scaled, HankelConfig, HankelIntegrand, Strategy};
use crate::kappa::KappaOrder;

/// Dimension `d`, stability index `α ∈ (0, 2)` and diffusivity `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    d: u32,
    alpha: f64,
    c: f64,
}

impl StableParams {
    pub fn new(d: u32, alpha: f64, c: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension d must be >= 1"));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::domain(format!(
                "alpha must lie strictly inside (0, 2), got {alpha}"
            )));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("c must be finite and > 0, got {c}")));
        }
        Ok(StableParams { d, alpha, c })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacePoint {
    coords: Vec<f64>,
}

impl SpacePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("a point needs at least one finite coordinate"));
        }
        Ok(SpacePoint { coords })
    }

    pub fn origin(d: u32) -> Self {
        SpacePoint { coords: vec![0.0; d as usize] }
    }

    /// `(r, 0, ..., 0)`.
    pub fn on_axis(d: u32, r: f64) -> Self {
        let mut coords = vec![0.0; d as usize];
        coords[0] = r;
        SpacePoint { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn radius(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &SpacePoint) -> Result<SpacePoint> {
        if self.dim() != other.dim() {
            return Err(Error::domain("points of different dimension"));
        }
        Ok(SpacePoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() })
    }
}

fn check_point(params: &StableParams, x: &SpacePoint) -> Result<()> {
    if x.dim() != params.d as usize {
        return Err(Error::domain(format!(
            "point has {} coordinates, expected d = {}",
            x.dim(),
            params.d
        )));
    }
    Ok(())
}

/// A kernel value with the quadrature bookkeeping behind it. `strategy` is
/// `None` when a closed form was used.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<V> {
    pub value: V,
    pub err_estimate: f64,
    pub strategy: Option<Strategy>,
    pub evals: usize,
}

/// `ln((2π)^{-d} · surface(d))` with `surface(d) = 2π^{d/2}/Γ(d/2)`.
fn ln_origin_prefactor(d: u32) -> f64 {
    let df = d as f64;
    -df * (2.0 * PI).ln() + 2f64.ln() + 0.5 * df * PI.ln() - libm::lgamma(0.5 * df)
}

/// `D(κ, r)` for real `κ > -d`.
pub fn radial_d(d: u32, alpha: f64, kappa: f64, r: f64, tol: f64) -> Result<Evaluation<f64>> {
    let df = d as f64;
    if !(kappa > -df) {
        return Err(Error::domain(format!("D(kappa, x) requires kappa > -d, got kappa={kappa}, d={d}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be finite and >= 0, got {r}")));
    }
    if r == 0.0 {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        let a = (kappa + df) / alpha;
        let v = (ln_origin_prefactor(d) + libm::lgamma(a)).exp() / alpha;
        return Ok(Evaluation { value: v, err_estimate: 0.0, strategy: None, evals: 0 });
    }
    let h = HankelIntegrand::radial(d, kappa, alpha, r)?;
    let s = eval_scaled(&h, tol, &HankelConfig::default())?;
    let pre = (2.0 * PI).powf(-0.5 * df) * r.powf(1.0 - 0.5 * df);
    Ok(Evaluation { value: pre * s.value, err_estimate: pre * s.err, strategy: Some(s.strategy), evals: s.evals })
}

/// Scalar `n(κ, r)` with `N(κ, x) = i n(κ, |x|) x/|x|`; real `κ > 1 - d`.
pub fn radial_n(d: u32, alpha: f64, kappa: f64, r: f64, tol: f64) -> Result<Evaluation<f64>> {
    let df = d as f64;
    if !(kappa > 1.0 - df) {
        return Err(Error::domain(format!(
            "N(kappa, x) requires kappa > 1 - d, got kappa={kappa}, d={d}"
        )));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be finite and >= 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(Evaluation { value: 0.0, err_estimate: 0.0, strategy: None, evals: 0 });
    }
    let h = HankelIntegrand::radial_gradient(d, kappa, alpha, r)?;
    let s = eval_scaled(&h, tol, &HankelConfig::default())?;
    let pre = (2.0 * PI).powf(-0.5 * df) * r.powf(1.0 - 0.5 * df);
    Ok(Evaluation { value: pre * s.value, err_estimate: pre * s.err, strategy: Some(s.strategy), evals: s.evals })
}

fn kappa_gt(kappa: &KappaOrder, bound: i64, what: &str) -> Result<()> {
    if !kappa.gt_ratio(bound, 1) {
        return Err(Error::domain(format!("{what} requires kappa > {bound}, got kappa={kappa}")));
    }
    Ok(())
}

/// `D(κ, x)` at `|x| = radius`.
pub fn eval_d(params: &StableParams, kappa: KappaOrder, radius: f64, tol: f64) -> Result<f64> {
    eval_d_detailed(params, kappa, radius, tol).map(|e| e.value)
}

pub fn eval_d_detailed(
    params: &StableParams,
    kappa: KappaOrder,
    radius: f64,
    tol: f64,
) -> Result<Evaluation<f64>> {
    kappa_gt(&kappa, -(params.d as i64), "D(kappa, x)")?;
    radial_d(params.d, params.alpha, kappa.value(), radius, tol)
}

/// `N(κ, x)`: purely imaginary, parallel to `x`.
pub fn eval_n(params: &StableParams, kappa: KappaOrder, x: &SpacePoint, tol: f64) -> Result<Vec<Complex64>> {
    eval_n_detailed(params, kappa, x, tol).map(|e| e.value)
}

pub fn eval_n_detailed(
    params: &StableParams,
    kappa: KappaOrder,
    x: &SpacePoint,
    tol: f64,
) -> Result<Evaluation<Vec<Complex64>>> {
    check_point(params, x)?;
    kappa_gt(&kappa, 1 - params.d as i64, "N(kappa, x)")?;
    let r = x.radius();
    let n = radial_n(params.d, params.alpha, kappa.value(), r, tol)?;
    let value = if r == 0.0 {
        vec![Complex64::new(0.0, 0.0); x.dim()]
    } else {
        x.coords().iter().map(|&c| Complex64::new(0.0, n.value * c / r)).collect()
    };
    Ok(Evaluation { value, err_estimate: n.err_estimate, strategy: n.strategy, evals: n.evals })
}

fn scale_check(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time t must be finite and > 0, got {t}")));
    }
    Ok(())
}

/// `g(t, x, y) = (ct)^{-d/α} D(0, (ct)^{-1/α}|x-y|)`.
pub fn eval_density(params: &StableParams, t: f64, x: &SpacePoint, y: &SpacePoint, tol: f64) -> Result<f64> {
    frac_laplacian_g(params, KappaOrder::integer(0), t, x, y, tol)
}

/// `Δ_κ g(t, ·, y)(x)`.
pub fn frac_laplacian_g(
    params: &StableParams,
    kappa: KappaOrder,
    t: f64,
    x: &SpacePoint,
    y: &SpacePoint,
    tol: f64,
) -> Result<f64> {
    frac_laplacian_g_detailed(params, kappa, t, x, y, tol).map(|e| e.value)
}

pub fn frac_laplacian_g_detailed(
    params: &StableParams,
    kappa: KappaOrder,
    t: f64,
    x: &SpacePoint,
    y: &SpacePoint,
    tol: f64,
) -> Result<Evaluation<f64>> {
    check_point(params, x)?;
    check_point(params, y)?;
    scale_check(t)?;
    let ct = params.c * t;
    let scale = ct.powf(-1.0 / params.alpha);
    let amp = ct.powf(-(params.d as f64 + kappa.value()) / params.alpha);
    let mut e = eval_d_detailed(params, kappa, scale * x.sub(y)?.radius(), tol)?;
    e.value *= amp;
    e.err_estimate *= amp;
    Ok(e)
}

/// `∇_κ g(t, ·, y)(x)`: purely imaginary, parallel to `x - y`.
pub fn frac_gradient_g(
    params: &StableParams,
    kappa: KappaOrder,
    t: f64,
    x: &SpacePoint,
    y: &SpacePoint,
    tol: f64,
) -> Result<Vec<Complex64>> {
    frac_gradient_g_detailed(params, kappa, t, x, y, tol).map(|e| e.value)
}

pub fn frac_gradient_g_detailed(
    params: &StableParams,
    kappa: KappaOrder,
    t: f64,
    x: &SpacePoint,
    y: &SpacePoint,
    tol: f64,
) -> Result<Evaluation<Vec<Complex64>>> {
    check_point(params, x)?;
    check_point(params, y)?;
    scale_check(t)?;
    let ct = params.c * t;
    let scale = ct.powf(-1.0 / params.alpha);
    let amp = ct.powf(-(params.d as f64 + kappa.value()) / params.alpha);
    let diff = x.sub(y)?;
    let scaled = SpacePoint { coords: diff.coords.iter().map(|c| c * scale).collect() };
    let mut e = eval_n_detailed(params, kappa, &scaled, tol)?;
    for v in e.value.iter_mut() {
        *v *= amp;
    }
    e.err_estimate *= amp;
    Ok(e)
}

/// Largest deviation, over the canonical unit vectors `ν`, in
/// `(N(κ,x), ν) = -i (x,ν)/|x|² (α D(α+κ-1, x) - (d+κ-1) D(κ-1, x))`.
pub fn gradient_identity_residual(params: &StableParams, kappa: KappaOrder, x: &SpacePoint, tol: f64) -> Result<f64> {
    check_point(params, x)?;
    let r = x.radius();
    if r == 0.0 {
        return Err(Error::domain("gradient identity is stated for x != 0"));
    }
    let (d, alpha, k) = (params.d, params.alpha, kappa.value());
    let n = eval_n(params, kappa, x, tol)?;
    let d1 = radial_d(d, alpha, alpha + k - 1.0, r, tol)?.value;
    let d2 = radial_d(d, alpha, k - 1.0, r, tol)?.value;
    let bracket = alpha * d1 - (d as f64 + k - 1.0) * d2;
    let mut worst = 0.0f64;
    for (j, &xj) in x.coords().iter().enumerate() {
        let rhs = Complex64::new(0.0, -xj / (r * r) * bracket);
        worst = worst.max((n[j] - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32, alpha: f64, c: f64) -> StableParams {
        StableParams::new(d, alpha, c).unwrap()
    }

    fn k(s: &str) -> KappaOrder {
        s.parse().unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn cauchy_values() {
        let q = p(1, 1.0, 1.0);
        assert!(rel(eval_d(&q, k("0/1"), 1.0, 1e-10).unwrap(), 1.0 / (2.0 * PI)) < 1e-10);
        assert!(rel(eval_d(&q, k("0/1"), 0.0, 1e-10).unwrap(), 1.0 / PI) < 1e-15);
        let q3 = p(3, 1.0, 1.0);
        assert!(rel(eval_d(&q3, k("0/1"), 0.0, 1e-10).unwrap(), 1.0 / (PI * PI)) < 1e-14);
    }

    #[test]
    fn n_at_unit_radius() {
        let q = p(1, 1.0, 1.0);
        let n = eval_n(&q, k("1/1"), &SpacePoint::new(vec![1.0]).unwrap(), 1e-10).unwrap();
        assert!(n[0].re == 0.0);
        assert!(rel(n[0].im, 1.0 / (2.0 * PI)) < 1e-10);
        let z = eval_n(&q, k("1/1"), &SpacePoint::origin(1), 1e-10).unwrap();
        assert_eq!(z[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn n_is_parallel_to_x() {
        let q = p(3, 1.5, 1.0);
        let n = eval_n(&q, k("1/2"), &SpacePoint::new(vec![2.0, 0.0, 0.0]).unwrap(), 1e-10).unwrap();
        assert_eq!(n[1], Complex64::new(0.0, 0.0));
        assert_eq!(n[2], Complex64::new(0.0, 0.0));
        assert_eq!(n[0].re, 0.0);
        assert!(n[0].im != 0.0);
    }

    #[test]
    fn density_examples() {
        let q = p(1, 1.0, 2.0);
        let g = eval_density(&q, 3.0, &SpacePoint::new(vec![4.0]).unwrap(), &SpacePoint::origin(1), 1e-10).unwrap();
        assert!(rel(g, 6.0 / (52.0 * PI)) < 1e-10);
        let q = p(1, 1.0, 1.0);
        let g = eval_density(&q, 1.0, &SpacePoint::origin(1), &SpacePoint::origin(1), 1e-10).unwrap();
        assert!(rel(g, 1.0 / PI) < 1e-15);
    }

    #[test]
    fn second_order_laplacian_at_origin() {
        // Δ_2 g = -g'' and for the Cauchy density -g''(0) = 2/π.
        let q = p(1, 1.0, 1.0);
        let o = SpacePoint::origin(1);
        let v = frac_laplacian_g(&q, k("2/1"), 1.0, &o, &o, 1e-10).unwrap();
        assert!(rel(v, 2.0 / PI) < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(StableParams::new(1, 2.0, 1.0).is_err());
        assert!(StableParams::new(0, 1.0, 1.0).is_err());
        let q = p(2, 1.0, 1.0);
        assert!(eval_d(&q, k("-2/1"), 1.0, 1e-9).is_err());
        assert!(eval_n(&q, k("-1/1"), &SpacePoint::on_axis(2, 1.0), 1e-9).is_err());
        assert!(eval_n(&q, k("1/1"), &SpacePoint::on_axis(3, 1.0), 1e-9).is_err());
    }

    #[test]
    fn identity_examples() {
        let cases = [
            (p(1, 1.0, 1.0), k("1/1"), vec![1.0]),
            (p(3, 1.5, 1.0), k("1/2"), vec![1.0, 1.0, 1.0]),
            (p(2, 0.8, 1.0), k("3/2"), vec![0.0, 2.0]),
        ];
        for (q, kk, x) in cases {
            let r = gradient_identity_residual(&q, kk, &SpacePoint::new(x).unwrap(), 1e-10).unwrap();
            assert!(r <= 1e-8, "{r}");
        }
    }
}
