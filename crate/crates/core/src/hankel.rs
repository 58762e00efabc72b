//! Hankel-type integrals
//!
//! ```text
//! I = ∫₀^∞ t^ν e^{-(t/r)^α} J_μ(t) dt
//! ```
//!
//! With `ν = d/2 + κ`, `μ = d/2 - 1` this is the radial integral behind
//! `D(κ, x) = (2π)^{-d/2} |x|^{-d-κ} I(d, κ, |x|)`.
//!
//! Two independent strategies are provided:
//!
//! * **direct**: substitute `t = r u` and integrate `u^ν e^{-u^α} J_μ(r u)`
//!   panel by panel between the scaled zeros of `J_μ`. For `r > 1` the partial
//!   sums are extrapolated with Wynn's epsilon algorithm.
//! * **contour**: for half-integer `μ` rotate onto the ray `z = s e^{iβ}`,
//!   where `J_μ` is replaced by the exponentially decaying `K_μ`:
//!
//! ```text
//! I = (2/π) Re( e^{i(ν-μ)π/2} ∫_{l_β} z^ν exp(-(z/r)^α e^{iαπ/2}) K_μ(z) dz ).
//! ```
//!
//! The ray integral converges for `β` inside `(-π/2, min(0, (π/2)(1/α - 1)))`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, tanh_sinh, wynn_epsilon};
use crate::special::{k_half_integer, ZeroIter};

/// Smallest tolerance the engines accept.
pub const MIN_TOL: f64 = 1e-12;

/// Library default tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Parameters of `∫₀^∞ t^ν e^{-(t/r)^α} J_μ(t) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelIntegrand {
    nu: f64,
    mu: f64,
    alpha: f64,
    r: f64,
}

impl HankelIntegrand {
    /// Requires `μ ≥ -1/2`, `ν + μ > -1`, `0 < α < 2`, `r > 0`.
    pub fn new(nu: f64, mu: f64, alpha: f64, r: f64) -> Result<Self> {
        if !nu.is_finite() || !(mu >= -0.5) || !mu.is_finite() {
            return Err(Error::domain(format!("invalid orders nu={nu}, mu={mu}")));
        }
        if !(nu + mu > -1.0) {
            return Err(Error::domain(format!(
                "integral diverges at the origin: nu + mu = {} <= -1",
                nu + mu
            )));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain(format!("r must be finite and > 0, got {r}")));
        }
        Ok(HankelIntegrand { nu, mu, alpha, r })
    }

    /// `I(d, κ, r)`: `ν = d/2 + κ`, `μ = d/2 - 1`.
    pub fn radial(d: u32, kappa: f64, alpha: f64, r: f64) -> Result<Self> {
        check_dim(d)?;
        Self::new(d as f64 / 2.0 + kappa, d as f64 / 2.0 - 1.0, alpha, r)
    }

    /// Gradient counterpart: `ν = d/2 + κ`, `μ = d/2`.
    pub fn radial_gradient(d: u32, kappa: f64, alpha: f64, r: f64) -> Result<Self> {
        check_dim(d)?;
        Self::new(d as f64 / 2.0 + kappa, d as f64 / 2.0, alpha, r)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Same integrand at another scale.
    pub fn with_r(self, r: f64) -> Result<Self> {
        Self::new(self.nu, self.mu, self.alpha, r)
    }

    /// `ν > |μ| - 1`, the condition for the large-`r` limit to exist.
    pub fn has_limit(&self) -> bool {
        self.nu > self.mu.abs() - 1.0
    }

    fn half_integer_mu(&self) -> bool {
        let twice = 2.0 * self.mu;
        twice.fract() == 0.0 && twice.rem_euclid(2.0) == 1.0
    }
}

fn check_dim(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("dimension must be >= 1"));
    }
    Ok(())
}

/// Which evaluation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    DirectAccelerated,
    Contour,
    SmallRDirect,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::DirectAccelerated => "direct_accelerated",
            Strategy::Contour => "contour",
            Strategy::SmallRDirect => "small_r_direct",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quadrature value with its internal consistency error and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V = f64> {
    pub value: V,
    pub err_estimate: f64,
    pub strategy: Strategy,
    pub evals: usize,
}

impl<V> QuadResult<V> {
    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> QuadResult<W> {
        QuadResult {
            value: f(self.value),
            err_estimate: self.err_estimate,
            strategy: self.strategy,
            evals: self.evals,
        }
    }
}

/// Dispatcher and engine knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelConfig {
    /// `r ≤ r_small` is summed directly without acceleration.
    pub r_small: f64,
    /// Half-integer `μ` with `r > r_osc` goes to the contour engine.
    pub r_osc: f64,
    /// Panel budget of the direct engine.
    pub max_panels: usize,
    /// Number of trailing partial sums handed to the epsilon algorithm.
    pub window: usize,
    /// Ray angle for the contour engine; `None` means the interval midpoint.
    pub beta: Option<f64>,
}

impl Default for HankelConfig {
    fn default() -> Self {
        HankelConfig { r_small: 1.0, r_osc: 10.0, max_panels: 4000, window: 30, beta: None }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(MIN_TOL..1.0).contains(&tol) {
        return Err(Error::domain(format!("tol must lie in [{MIN_TOL:e}, 1), got {tol}")));
    }
    Ok(())
}

/// `∫_U^∞ u^ν e^{-u^α} du`, bounded from above; `∞` before the decay sets in.
fn envelope_tail(nu: f64, alpha: f64, u: f64) -> f64 {
    let a = (nu + 1.0) / alpha;
    let s = u.powf(alpha);
    let base = ((a - 1.0) * s.ln() - s).exp() / alpha;
    if a <= 1.0 {
        base
    } else if s > a {
        base * s / (s - (a - 1.0))
    } else {
        f64::INFINITY
    }
}

/// Radius beyond which the envelope tail is below `rel` of the envelope mass.
fn envelope_cutoff(nu: f64, alpha: f64, rel: f64) -> f64 {
    let a = (nu + 1.0) / alpha;
    let mass = libm::tgamma(a) / alpha;
    let mut u = 1.0f64;
    while envelope_tail(nu, alpha, u) > rel * mass {
        u *= 1.25;
    }
    u
}

/// u-space integral `∫ u^ν e^{-u^α} J_μ(r u) du = I / r^{ν+1}`.
pub(crate) struct Scaled {
    pub value: f64,
    pub err: f64,
    pub evals: usize,
    pub strategy: Strategy,
}

fn u_integrand(h: &HankelIntegrand) -> impl Fn(f64) -> f64 + '_ {
    move |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let env = (h.nu * u.ln() - u.powf(h.alpha)).exp();
        if env == 0.0 {
            return 0.0;
        }
        env * crate::special::j_unchecked(h.mu, h.r * u)
    }
}

pub(crate) fn direct_scaled(
    h: &HankelIntegrand,
    tol: f64,
    accelerate: bool,
    cfg: &HankelConfig,
) -> Result<Scaled> {
    let strategy = if accelerate { Strategy::DirectAccelerated } else { Strategy::SmallRDirect };
    let f = u_integrand(h);
    let cutoff = envelope_cutoff(h.nu, h.alpha, 1e-3 * tol * 1e-3);
    let mut zeros = ZeroIter::new(h.mu).map(|j| j / h.r);
    let first_zero = zeros.next().expect("zero iterator is infinite");

    let mut evals = 0usize;
    let mut err_sum = 0.0;
    let mut sum = 0.0;
    let mut max_abs = 0.0f64;
    let mut sums: Vec<f64> = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();

    // leading panel with the algebraic singularity at u = 0
    let head = first_zero.min(1.0).min(cutoff);
    let lead = tanh_sinh(&f, 0.0, head, 0.0, 1e-2 * tol);
    evals += lead.evals;
    err_sum += lead.err;
    sum += lead.value;
    let mut left = head;
    let mut next_zero = first_zero;

    for panel in 0..cfg.max_panels {
        let right = next_zero.min(cutoff);
        if right > left {
            let scale = estimates.last().copied().unwrap_or(sum).abs().max(1e-3 * max_abs);
            let p = gauss_kronrod(&f, left, right, 1e-3 * tol * scale, 1e-3 * tol, 200);
            evals += p.evals;
            err_sum += p.err;
            sum += p.value;
            left = right;
        }
        max_abs = max_abs.max(sum.abs());
        if right >= cutoff {
            return Ok(Scaled { value: sum, err: err_sum, evals, strategy });
        }
        let tail = envelope_tail(h.nu, h.alpha, right);
        if tail <= 0.1 * tol * sum.abs() {
            return Ok(Scaled { value: sum, err: err_sum + tail, evals, strategy });
        }
        next_zero = zeros.next().expect("zero iterator is infinite");
        if !accelerate {
            continue;
        }
        sums.push(sum);
        if sums.len() > cfg.window {
            sums.remove(0);
        }
        if panel < 4 {
            continue;
        }
        let est = wynn_epsilon(&sums);
        estimates.push(est.value);
        let n = estimates.len();
        if n >= 3 {
            let e = estimates[n - 1];
            let spread = (e - estimates[n - 2]).abs().max((e - estimates[n - 3]).abs());
            let floor = max_abs * (tol * 1e-4).max(2e-14);
            if spread <= (tol * e.abs()).max(floor) {
                return Ok(Scaled { value: e, err: spread + err_sum, evals, strategy });
            }
        }
    }
    let best = estimates.last().copied().unwrap_or(sum);
    Err(Error::NoConvergence {
        reason: format!(
            "{strategy} stalled after {} panels (nu={}, mu={}, alpha={}, r={})",
            cfg.max_panels, h.nu, h.mu, h.alpha, h.r
        ),
        best: best * h.r.powf(h.nu + 1.0),
        err_estimate: f64::INFINITY,
    })
}

/// Direct strategy; `small_r_direct` below `cfg.r_small`, else accelerated.
pub fn eval_direct_with(h: &HankelIntegrand, tol: f64, cfg: &HankelConfig) -> Result<QuadResult> {
    check_tol(tol)?;
    let s = direct_scaled(h, tol, h.r > cfg.r_small, cfg)?;
    Ok(unscale(h, s))
}

/// [`eval_direct_with`] under the default configuration.
pub fn eval_direct(h: &HankelIntegrand, tol: f64) -> Result<QuadResult> {
    eval_direct_with(h, tol, &HankelConfig::default())
}

fn unscale(h: &HankelIntegrand, s: Scaled) -> QuadResult {
    let f = h.r.powf(h.nu + 1.0);
    QuadResult { value: s.value * f, err_estimate: s.err * f, strategy: s.strategy, evals: s.evals }
}

/// Open interval of ray angles for which the rotated integral converges.
pub fn admissible_beta_interval(alpha: f64) -> (f64, f64) {
    (-FRAC_PI_2, 0f64.min(FRAC_PI_2 * (1.0 / alpha - 1.0)))
}

/// Midpoint of [`admissible_beta_interval`].
pub fn default_beta(alpha: f64) -> f64 {
    let (lo, hi) = admissible_beta_interval(alpha);
    0.5 * (lo + hi)
}

/// Contour strategy on the ray `arg z = β`. Requires half-integer `μ`
/// (odd dimension) and `ν > |μ| - 1`.
pub fn eval_contour(h: &HankelIntegrand, beta: f64, tol: f64) -> Result<QuadResult> {
    check_tol(tol)?;
    if !h.half_integer_mu() {
        return Err(Error::UnsupportedDimension(format!(
            "contour path needs a half-integer Bessel order (odd d), got mu={}",
            h.mu
        )));
    }
    if !h.has_limit() {
        return Err(Error::domain(format!(
            "contour path needs nu > |mu| - 1, got nu={}, mu={}",
            h.nu, h.mu
        )));
    }
    let (lo, hi) = admissible_beta_interval(h.alpha);
    if !(beta > lo && beta < hi) {
        return Err(Error::domain(format!(
            "beta={beta} outside the admissible open interval ({lo}, {hi})"
        )));
    }
    let n = (h.mu.abs() - 0.5).round() as usize;
    let ray = Complex64::from_polar(1.0, beta);
    let rot = Complex64::from_polar(1.0, h.alpha * FRAC_PI_2);
    let g = |s: f64| -> Complex64 {
        if s <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let z = ray * s;
        let lz = Complex64::new(s.ln(), beta);
        let expo = h.nu * lz - (h.alpha * (lz - h.r.ln())).exp() * rot;
        // the e^{-z} inside K is folded into the exponent to avoid underflow
        let k = k_half_integer(n, z) * z.exp();
        (expo - z).exp() * k * ray
    };

    let cosb = beta.cos();
    let mut s_max = (-tol.ln() + 40.0) / cosb;
    for _ in 0..20 {
        s_max = (-tol.ln() + 40.0 + h.nu.max(0.0) * s_max.ln()) / cosb;
    }
    let head = 1.0f64.min(s_max);
    let a = tanh_sinh(&g, 0.0, head, 0.0, 1e-2 * tol);
    let scale = a.value.norm().max(1e-300);
    let b = gauss_kronrod(&g, head, s_max, 1e-3 * tol * scale, 1e-3 * tol, 2000);
    let total = a.value + b.value;
    if !a.converged || !b.converged {
        return Err(Error::NoConvergence {
            reason: format!("contour quadrature did not converge (beta={beta})"),
            best: contour_real(h, total),
            err_estimate: (a.err + b.err) * 2.0 / PI,
        });
    }
    Ok(QuadResult {
        value: contour_real(h, total),
        err_estimate: (a.err + b.err) * 2.0 / PI,
        strategy: Strategy::Contour,
        evals: a.evals + b.evals,
    })
}

fn contour_real(h: &HankelIntegrand, ray_integral: Complex64) -> f64 {
    let phase = Complex64::from_polar(1.0, (h.nu - h.mu) * FRAC_PI_2);
    2.0 / PI * (phase * ray_integral).re
}

/// Strategy chosen by [`eval_with`] for this integrand.
pub fn dispatch(h: &HankelIntegrand, cfg: &HankelConfig) -> Strategy {
    if h.r <= cfg.r_small {
        Strategy::SmallRDirect
    } else if h.half_integer_mu() && h.r > cfg.r_osc && h.has_limit() {
        Strategy::Contour
    } else {
        Strategy::DirectAccelerated
    }
}

/// Dispatching evaluator under `cfg`.
pub fn eval_with(h: &HankelIntegrand, tol: f64, cfg: &HankelConfig) -> Result<QuadResult> {
    check_tol(tol)?;
    match dispatch(h, cfg) {
        Strategy::Contour => eval_contour(h, cfg.beta.unwrap_or_else(|| default_beta(h.alpha)), tol),
        _ => eval_direct_with(h, tol, cfg),
    }
}

/// Dispatching evaluator: `r ≤ 1` small-r direct, half-integer `μ` with
/// `r > 10` contour, otherwise accelerated direct.
pub fn eval(h: &HankelIntegrand, tol: f64) -> Result<QuadResult> {
    eval_with(h, tol, &HankelConfig::default())
}

/// u-space value `I / r^{ν+1}` through the dispatcher; used by the kernels
/// to avoid overflow of `r^{ν+1}` at small and large `r`.
pub(crate) fn eval_scaled(h: &HankelIntegrand, tol: f64, cfg: &HankelConfig) -> Result<Scaled> {
    check_tol(tol)?;
    match dispatch(h, cfg) {
        Strategy::Contour => {
            let q = eval_contour(h, cfg.beta.unwrap_or_else(|| default_beta(h.alpha)), tol)?;
            let f = h.r.powf(h.nu + 1.0);
            Ok(Scaled { value: q.value / f, err: q.err_estimate / f, evals: q.evals, strategy: q.strategy })
        }
        s => direct_scaled(h, tol, s == Strategy::DirectAccelerated, cfg),
    }
}

/// Relative residual of
/// `I(d,κ,r) = (α/r^α) I(d+2, κ+α-2, r) - κ I(d+2, κ-2, r)`.
///
/// The second term is dropped when `κ = 0`.
pub fn recursion_residual(d: u32, kappa: f64, alpha: f64, r: f64, tol: f64) -> Result<f64> {
    let lhs = eval(&HankelIntegrand::radial(d, kappa, alpha, r)?, tol)?.value;
    let first = eval(&HankelIntegrand::radial(d + 2, kappa + alpha - 2.0, alpha, r)?, tol)?.value;
    let mut rhs = alpha / r.powf(alpha) * first;
    if kappa != 0.0 {
        rhs -= kappa * eval(&HankelIntegrand::radial(d + 2, kappa - 2.0, alpha, r)?, tol)?.value;
    }
    Ok((lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1e-300))
}
