//! Closed-form large-`|x|` constants for `D(κ, x)` and `N(κ, x)`.
//!
//! | branch | range of κ | tail |
//! |---|---|---|
//! | `generic_D` | `κ > -(d∧2)`, not an even integer | `D_κ |x|^{-d-κ}` |
//! | `even_D` | even integer `κ ≥ 0` | `D_{κ,α} |x|^{-d-α-κ}` |
//! | `generic_N` | `κ > 1-(d∧2)`, not an odd integer | `(N,ν) ~ -i N_κ (x,ν) |x|^{-d-κ-1}` |
//! | `odd_N` | odd integer `κ ≥ 1` | `(N,ν) ~ -i N_{κ,α} (x,ν) |x|^{-d-α-κ-1}` |
//!
//! On the degenerate branches the generic constant vanishes and the tail is
//! the next term of the expansion
//! `D(κ, r) ~ Σ_n (-1)^n/n! C(d, κ+nα) r^{-d-κ-nα}`, which gives
//!
//! ```text
//! D_{κ,α} = (α+κ) 2^{κ+α-1} π^{-d/2-1} Γ((α+κ)/2) Γ((d+α+κ)/2) cos((α+κ-1)π/2)
//! N_{κ,α} = (d+α+κ-1)(α+κ-1) 2^{κ+α-2} π^{-d/2-1}
//!           · Γ((α+κ-1)/2) Γ((d+α+κ-1)/2) cos((α+κ)π/2)
//! ```
//!
//! For `κ = 0` the first reduces to the classical tail of the stable density.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::kappa::KappaOrder;

/// Which expansion a constant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    GenericD,
    EvenD,
    GenericN,
    OddN,
    Lemma1,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::GenericD => "generic_D",
            Branch::EvenD => "even_D",
            Branch::GenericN => "generic_N",
            Branch::OddN => "odd_N",
            Branch::Lemma1 => "lemma1",
        }
    }

    pub fn is_gradient(self) -> bool {
        matches!(self, Branch::GenericN | Branch::OddN)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A tail constant. For the N branches `value` is `N_κ` (resp. `N_{κ,α}`)
/// and the scalar tail coefficient is `-value`; see [`Self::coefficient`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstant {
    pub value: f64,
    pub branch: Branch,
    pub decay_exponent: f64,
}

impl AsymptoticConstant {
    /// Coefficient `A` of the scalar tail: `D ~ A r^{-decay}` for the D
    /// branches, `n ~ A r^{1-decay}` for the N branches.
    pub fn coefficient(&self) -> f64 {
        if self.branch.is_gradient() {
            -self.value
        } else {
            self.value
        }
    }

    /// Leading tail of the scalar function at `radius`.
    pub fn tail(&self, radius: f64) -> f64 {
        let p = if self.branch.is_gradient() { 1.0 - self.decay_exponent } else { -self.decay_exponent };
        self.coefficient() * radius.powf(p)
    }
}

/// `cos(πx/2)`, exact when `x` is an integer.
fn cos_half_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        match x.rem_euclid(4.0) as i64 {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        }
    } else {
        (0.5 * PI * x).cos()
    }
}

/// `cos · exp(ln_mag)` evaluated so that a vanishing cosine gives an exact 0.
fn signed(ln_mag: f64, cos: f64) -> f64 {
    if cos == 0.0 {
        0.0
    } else {
        cos.signum() * (ln_mag + cos.abs().ln()).exp()
    }
}

fn lg(x: f64) -> f64 {
    libm::lgamma(x)
}

fn check_lemma(nu: f64, mu: f64) -> Result<()> {
    if !(nu > mu.abs() - 1.0) || !nu.is_finite() || !mu.is_finite() {
        return Err(Error::domain(format!("requires nu > |mu| - 1, got nu={nu}, mu={mu}")));
    }
    Ok(())
}

/// `lim_{r→∞} ∫₀^∞ t^ν e^{-(t/r)^α} J_μ(t) dt
///  = (2^ν/π) Γ((ν-μ+1)/2) Γ((ν+μ+1)/2) cos(π(ν-μ)/2)`.
pub fn lemma1_limit(nu: f64, mu: f64) -> Result<f64> {
    check_lemma(nu, mu)?;
    let ln_mag = nu * LN_2 - PI.ln() + lg(0.5 * (nu - mu + 1.0)) + lg(0.5 * (nu + mu + 1.0));
    Ok(signed(ln_mag, cos_half_pi(nu - mu)))
}

/// `∫₀^∞ t^ν K_μ(t) dt = 2^{ν-1} Γ((ν-μ+1)/2) Γ((ν+μ+1)/2)`.
pub fn k_bessel_moment(nu: f64, mu: f64) -> Result<f64> {
    check_lemma(nu, mu)?;
    Ok(((nu - 1.0) * LN_2 + lg(0.5 * (nu - mu + 1.0)) + lg(0.5 * (nu + mu + 1.0))).exp())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    Ok(())
}

fn check_d(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("dimension d must be >= 1"));
    }
    Ok(())
}

fn ln_pi_pow(d: u32) -> f64 {
    -(d as f64 / 2.0 + 1.0) * PI.ln()
}

/// `D_κ`, generic branch: `κ > -(d∧2)`, `κ` not an even integer.
pub fn const_d(d: u32, alpha: f64, kappa: KappaOrder) -> Result<AsymptoticConstant> {
    check_d(d)?;
    check_alpha(alpha)?;
    let lower = d.min(2) as i64;
    if !kappa.gt_ratio(-lower, 1) {
        return Err(Error::domain(format!("generic D constant needs kappa > -{lower}, got {kappa}")));
    }
    if kappa.is_even_integer() {
        return Err(Error::Parity(format!(
            "kappa={kappa} is an even integer; use the even-integer D constant"
        )));
    }
    let (k, df) = (kappa.value(), d as f64);
    let ln_mag = k * LN_2 + ln_pi_pow(d) + lg(0.5 * (df + k)) + lg(0.5 * k + 1.0);
    Ok(AsymptoticConstant {
        value: signed(ln_mag, cos_half_pi(k + 1.0)),
        branch: Branch::GenericD,
        decay_exponent: df + k,
    })
}

/// `D_{κ,α}`, even-integer branch `κ ∈ {0, 2, 4, ...}`.
pub fn const_d_even(d: u32, alpha: f64, kappa: KappaOrder) -> Result<AsymptoticConstant> {
    check_d(d)?;
    check_alpha(alpha)?;
    if !kappa.is_even_integer() || kappa.num() < 0 {
        return Err(Error::Parity(format!("kappa={kappa} is not an even integer >= 0")));
    }
    let (k, df) = (kappa.value(), d as f64);
    let s = alpha + k;
    let ln_mag = s.ln() + (s - 1.0) * LN_2 + ln_pi_pow(d) + lg(0.5 * s) + lg(0.5 * (df + s));
    Ok(AsymptoticConstant {
        value: signed(ln_mag, cos_half_pi(s - 1.0)),
        branch: Branch::EvenD,
        decay_exponent: df + s,
    })
}

/// `N_κ`, generic branch: `κ > 1-(d∧2)`, `κ` not an odd integer.
pub fn const_n(d: u32, alpha: f64, kappa: KappaOrder) -> Result<AsymptoticConstant> {
    check_d(d)?;
    check_alpha(alpha)?;
    let lower = 1 - d.min(2) as i64;
    if !kappa.gt_ratio(lower, 1) {
        return Err(Error::domain(format!("generic N constant needs kappa > {lower}, got {kappa}")));
    }
    if kappa.is_odd_integer() {
        return Err(Error::Parity(format!(
            "kappa={kappa} is an odd integer; use the odd-integer N constant"
        )));
    }
    let (k, df) = (kappa.value(), d as f64);
    let ln_mag = k * LN_2 + ln_pi_pow(d) + lg(0.5 * (k + 1.0)) + lg(0.5 * (df + k + 1.0));
    Ok(AsymptoticConstant {
        value: -signed(ln_mag, cos_half_pi(k)),
        branch: Branch::GenericN,
        decay_exponent: df + k + 1.0,
    })
}

/// `N_{κ,α}`, odd-integer branch `κ ∈ {1, 3, 5, ...}`.
pub fn const_n_odd(d: u32, alpha: f64, kappa: KappaOrder) -> Result<AsymptoticConstant> {
    check_d(d)?;
    check_alpha(alpha)?;
    if !kappa.is_odd_integer() || kappa.num() < 1 {
        return Err(Error::Parity(format!("kappa={kappa} is not an odd integer >= 1")));
    }
    let (k, df) = (kappa.value(), d as f64);
    let s = alpha + k - 1.0;
    let ln_mag = (df + s).ln() + s.ln() + (s - 1.0) * LN_2 + ln_pi_pow(d) + lg(0.5 * s) + lg(0.5 * (df + s));
    Ok(AsymptoticConstant {
        value: signed(ln_mag, cos_half_pi(s + 1.0)),
        branch: Branch::OddN,
        decay_exponent: df + alpha + k + 1.0,
    })
}

/// Parity-correct D constant.
pub fn asymptotic_d(d: u32, alpha: f64, kappa: KappaOrder) -> Result<AsymptoticConstant> {
    if kappa.is_even_integer() && kappa.num() >= 0 {
        const_d_even(d, alpha, kappa)
    } else {
        const_d(d, alpha, kappa)
    }
}

/// Parity-correct N constant.
pub fn asymptotic_n(d: u32, alpha: f64, kappa: KappaOrder) -> Result<AsymptoticConstant> {
    if kappa.is_odd_integer() && kappa.num() >= 1 {
        const_n_odd(d, alpha, kappa)
    } else {
        const_n(d, alpha, kappa)
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain(format!("radius must be finite and > 0, got {radius}")));
    }
    Ok(())
}

/// Leading tail of `D(κ, ·)` at `radius`.
pub fn tail_d(d: u32, alpha: f64, kappa: KappaOrder, radius: f64) -> Result<f64> {
    check_radius(radius)?;
    Ok(asymptotic_d(d, alpha, kappa)?.tail(radius))
}

/// Leading tail of the scalar `n(κ, ·)`, where `N(κ, x) = i n(κ, |x|) x/|x|`.
pub fn tail_n(d: u32, alpha: f64, kappa: KappaOrder, radius: f64) -> Result<f64> {
    check_radius(radius)?;
    Ok(asymptotic_n(d, alpha, kappa)?.tail(radius))
}

/// Fourier coefficient of `|λ|^s`: `C(d, s) = 2^s π^{-d/2} Γ((d+s)/2) / Γ(-s/2)`
/// for `s > -d`; zero when `s` is an even integer `≥ 0`.
pub fn power_coefficient(d: u32, s: f64) -> f64 {
    let z = -0.5 * s;
    if z <= 0.0 && z.fract() == 0.0 {
        return 0.0;
    }
    let (lgz, sign) = libm::lgamma_r(z);
    let ln_mag = s * LN_2 - 0.5 * d as f64 * PI.ln() + lg(0.5 * (d as f64 + s)) - lgz;
    sign as f64 * ln_mag.exp()
}

/// The expansion `D(κ, r) ≈ Σ_n (-1)^n/n! C(d, κ+nα) r^{-d-κ-nα}`, summed
/// until the terms stop decreasing or fall below `1e-17` of the sum.
///
/// Convergent for `α < 1` (and for `α = 1`, `r > 1`); asymptotic otherwise.
pub fn tail_series_d(d: u32, alpha: f64, kappa: f64, radius: f64) -> Result<f64> {
    check_d(d)?;
    check_alpha(alpha)?;
    check_radius(radius)?;
    if !(kappa > -(d as f64)) {
        return Err(Error::domain(format!("requires kappa > -d, got {kappa}")));
    }
    let lr = radius.ln();
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut ln_fact = 0.0;
    for n in 0..400u32 {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let s = kappa + n as f64 * alpha;
        let c = power_coefficient(d, s);
        let term = if c == 0.0 {
            0.0
        } else {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * c.signum() * (c.abs().ln() - ln_fact - (d as f64 + s) * lr).exp()
        };
        if term != 0.0 {
            if term.abs() > prev && n > 2 {
                break;
            }
            prev = term.abs();
        }
        sum += term;
        if term != 0.0 && term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> KappaOrder {
        s.parse().unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn lemma_examples() {
        assert!(rel(lemma1_limit(1.0, -0.5).unwrap(), -0.5) < 1e-14);
        assert_eq!(lemma1_limit(0.5, -0.5).unwrap(), 0.0);
        assert_eq!(lemma1_limit(1.5, 0.5).unwrap(), 0.0);
        assert!(lemma1_limit(-0.6, 0.5).is_err());
    }

    #[test]
    fn lemma_zero_structure() {
        for i in 0..40 {
            let mu = -0.5 + 0.25 * (i % 8) as f64;
            let nu = mu.abs() - 1.0 + 0.125 * (i + 1) as f64;
            let v = lemma1_limit(nu, mu).unwrap();
            let x = nu - mu;
            let odd = x.fract() == 0.0 && x.rem_euclid(2.0) == 1.0;
            assert_eq!(v == 0.0, odd, "nu={nu} mu={mu}");
        }
    }

    #[test]
    fn moment_closed_forms() {
        assert!(rel(k_bessel_moment(1.0, 0.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(k_bessel_moment(0.5, 0.5).unwrap(), (PI / 2.0).sqrt()) < 1e-15);
        assert!(rel(k_bessel_moment(2.0, 0.0).unwrap(), PI / 2.0) < 1e-15);
    }

    #[test]
    fn generic_d_matches_lemma() {
        for d in 1..=5u32 {
            for num in [-3, -1, 1, 3, 5, 7] {
                let kk = KappaOrder::new(num, 4).unwrap();
                if !kk.gt_ratio(-(d.min(2) as i64), 1) {
                    continue;
                }
                let c = const_d(d, 1.3, kk).unwrap().value;
                let df = d as f64;
                let l = (2.0 * PI).powf(-df / 2.0) * lemma1_limit(df / 2.0 + kk.value(), df / 2.0 - 1.0).unwrap();
                assert!(rel(c, l) < 1e-13, "d={d} kappa={kk}");
                assert!(rel(c, power_coefficient(d, kk.value())) < 1e-13);
            }
        }
    }

    #[test]
    fn even_constant_values() {
        let c = const_d_even(1, 1.0, k("0/1")).unwrap();
        assert!(rel(c.value, 1.0 / PI) < 1e-15);
        assert_eq!(c.decay_exponent, 2.0);
        assert_eq!(c.branch, Branch::EvenD);
        // -g'' of the Cauchy density decays like 6/(π x⁴)
        let c = const_d_even(1, 1.0, k("2/1")).unwrap();
        assert!(rel(c.value, -6.0 / PI) < 1e-14);
        assert_eq!(c.decay_exponent, 4.0);
        let c = const_d_even(3, 1.0, k("2/1")).unwrap();
        assert!(rel(c.value, -12.0 / (PI * PI)) < 1e-14);
    }

    #[test]
    fn even_constant_is_next_series_term() {
        for d in 1..=3u32 {
            for &alpha in &[0.6, 1.0, 1.5] {
                for kk in [0, 2, 4] {
                    let c = const_d_even(d, alpha, KappaOrder::integer(kk)).unwrap().value;
                    let next = -power_coefficient(d, kk as f64 + alpha);
                    assert!(rel(c, next) < 1e-13, "d={d} alpha={alpha} kappa={kk}");
                }
            }
        }
    }

    #[test]
    fn odd_constant_values() {
        let c = const_n_odd(1, 1.0, k("1/1")).unwrap();
        assert!(rel(c.value, -2.0 / PI) < 1e-15);
        assert!(rel(c.coefficient(), 2.0 / PI) < 1e-15);
        assert_eq!(c.decay_exponent, 4.0);
        let c = const_n_odd(3, 1.0, k("1/1")).unwrap();
        assert!(rel(c.value, -4.0 / (PI * PI)) < 1e-14);
    }

    #[test]
    fn generic_n_is_derivative_of_generic_d() {
        // n(κ, r) = -∂_r D(κ-1, r) termwise: -N_κ = (d+κ-1) D_{κ-1}.
        for d in 1..=3u32 {
            for num in [1, 3, 5, 9] {
                let kk = KappaOrder::new(num, 4).unwrap();
                let n = const_n(d, 1.2, kk).unwrap();
                let df = d as f64;
                let expect = (df + kk.value() - 1.0) * power_coefficient(d, kk.value() - 1.0);
                assert!(rel(n.coefficient(), expect) < 1e-13);
            }
        }
    }

    #[test]
    fn branch_errors_and_dispatch() {
        assert!(matches!(const_d(1, 1.0, k("0/1")), Err(Error::Parity(_))));
        assert!(matches!(const_n(1, 1.0, k("1/1")), Err(Error::Parity(_))));
        assert!(matches!(const_d_even(1, 1.0, k("1/2")), Err(Error::Parity(_))));
        assert!(matches!(const_n_odd(1, 1.0, k("2/1")), Err(Error::Parity(_))));
        assert!(const_d(1, 1.0, k("-1/1")).is_err());
        assert!(const_d(2, 1.0, k("-2/1")).is_err());
        assert!(const_d(3, 1.0, k("-3/2")).is_ok());
        assert_eq!(asymptotic_d(1, 1.0, k("2/1")).unwrap().branch, Branch::EvenD);
        assert_eq!(asymptotic_d(1, 1.0, k("1/2")).unwrap().branch, Branch::GenericD);
        assert_eq!(asymptotic_n(1, 1.0, k("1/1")).unwrap().branch, Branch::OddN);
        assert_eq!(asymptotic_n(1, 1.0, k("1/2")).unwrap().branch, Branch::GenericN);
    }

    #[test]
    fn generic_d_sign() {
        let c = const_d(1, 1.0, k("1/2")).unwrap();
        assert!(c.value < 0.0);
        assert_eq!(c.decay_exponent, 1.5);
    }

    #[test]
    fn cauchy_tail() {
        let t = tail_d(1, 1.0, k("0/1"), 100.0).unwrap();
        assert!(rel(t, 1.0 / (PI * 1e4)) < 1e-14);
        // α = 1, d = 1: the series reproduces 1/(π(1+r²)) for r > 1
        let s = tail_series_d(1, 1.0, 0.0, 3.0).unwrap();
        assert!(rel(s, 1.0 / (10.0 * PI)) < 1e-13);
    }
}
