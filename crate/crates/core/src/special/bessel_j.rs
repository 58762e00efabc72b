use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Switch point between the power series and the Hankel expansion for
/// orders `μ ≤ 3`.
pub const T_SWITCH: f64 = 18.0;

/// Largest order handed directly to the Hankel expansion beyond `T_SWITCH`.
const MU_ASYMPTOTIC: f64 = 3.0;

/// Below this argument the power series is summed in plain f64.
const T_PLAIN_SERIES: f64 = 5.0;

/// Order `μ` of `J_μ` or `K_μ`. Only `μ ≥ -1/2` is admitted: every order
/// that occurs here is `d/2 - 1` or `d/2` for an integer dimension `d ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu < -0.5 {
            return Err(Error::domain(format!("Bessel order must be >= -1/2, got {mu}")));
        }
        Ok(BesselOrder(mu))
    }

    /// Order `twice / 2`, exact for every integer `twice ≥ -1`.
    pub fn from_half_units(twice: i64) -> Result<Self> {
        Self::new(twice as f64 / 2.0)
    }

    /// `J_{d/2-1}`, the kernel of the d-dimensional radial Fourier transform.
    pub fn radial(d: u32) -> Result<Self> {
        Self::from_half_units(d as i64 - 2)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }

    pub fn is_half_integer(self) -> bool {
        let twice = 2.0 * self.0;
        twice.fract() == 0.0 && twice.rem_euclid(2.0) == 1.0
    }
}

/// Bessel function of the first kind `J_μ(t)` for real `t ≥ 0`.
///
/// `J_{-1/2}(0)` is reported as `+∞`.
pub fn bessel_j(order: BesselOrder, t: f64) -> Result<f64> {
    if !(t >= 0.0) || t.is_infinite() {
        return Err(Error::domain(format!("bessel_j requires finite t >= 0, got {t}")));
    }
    Ok(j_unchecked(order.0, t))
}

/// `J'_μ(t) = (μ/t) J_μ(t) - J_{μ+1}(t)` for `t > 0`.
pub fn bessel_j_derivative(order: BesselOrder, t: f64) -> Result<f64> {
    if !(t > 0.0) || t.is_infinite() {
        return Err(Error::domain(format!(
            "bessel_j_derivative requires finite t > 0, got {t}"
        )));
    }
    let mu = order.0;
    Ok(mu / t * j_unchecked(mu, t) - j_unchecked(mu + 1.0, t))
}

/// Argument above which the power series is abandoned for order `mu`.
///
/// Beyond it, orders `μ ≤ 3` use the Hankel expansion and larger orders
/// recur upwards from orders below 2, which is stable while `μ < t`.
pub fn switch_point(mu: f64) -> f64 {
    if mu <= MU_ASYMPTOTIC {
        T_SWITCH
    } else {
        T_SWITCH.max(mu)
    }
}

/// `J_μ(t)` without argument checks; requires `μ ≥ -1/2`, `t ≥ 0`.
pub(crate) fn j_unchecked(mu: f64, t: f64) -> f64 {
    if t == 0.0 {
        return if mu == 0.0 {
            1.0
        } else if mu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if t <= switch_point(mu) {
        j_series(mu, t)
    } else if mu <= MU_ASYMPTOTIC {
        j_asymptotic(mu, t)
    } else {
        j_upward(mu, t)
    }
}

/// Forward recurrence `J_{ν+1} = (2ν/t) J_ν - J_{ν-1}` from `ν ∈ [1, 2)`.
fn j_upward(mu: f64, t: f64) -> f64 {
    let steps = (mu.floor() - 1.0) as usize;
    let base = mu - steps as f64;
    let (mut prev, mut cur) = (j_asymptotic(base - 1.0, t), j_asymptotic(base, t));
    for k in 0..steps {
        let nu = base + k as f64;
        (prev, cur) = (cur, 2.0 * nu / t * cur - prev);
    }
    cur
}

fn series_prefactor(mu: f64, t: f64) -> f64 {
    // (t/2)^μ / Γ(μ+1)
    if mu == 0.0 {
        1.0
    } else if mu <= 170.0 {
        (0.5 * t).powf(mu) / libm::tgamma(mu + 1.0)
    } else {
        (mu * (0.5 * t).ln() - libm::lgamma(mu + 1.0)).exp()
    }
}

/// Ascending series `(t/2)^μ Σ (-t²/4)^k / (k! Γ(μ+k+1))`. For `t ≥ 5` the
/// partial sums are carried in double-double arithmetic; the largest term
/// reaches ~1e6 near `t = 18` and plain f64 would lose six digits.
pub(crate) fn j_series(mu: f64, t: f64) -> f64 {
    let pre = series_prefactor(mu, t);
    if t < T_PLAIN_SERIES {
        let q = 0.25 * t * t;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= -q / (kf * (kf + mu));
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        return pre * sum;
    }
    let q = Dd::mul_f64(t, t).scale(0.25);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for k in 1..400 {
        let kf = k as f64;
        let denom = Dd::add_f64(kf, mu).scale(kf);
        term = term.mul(q).div(denom).neg();
        sum = sum.add(term);
        if term.hi.abs() <= 1e-33 * sum.hi.abs().max(1e-300) {
            break;
        }
    }
    pre * (sum.hi + sum.lo)
}

/// Double-double value `hi + lo`, `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn quick(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn add_f64(a: f64, b: f64) -> Dd {
        Self::two_sum(a, b)
    }

    fn mul_f64(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn scale(self, s: f64) -> Dd {
        let p = Self::mul_f64(self.hi, s);
        Self::quick(p.hi, p.lo + self.lo * s)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let u = Self::quick(s.hi, s.lo + t.hi);
        Self::quick(u.hi, u.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Self::mul_f64(self.hi, o.hi);
        Self::quick(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.scale(q1).neg());
        let q2 = r.hi / o.hi;
        let r = r.add(o.scale(q2).neg());
        let q3 = r.hi / o.hi;
        Self::quick(q1, q2).add(Dd::from(q3))
    }
}

/// Hankel expansion `J_μ(t) = √(2/(πt)) (P cos χ - Q sin χ)`,
/// `χ = t - (μ/2 + 1/4)π`. Terminates exactly for half-integer `μ`.
pub(crate) fn j_asymptotic(mu: f64, t: f64) -> f64 {
    let (p, q) = hankel_pq(mu, t);
    let phase = (0.5 * mu) * PI + FRAC_PI_4;
    let (sp, cp) = phase.sin_cos();
    let (st, ct) = t.sin_cos();
    let cos_chi = ct * cp + st * sp;
    let sin_chi = st * cp - ct * sp;
    (2.0 / (PI * t)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Asymptotic series `P(μ,t)`, `Q(μ,t)` summed to the smallest term (at
/// least eight terms unless the series terminates).
pub(crate) fn hankel_pq(mu: f64, t: f64) -> (f64, f64) {
    let m = 4.0 * mu * mu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..=120u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (m - odd * odd) / (k as f64 * 8.0 * t);
        if next == 0.0 {
            break;
        }
        if k > 8 && next.abs() >= prev {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            // k = 2j contributes (-1)^j a_k to P
            p += sign * term;
        } else {
            // k = 2j+1 contributes (-1)^j a_k to Q
            q += sign * term;
        }
        prev = term.abs();
        if prev < 1e-18 * p.abs().max(q.abs()).max(1e-300) {
            break;
        }
    }
    (p, q)
}

#[cfg(test)]
fn j_half_integer_closed(mu: f64, t: f64) -> f64 {
    if mu == 0.5 {
        (2.0 / (PI * t)).sqrt() * t.sin()
    } else if mu == -0.5 {
        (2.0 / (PI * t)).sqrt() * t.cos()
    } else if mu == 1.5 {
        (2.0 / (PI * t)).sqrt() * (t.sin() / t - t.cos())
    } else {
        f64::NAN
    }
}
