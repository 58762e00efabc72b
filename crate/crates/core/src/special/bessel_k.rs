use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel_j::BesselOrder;
use crate::error::{Error, Result};

/// Modified Bessel function `K_μ(z)` for `Re z > 0`.
///
/// Real `z` accepts any admitted order. Non-real `z` requires a half-integer
/// order, where `K_{n+1/2}` is a finite elementary sum.
pub fn bessel_k(order: BesselOrder, z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("bessel_k requires Re z > 0, got {z}")));
    }
    if z.im == 0.0 {
        return bessel_k_real(order, z.re).map(Complex64::from);
    }
    if !order.is_half_integer() {
        return Err(Error::UnsupportedOrder(format!(
            "complex-argument K_mu is implemented for half-integer mu only, got {}",
            order.value()
        )));
    }
    Ok(k_half_integer(half_index(order.value()), z))
}

/// `K_μ(x)` for real `x > 0`.
pub fn bessel_k_real(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_k_real requires finite x > 0, got {x}")));
    }
    let mu = order.value().abs();
    if order.is_half_integer() {
        return Ok(k_half_integer(half_index(mu), Complex64::from(x)).re);
    }
    Ok(k_real(mu, x))
}

/// `n` such that `|μ| = n + 1/2`.
fn half_index(mu: f64) -> usize {
    (mu.abs() - 0.5).round() as usize
}

/// `K_{n+1/2}(z) = √(π/(2z)) e^{-z} Σ_{k≤n} (n+k)! / (k!(n-k)!) (2z)^{-k}`.
pub(crate) fn k_half_integer(n: usize, z: Complex64) -> Complex64 {
    let w = (2.0 * z).inv();
    let mut coef = 1.0;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        // (n+k)!/(k!(n-k)!) from its predecessor
        let kf = k as f64;
        coef *= (n as f64 + kf) * (n as f64 - kf + 1.0) / kf;
        pow *= w;
        sum += coef * pow;
    }
    (PI / (2.0 * z)).sqrt() * (-z).exp() * sum
}

const EPS: f64 = 1e-16;
const MAXIT: usize = 10_000;

// Even Taylor coefficients of 1/Γ(z) = Σ a_k z^k, a_2 .. a_16.
const RGAMMA_EVEN: [f64; 8] = [
    0.577_215_664_901_532_9,
    -0.042_002_635_034_095_2,
    -0.042_197_734_555_544_3,
    0.007_218_943_246_663_0,
    -0.000_215_241_674_114_9,
    -0.000_020_134_854_780_7,
    0.000_001_133_027_232_0,
    0.000_000_006_116_095_0,
];

/// `(1/Γ(1-x) - 1/Γ(1+x)) / (2x)` and `(1/Γ(1-x) + 1/Γ(1+x)) / 2` with the
/// two reciprocal gammas, `|x| ≤ 1/2`.
fn temme_gammas(x: f64) -> (f64, f64, f64, f64) {
    let gampl = 1.0 / libm::tgamma(1.0 + x);
    let gammi = 1.0 / libm::tgamma(1.0 - x);
    let gam2 = 0.5 * (gammi + gampl);
    let gam1 = if x.abs() < 0.1 {
        let x2 = x * x;
        -RGAMMA_EVEN.iter().rev().fold(0.0, |acc, &c| acc * x2 + c)
    } else {
        (gammi - gampl) / (2.0 * x)
    };
    (gam1, gam2, gampl, gammi)
}

/// `K_μ(x)`, `μ ≥ 0`: Temme's series for `x < 2`, Steed's continued
/// fraction otherwise, then forward recurrence from `|μ - n| ≤ 1/2`.
fn k_real(mu: f64, x: f64) -> f64 {
    let nl = (mu + 0.5).floor();
    let xmu = mu - nl;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut rkmu, mut rk1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for i in 1..=(nl as usize) {
        let next = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    rkmu
}
