use std::f64::consts::PI;

use super::bessel_j::{j_unchecked, BesselOrder};
use crate::error::{Error, Result};

/// First `n` positive zeros of `J_μ`, strictly increasing.
pub fn bessel_j_zeros(order: BesselOrder, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("bessel_j_zeros requires n >= 1"));
    }
    Ok(ZeroIter::new(order.value()).take(n).collect())
}

/// Lazy sequence of the positive zeros of `J_μ`.
///
/// Early zeros are bracketed by a sign scan; once McMahon's expansion is
/// reliable it seeds Newton directly.
#[derive(Debug, Clone)]
pub(crate) struct ZeroIter {
    mu: f64,
    k: usize,
    prev: f64,
}

impl ZeroIter {
    pub(crate) fn new(mu: f64) -> Self {
        ZeroIter { mu, k: 0, prev: 0.0 }
    }

    fn mcmahon(&self, k: usize) -> f64 {
        let m = 4.0 * self.mu * self.mu;
        let b = (k as f64 + 0.5 * self.mu - 0.25) * PI;
        let e = 1.0 / (8.0 * b);
        b - (m - 1.0) * e
            - 4.0 * (m - 1.0) * (7.0 * m - 31.0) * e.powi(3) / 3.0
            - 32.0 * (m - 1.0) * (83.0 * m * m - 982.0 * m + 3779.0) * e.powi(5) / 15.0
    }

    fn trusted(&self, k: usize) -> bool {
        let b = (k as f64 + 0.5 * self.mu - 0.25) * PI;
        b > 12.0 * (1.0 + self.mu * self.mu)
    }

    fn newton(&self, mut x: f64, lo: f64, hi: f64) -> f64 {
        let mu = self.mu;
        for _ in 0..60 {
            let j = j_unchecked(mu, x);
            let dj = mu / x * j - j_unchecked(mu + 1.0, x);
            let step = j / dj;
            let mut next = x - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (x + if step > 0.0 { lo } else { hi });
            }
            let delta = (next - x).abs();
            x = next;
            if delta < 1e-14 * x {
                break;
            }
        }
        x
    }

    fn bracket_scan(&self) -> (f64, f64) {
        let step = 0.2;
        let mut a = if self.k == 0 { 0.05 } else { self.prev + 0.5 };
        let mut fa = j_unchecked(self.mu, a);
        loop {
            let b = a + step;
            let fb = j_unchecked(self.mu, b);
            if fa == 0.0 {
                return (a, a);
            }
            if fa.signum() != fb.signum() {
                return (a, b);
            }
            a = b;
            fa = fb;
        }
    }

    fn refine_bracket(&self, mut a: f64, mut b: f64) -> f64 {
        if a == b {
            return a;
        }
        let fa = j_unchecked(self.mu, a);
        for _ in 0..30 {
            let m = 0.5 * (a + b);
            let fm = j_unchecked(self.mu, m);
            if fm.signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-3 {
                break;
            }
        }
        self.newton(0.5 * (a + b), a, b)
    }
}

impl Iterator for ZeroIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let k = self.k + 1;
        let mut zero = None;
        if self.trusted(k) {
            let guess = self.mcmahon(k);
            let z = self.newton(guess, guess - 1.0, guess + 1.0);
            if z > self.prev + 1.0 && (z - guess).abs() < 0.5 {
                zero = Some(z);
            }
        }
        let zero = match zero {
            Some(z) => z,
            None => {
                let (a, b) = self.bracket_scan();
                self.refine_bracket(a, b)
            }
        };
        self.k = k;
        self.prev = zero;
        Some(zero)
    }
}
