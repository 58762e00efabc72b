//! Exact rational operator order `κ = num/den`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parity class of `κ`, decided exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    EvenInteger,
    OddInteger,
    NonInteger,
}

/// Order `κ = num/den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KappaOrder {
    num: i64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl KappaOrder {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("kappa denominator must be nonzero"));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let (num, den) = (num * sign, den.unsigned_abs());
        let g = gcd(num.unsigned_abs(), den).max(1);
        Ok(KappaOrder { num: num / g as i64, den: den / g })
    }

    pub fn integer(n: i64) -> Self {
        KappaOrder { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn parity(&self) -> Parity {
        if self.den != 1 {
            Parity::NonInteger
        } else if self.num % 2 == 0 {
            Parity::EvenInteger
        } else {
            Parity::OddInteger
        }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_even_integer(&self) -> bool {
        self.parity() == Parity::EvenInteger
    }

    pub fn is_odd_integer(&self) -> bool {
        self.parity() == Parity::OddInteger
    }

    /// `κ + n` for an integer `n`.
    pub fn shift(&self, n: i64) -> Self {
        KappaOrder { num: self.num + n * self.den as i64, den: self.den }
    }

    /// `κ > n/m`, exactly.
    pub fn gt_ratio(&self, n: i64, m: u64) -> bool {
        (self.num as i128) * (m as i128) > (n as i128) * (self.den as i128)
    }
}

impl fmt::Display for KappaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for KappaOrder {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer. Decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            let hint = if s.contains('.') || s.contains('e') || s.contains('E') {
                " (decimal orders are ambiguous for parity; write e.g. 1/2 instead of 0.5)"
            } else {
                ""
            };
            Error::domain(format!("kappa must be an exact rational \"num/den\", got {s:?}{hint}"))
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = n.parse().map_err(|_| bad())?;
        let den: i64 = d.parse().map_err(|_| bad())?;
        KappaOrder::new(num, den)
    }
}

impl From<KappaOrder> for f64 {
    fn from(k: KappaOrder) -> f64 {
        k.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let k = KappaOrder::new(4, 6).unwrap();
        assert_eq!((k.num(), k.den()), (2, 3));
        let k = KappaOrder::new(3, -6).unwrap();
        assert_eq!((k.num(), k.den()), (-1, 2));
        let k = KappaOrder::new(0, 5).unwrap();
        assert_eq!((k.num(), k.den()), (0, 1));
        assert!(KappaOrder::new(1, 0).is_err());
    }

    #[test]
    fn parity_is_exact() {
        assert_eq!("4/2".parse::<KappaOrder>().unwrap().parity(), Parity::EvenInteger);
        assert_eq!("0/1".parse::<KappaOrder>().unwrap().parity(), Parity::EvenInteger);
        assert_eq!("-3/1".parse::<KappaOrder>().unwrap().parity(), Parity::OddInteger);
        assert_eq!("1999999/1000000".parse::<KappaOrder>().unwrap().parity(), Parity::NonInteger);
    }

    #[test]
    fn parsing() {
        assert_eq!("1/2".parse::<KappaOrder>().unwrap().value(), 0.5);
        assert_eq!(" 2 ".parse::<KappaOrder>().unwrap(), KappaOrder::integer(2));
        let e = "0.5".parse::<KappaOrder>().unwrap_err().to_string();
        assert!(e.contains("1/2"), "{e}");
        assert!("a/b".parse::<KappaOrder>().is_err());
        assert_eq!(KappaOrder::new(-3, 2).unwrap().to_string(), "-3/2");
    }

    #[test]
    fn exact_comparisons() {
        let k = KappaOrder::new(-1, 2).unwrap();
        assert!(k.gt_ratio(-1, 1));
        assert!(!k.gt_ratio(-1, 2));
        assert_eq!(k.shift(1), KappaOrder::new(1, 2).unwrap());
    }
}
