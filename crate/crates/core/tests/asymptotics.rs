use std::f64::consts::PI;

use proptest::prelude::*;

use stablekernel::asymptotics::{
    asymptotic_d, asymptotic_n, const_d, const_d_even, const_n, const_n_odd, k_bessel_moment, lemma1_limit, tail_d,
    tail_n, Branch,
};
use stablekernel::hankel::eval;
use stablekernel::kernels::{radial_d, radial_n};
use stablekernel::oracle::cauchy_derivatives;
use stablekernel::quad::gauss_kronrod;
use stablekernel::special::{bessel_k_real, BesselOrder};
use stablekernel::{Error, HankelIntegrand, KappaOrder};

fn k(s: &str) -> KappaOrder {
    s.parse().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn constant_examples() {
    let c = asymptotic_d(1, 1.0, k("0")).unwrap();
    assert!(rel(c.value, 1.0 / PI) < 1e-15);
    assert_eq!(c.branch, Branch::EvenD);
    assert!(rel(tail_d(1, 1.0, k("0"), 100.0).unwrap(), 1.0 / (PI * 1e4)) < 1e-14);
    let c = const_d(1, 1.0, k("1/2")).unwrap();
    assert!(c.value < 0.0);
    assert_eq!(c.decay_exponent, 1.5);
    assert!(matches!(const_d(1, 1.0, k("2")), Err(Error::Parity(_))));
    assert!(matches!(const_n(2, 1.0, k("3")), Err(Error::Parity(_))));
    assert!(matches!(const_d_even(2, 1.0, k("3/2")), Err(Error::Parity(_))));
    assert!(matches!(const_n_odd(2, 1.0, k("2")), Err(Error::Parity(_))));
}

#[test]
fn lemma_examples() {
    assert!(rel(lemma1_limit(1.0, -0.5).unwrap(), -0.5) < 1e-14);
    assert_eq!(lemma1_limit(0.5, -0.5).unwrap(), 0.0);
    assert!(lemma1_limit(-1.0, 0.5).is_err());
}

#[test]
fn lemma_limit_is_approached() {
    for &(nu, mu, alpha) in &[(1.0, -0.5, 1.0), (1.75, 0.0, 1.3), (2.5, 0.5, 0.8), (0.75, 1.0, 1.5)] {
        let limit = lemma1_limit(nu, mu).unwrap();
        let at = |r: f64| eval(&HankelIntegrand::new(nu, mu, alpha, r).unwrap(), 1e-11).unwrap().value;
        let (e50, e200) = (rel(at(50.0), limit), rel(at(200.0), limit));
        assert!(e200 < e50, "nu={nu} mu={mu}: {e50} -> {e200}");
        assert!(e200 < 0.05, "nu={nu} mu={mu}: {e200}");
    }
}

#[test]
fn k_moment_oracle() {
    // ∫₀^∞ t^ν K_μ(t) dt by quadrature, split at 1 for the log singularity of K_0
    for &(nu, mu) in &[(1.0, 0.0), (2.0, 0.0), (0.5, 0.5), (1.5, 1.0), (3.0, 2.0), (0.25, 0.5)] {
        let j = BesselOrder::new(mu).unwrap();
        let f = |t: f64| if t == 0.0 { 0.0 } else { t.powf(nu) * bessel_k_real(j, t).unwrap() };
        let q = gauss_kronrod(&f, 0.0, 1.0, 0.0, 1e-14, 400).value + gauss_kronrod(&f, 1.0, 60.0, 0.0, 1e-14, 400).value;
        let closed = k_bessel_moment(nu, mu).unwrap();
        assert!(rel(closed, q) < 1e-9, "nu={nu} mu={mu}: {closed} vs {q}");
    }
    assert!(rel(k_bessel_moment(1.0, 0.0).unwrap(), 1.0) < 1e-15);
    assert!(rel(k_bessel_moment(2.0, 0.0).unwrap(), PI / 2.0) < 1e-15);
}

#[test]
fn generic_constant_is_scaled_lemma_limit() {
    for d in 1..=3u32 {
        for ks in ["1/2", "3/2", "1", "5/3", "-1/2"] {
            let kappa = k(ks);
            let Ok(c) = const_d(d, 1.2, kappa) else { continue };
            let df = d as f64;
            let l = lemma1_limit(df / 2.0 + kappa.value(), df / 2.0 - 1.0).unwrap();
            assert!(rel(c.value, (2.0 * PI).powf(-df / 2.0) * l) < 1e-13, "d={d} kappa={ks}");
        }
    }
}

#[test]
fn ratio_improves_with_radius() {
    for &(d, alpha, ks) in &[(1u32, 1.5, "1/2"), (2, 0.8, "0"), (3, 1.2, "2"), (2, 1.7, "3/2")] {
        let kappa = k(ks);
        let ratio = |r: f64| radial_d(d, alpha, kappa.value(), r, 1e-11).unwrap().value / tail_d(d, alpha, kappa, r).unwrap();
        let (a, b) = ((ratio(50.0) - 1.0).abs(), (ratio(200.0) - 1.0).abs());
        assert!(b < a, "D d={d} alpha={alpha} kappa={ks}: {a} -> {b}");
    }
    for &(d, alpha, ks) in &[(1u32, 1.5, "1/2"), (3, 0.8, "1"), (2, 1.2, "2")] {
        let kappa = k(ks);
        let ratio = |r: f64| radial_n(d, alpha, kappa.value(), r, 1e-11).unwrap().value / tail_n(d, alpha, kappa, r).unwrap();
        let (a, b) = ((ratio(50.0) - 1.0).abs(), (ratio(200.0) - 1.0).abs());
        assert!(b < a, "N d={d} alpha={alpha} kappa={ks}: {a} -> {b}");
    }
}

#[test]
fn even_constant_reconciles_with_cauchy() {
    // D(2, x) = -g''(x) for the Cauchy density, and -g'' ~ -6/(π x⁴)
    let c = asymptotic_d(1, 1.0, k("2")).unwrap();
    assert!(rel(c.value, -6.0 / PI) < 1e-14);
    assert_eq!(c.decay_exponent, 4.0);
    for &x in &[1e3, 1e4] {
        let exact = -cauchy_derivatives(1, 1.0, 1.0, x, 2).unwrap();
        assert!(rel(exact * x.powi(4), c.value) < 5.0 / (x * x));
        assert!(rel(c.tail(x), exact) < 5.0 / (x * x));
    }
}

#[test]
fn odd_constant_reconciles_with_cauchy() {
    // N(1, x) = -i g'(x) x/|x|, so n(1, r) = -g'(r) ~ (2/π) r^{-3}
    let c = asymptotic_n(1, 1.0, k("1")).unwrap();
    assert!(rel(c.value, -2.0 / PI) < 1e-15);
    assert!(rel(c.coefficient(), 2.0 / PI) < 1e-15);
    for &x in &[1e3, 1e4] {
        let exact = -cauchy_derivatives(1, 1.0, 1.0, x, 1).unwrap();
        assert!(rel(c.tail(x), exact) < 5.0 / (x * x));
        let n = radial_n(1, 1.0, 1.0, x, 1e-11).unwrap().value;
        assert!(rel(n, exact) < 1e-7);
    }
}

proptest! {
    #[test]
    fn branches_are_exclusive(num in -3i64..12, den in 1i64..5, d in 1u32..4, alpha in 0.1f64..1.95) {
        let kappa = KappaOrder::new(num, den).unwrap();
        let kd = [const_d(d, alpha, kappa).is_ok(), const_d_even(d, alpha, kappa).is_ok()];
        let kn = [const_n(d, alpha, kappa).is_ok(), const_n_odd(d, alpha, kappa).is_ok()];
        prop_assert!(!(kd[0] && kd[1]));
        prop_assert!(!(kn[0] && kn[1]));
        let lower = d.min(2) as f64;
        if kappa.value() > 1.0 - lower {
            prop_assert!(kn[0] ^ kn[1]);
        }
        if kappa.value() > -lower {
            prop_assert!(kd[0] ^ kd[1]);
        }
        prop_assert_eq!(kappa.is_even_integer() && kappa.num() >= 0, kd[1]);
        prop_assert_eq!(kappa.is_odd_integer() && kappa.num() >= 1, kn[1]);
    }
}
