use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stablekernel::asymptotics::asymptotic_d;
use stablekernel::kernels::{
    eval_d, eval_density, eval_n, frac_gradient_g, frac_laplacian_g, gradient_identity_residual, radial_d, radial_n,
};
use stablekernel::oracle::{cauchy_density, cauchy_derivatives};
use stablekernel::quad::gauss_kronrod;
use stablekernel::{Error, KappaOrder, SpacePoint, StableParams};

const TOL: f64 = 1e-10;

fn p(d: u32, alpha: f64) -> StableParams {
    StableParams::new(d, alpha, 1.0).unwrap()
}

fn k(s: &str) -> KappaOrder {
    s.parse().unwrap()
}

fn pt(c: &[f64]) -> SpacePoint {
    SpacePoint::new(c.to_vec()).unwrap()
}

#[test]
fn params_validation() {
    assert!(StableParams::new(1, 2.0, 1.0).is_err());
    assert!(StableParams::new(1, 0.0, 1.0).is_err());
    assert!(StableParams::new(0, 1.0, 1.0).is_err());
    assert!(StableParams::new(1, 1.0, 0.0).is_err());
    assert!(matches!(eval_d(&p(2, 1.0), k("-3"), 1.0, TOL), Err(Error::Domain(_))));
    assert!(matches!(eval_d(&p(2, 1.0), k("-2"), 1.0, TOL), Err(Error::Domain(_))));
    assert!(matches!(eval_n(&p(2, 1.0), k("-1"), &pt(&[1.0, 0.0]), TOL), Err(Error::Domain(_))));
    assert!(eval_d(&p(1, 1.0), k("0"), 1.0, TOL).is_ok());
}

#[test]
fn d_examples() {
    assert!((eval_d(&p(1, 1.0), k("0"), 1.0, TOL).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-12);
    assert!((eval_d(&p(1, 1.0), k("0"), 0.0, TOL).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert!((eval_d(&p(3, 1.0), k("0"), 0.0, TOL).unwrap() - 1.0 / (PI * PI)).abs() < 1e-15);
}

#[test]
fn n_examples() {
    let n = eval_n(&p(1, 1.0), k("1"), &pt(&[1.0]), TOL).unwrap();
    assert!(n[0].re == 0.0 && (n[0].im - 1.0 / (2.0 * PI)).abs() < 1e-12);
    for d in 1..=3 {
        let z = eval_n(&p(d, 1.3), k("1/2"), &SpacePoint::origin(d), TOL).unwrap();
        assert!(z.iter().all(|c| c.norm() == 0.0));
    }
    let n = eval_n(&p(3, 1.5), k("1/2"), &pt(&[2.0, 0.0, 0.0]), TOL).unwrap();
    assert_eq!(n[1].norm(), 0.0);
    assert_eq!(n[2].norm(), 0.0);
    assert_eq!(n[0].re, 0.0);
    assert!(n[0].im != 0.0);
}

#[test]
fn n_is_parallel_to_x() {
    let x = pt(&[0.3, -1.2, 2.0]);
    let n = eval_n(&p(3, 0.9), k("3/2"), &x, TOL).unwrap();
    let c = x.coords();
    let scale = n.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..3 {
        assert_eq!(n[i].re, 0.0);
        for j in 0..3 {
            assert!((n[i].im * c[j] - n[j].im * c[i]).abs() <= 1e-12 * scale * 2.0);
        }
    }
}

#[test]
fn density_examples_and_symmetry() {
    let zero = SpacePoint::origin(1);
    let g = eval_density(&p(1, 1.0), 1.0, &zero, &zero, TOL).unwrap();
    assert!((g - 1.0 / PI).abs() < 1e-15);
    let q = StableParams::new(1, 1.0, 2.0).unwrap();
    let g = eval_density(&q, 3.0, &pt(&[4.0]), &zero, TOL).unwrap();
    assert!((g - 6.0 / (52.0 * PI)).abs() < 1e-12);
    let (x, y) = (pt(&[0.4, -2.0]), pt(&[1.5, 0.25]));
    let a = eval_density(&p(2, 0.8), 0.7, &x, &y, TOL).unwrap();
    let b = eval_density(&p(2, 0.8), 0.7, &y, &x, TOL).unwrap();
    assert_eq!(a, b);
}

#[test]
fn laplacian_examples() {
    let params = p(2, 1.4);
    let (x, y) = (pt(&[0.7, 1.1]), pt(&[0.0, 0.0]));
    assert_eq!(
        frac_laplacian_g(&params, k("0"), 1.3, &x, &y, TOL).unwrap(),
        eval_density(&params, 1.3, &x, &y, TOL).unwrap()
    );
    let zero = SpacePoint::origin(1);
    let v = frac_laplacian_g(&p(1, 1.0), k("2"), 1.0, &zero, &zero, TOL).unwrap();
    assert!((v - 2.0 / PI).abs() < 1e-14);
    // unit scale
    let v = frac_laplacian_g(&params, k("1/2"), 1.0, &x, &y, TOL).unwrap();
    assert_eq!(v, eval_d(&params, k("1/2"), x.radius(), TOL).unwrap());
}

#[test]
fn laplacian_of_order_two_is_minus_second_derivative() {
    let zero = SpacePoint::origin(1);
    for &x in &[0.3, 1.0, 2.5, 10.0] {
        let v = frac_laplacian_g(&p(1, 1.0), k("2"), 1.0, &pt(&[x]), &zero, TOL).unwrap();
        let exact = -cauchy_derivatives(1, 1.0, 1.0, x, 2).unwrap();
        assert!((v - exact).abs() < 1e-11, "x={x}");
    }
}

#[test]
fn gradient_examples() {
    let zero = SpacePoint::origin(1);
    let v = frac_gradient_g(&p(1, 1.0), k("1"), 1.0, &pt(&[1.0]), &zero, TOL).unwrap();
    assert!((v[0].im - 1.0 / (2.0 * PI)).abs() < 1e-12);
    // i ∇_1 g is the ordinary gradient
    for &x in &[-3.0, -0.5, 0.2, 1.7] {
        let v = frac_gradient_g(&p(1, 1.0), k("1"), 1.0, &pt(&[x]), &zero, TOL).unwrap();
        let grad = cauchy_derivatives(1, 1.0, 1.0, x, 1).unwrap();
        assert!((-v[0].im - grad).abs() < 1e-12, "x={x}");
    }
    let y = pt(&[0.5, 0.5, 0.5]);
    let v = frac_gradient_g(&p(3, 1.2), k("1/2"), 2.0, &y, &y, TOL).unwrap();
    assert!(v.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn gradient_matches_finite_difference_of_d() {
    // n(κ, r) = -∂_r D(κ-1, r)
    let h = 1e-4;
    for &(d, alpha, kappa, r) in &[(1, 0.8, 1.5, 2.0), (2, 1.3, 1.0, 0.7), (3, 1.7, 0.5, 3.0), (2, 0.6, 2.0, 12.0)] {
        let n = radial_n(d, alpha, kappa, r, 1e-12).unwrap().value;
        let dp = radial_d(d, alpha, kappa - 1.0, r + h, 1e-12).unwrap().value;
        let dm = radial_d(d, alpha, kappa - 1.0, r - h, 1e-12).unwrap().value;
        let fd = -(dp - dm) / (2.0 * h);
        assert!((n - fd).abs() < 1e-7 * n.abs().max(1e-3), "d={d} r={r}: {n} vs {fd}");
    }
}

#[test]
fn gradient_identity_examples() {
    let cases: [(u32, f64, &str, Vec<f64>); 3] =
        [(1, 1.0, "1", vec![1.0]), (3, 1.5, "1/2", vec![1.0, 1.0, 1.0]), (2, 0.8, "3/2", vec![0.0, 2.0])];
    for (d, alpha, ks, x) in cases {
        let res = gradient_identity_residual(&p(d, alpha), k(ks), &pt(&x), 1e-10).unwrap();
        assert!(res <= 1e-8, "d={d}: {res}");
    }
    assert!(gradient_identity_residual(&p(1, 1.0), k("1"), &SpacePoint::origin(1), 1e-10).is_err());
}

#[test]
fn positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let d = rng.gen_range(1..=3u32);
        let alpha = rng.gen_range(0.3..1.95);
        let t = 10f64.powf(rng.gen_range(-2.0..2.0));
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-50.0..50.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let g = eval_density(&p(d, alpha), t, &pt(&x), &pt(&y), 1e-9).unwrap();
        assert!(g > 0.0, "d={d} alpha={alpha} t={t} x={x:?}");
    }
}

#[test]
fn normalization() {
    // surface(d) ∫₀^R r^{d-1} g(1, r) dr plus the tail A surface R^{-α}/α
    let big_r: f64 = 1e4;
    for d in 1..=3u32 {
        let surface = 2.0 * PI.powf(0.5 * d as f64) / libm::tgamma(0.5 * d as f64);
        for &alpha in &[0.7, 1.0, 1.5] {
            let params = p(d, alpha);
            let f = |r: f64| r.powi(d as i32 - 1) * eval_d(&params, k("0"), r, 1e-11).unwrap();
            let mut edges: Vec<f64> = vec![0.0, 0.5];
            while *edges.last().unwrap() < big_r {
                let next = (edges.last().unwrap() * 2.0).min(big_r);
                edges.push(next);
            }
            let inner: f64 =
                edges.windows(2).map(|w| gauss_kronrod(&f, w[0], w[1], 1e-13, 1e-11, 200).value).sum();
            let a = asymptotic_d(d, alpha, k("0")).unwrap().value;
            let tail = a * big_r.powf(-alpha) / alpha;
            let total = surface * (inner + tail);
            assert!((total - 1.0).abs() < 1e-4, "d={d} alpha={alpha}: {total}");
        }
    }
}

#[test]
fn rotation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let params = p(3, 1.1);
    for _ in 0..20 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
        // rotation about a random axis by Rodrigues' formula
        let axis: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        let u: Vec<f64> = axis.iter().map(|a| a / n).collect();
        let th: f64 = rng.gen_range(0.0..2.0 * PI);
        let dot = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
        let cross = [u[1] * x[2] - u[2] * x[1], u[2] * x[0] - u[0] * x[2], u[0] * x[1] - u[1] * x[0]];
        let xr: Vec<f64> =
            (0..3).map(|i| x[i] * th.cos() + cross[i] * th.sin() + u[i] * dot * (1.0 - th.cos())).collect();
        let zero = SpacePoint::origin(3);
        let a = frac_laplacian_g(&params, k("1/2"), 0.9, &pt(&x), &zero, TOL).unwrap();
        let b = frac_laplacian_g(&params, k("1/2"), 0.9, &pt(&xr), &zero, TOL).unwrap();
        assert!((a - b).abs() <= 1e-9 * a.abs());
    }
}

#[test]
fn scaling_relation_plumbing() {
    let params = StableParams::new(2, 1.3, 0.7).unwrap();
    let (x, y) = (pt(&[1.0, -2.0]), pt(&[0.5, 0.5]));
    for &t in &[0.05, 1.0, 20.0] {
        let ct: f64 = 0.7 * t;
        let v = frac_laplacian_g(&params, k("3/2"), t, &x, &y, TOL).unwrap();
        let r = x.sub(&y).unwrap().radius() * ct.powf(-1.0 / 1.3);
        let direct = ct.powf(-(2.0 + 1.5) / 1.3) * eval_d(&params, k("3/2"), r, TOL).unwrap();
        assert!((v - direct).abs() <= 1e-12 * direct.abs());
    }
}

#[test]
fn cauchy_density_in_higher_dimensions() {
    for d in 1..=3u32 {
        for &r in &[0.0, 0.3, 2.0, 40.0] {
            let g = eval_density(&p(d, 1.0), 1.0, &SpacePoint::on_axis(d, r), &SpacePoint::origin(d), TOL).unwrap();
            let exact = cauchy_density(d, 1.0, 1.0, r).unwrap();
            assert!((g - exact).abs() <= 1e-9 * exact, "d={d} r={r}");
        }
    }
}
