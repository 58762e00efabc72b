use std::f64::consts::PI;

use stablekernel::kernels::eval_d;
use stablekernel::oracle::{
    cauchy_density, cauchy_oracle, default_half_width, default_points, tensor_grid_d, tensor_grid_d_many, OracleMethod,
};
use stablekernel::quad::gauss_kronrod;
use stablekernel::{Error, KappaOrder, SpacePoint, StableParams};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn cauchy_examples() {
    let o = cauchy_oracle(1, 1.0, 1.0, 0.0).unwrap();
    assert!(rel(o.value, 1.0 / PI) < 1e-15);
    assert_eq!(o.method, OracleMethod::CauchyClosedForm);
    assert!(o.grid.is_none() && o.refinement.is_none());
    assert!(rel(cauchy_density(3, 1.0, 1.0, 0.0).unwrap(), 1.0 / (PI * PI)) < 1e-15);
    assert!(rel(cauchy_density(1, 2.0, 3.0, 4.0).unwrap(), 6.0 / (52.0 * PI)) < 1e-15);
    assert!(matches!(cauchy_density(1, 1.0, 0.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn grid_defaults() {
    let l = default_half_width(2, 0.7, 0.5);
    // radial mass of |λ|^κ e^{-|λ|^α} beyond L against the total Γ((κ+d)/α)/α
    let f = |u: f64| u.powf(1.5) * (-u.powf(0.7)).exp();
    let tail = gauss_kronrod(f, l, l + 2000.0, 0.0, 1e-14, 400).value;
    let total = libm::tgamma(2.5 / 0.7) / 0.7;
    assert!(tail <= 1e-10 * total * 1.01, "{}", tail / total);
    let n = default_points(3.0, l);
    assert_eq!(n % 2, 1);
    assert!(n >= 64 && 3.0 * l / n as f64 <= PI / 4.0);
}

#[test]
fn grid_agrees_with_hankel_engine() {
    let cases = [(1u32, 0.7, "-1/2"), (1, 1.5, "3/2"), (2, 1.2, "1/2"), (2, 0.9, "0")];
    for (d, alpha, ks) in cases {
        let kappa: KappaOrder = ks.parse().unwrap();
        let l = default_half_width(d, alpha, kappa.value());
        let n = if d == 1 { 1 << 14 } else { 1 << 9 };
        let xs: Vec<Vec<f64>> = [0.5, 1.5, 3.0].iter().map(|&r| SpacePoint::on_axis(d, r).coords().to_vec()).collect();
        let res = tensor_grid_d_many(d, alpha, kappa.value(), &xs, l, n).unwrap();
        let params = StableParams::new(d, alpha, 1.0).unwrap();
        for (x, o) in xs.iter().zip(res) {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let v = eval_d(&params, kappa, r, 1e-10).unwrap();
            let tol = (1e-4 * v.abs()).max(3.0 * o.refinement.unwrap());
            assert!((v - o.value).abs() <= tol, "d={d} alpha={alpha} kappa={ks} r={r}: {v} vs {}", o.value);
        }
    }
}

#[test]
fn grid_is_radial() {
    let a = tensor_grid_d(2, 1.3, 0.5, &[1.0, 0.0], 12.0, 256).unwrap();
    let b = tensor_grid_d(2, 1.3, 0.5, &[0.6, 0.8], 12.0, 256).unwrap();
    assert!((a.value - b.value).abs() < 1e-6 * a.value.abs().max(1e-3));
    assert_eq!(a.method, OracleMethod::TensorGrid);
    assert_eq!(a.grid.unwrap().points, 256);
}

#[test]
fn grid_errors() {
    assert!(matches!(tensor_grid_d(1, 1.0, 0.0, &[5.0], 60.0, 64), Err(Error::Resolution(_))));
    assert!(tensor_grid_d(2, 1.0, 0.0, &[1.0], 10.0, 64).is_err());
    assert!(tensor_grid_d(1, 2.0, 0.0, &[1.0], 10.0, 64).is_err());
}
