use std::f64::consts::PI;

use fracwave::fraccalc::{
    brute_force_pressure, caputo_derivative, riemann_liouville_integral, OracleOrders, SampledFunction,
};
use fracwave::specfun::{gamma_real, mittag_leffler};
use num_complex::Complex64;

#[test]
fn power_rule() {
    // I^q t^p = Gamma(p+1) / Gamma(p+1+q) t^{p+q}
    let grid = SampledFunction::graded_grid(2.0, 2000, 1.0);
    for &(p, q) in &[(1.0, 0.5), (2.0, 0.3), (0.5, 1.7)] {
        let h = SampledFunction::sample(grid.clone(), |t: f64| t.powf(p)).unwrap();
        let t: f64 = 1.6;
        let want = gamma_real(p + 1.0).unwrap() / gamma_real(p + 1.0 + q).unwrap() * t.powf(p + q);
        let got = riemann_liouville_integral(&h, q, t).unwrap();
        assert!((got - want).abs() < 1e-5 * want, "p {p} q {q}: {got} vs {want}");
    }
}

#[test]
fn semigroup() {
    let grid = SampledFunction::graded_grid(2.0, 1500, 3.0);
    let h = SampledFunction::sample(grid.clone(), |t| (1.3 * t).cos() + t * t).unwrap();
    for &a in &[0.3, 0.7] {
        for &b in &[0.3, 0.7] {
            let inner: Vec<f64> = grid.iter().map(|&t| riemann_liouville_integral(&h, b, t).unwrap()).collect();
            let ib = SampledFunction::new(grid.clone(), inner).unwrap();
            for &t in &[0.5, 1.2, 1.9] {
                let lhs = riemann_liouville_integral(&ib, a, t).unwrap();
                let rhs = riemann_liouville_integral(&h, a + b, t).unwrap();
                assert!((lhs - rhs).abs() < 1e-5 * rhs.abs(), "a {a} b {b} t {t}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn caputo_power_rule_and_classical_limit() {
    let grid = SampledFunction::graded_grid(2.0, 1000, 1.0);
    let h = SampledFunction::sample(grid, |t| t * t).unwrap();
    let got = caputo_derivative(&h, 1.5, 1.0).unwrap();
    assert!((got - 2.0 / gamma_real(1.5).unwrap()).abs() < 1e-8);
    assert!((caputo_derivative(&h, 2.0, 1.0).unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn mittag_leffler_is_an_eigenfunction() {
    // D^alpha E_alpha(-t^alpha lambda^alpha) = -lambda^alpha E_alpha(-t^alpha lambda^alpha)
    for &alpha in &[1.5, 1.75] {
        for &lam in &[0.5, 1.0, 2.0] {
            let grid = SampledFunction::graded_grid(3.2, 6000, 2.0);
            let h = SampledFunction::sample(grid, |t: f64| mittag_leffler(alpha, -(t * lam).powf(alpha)).unwrap()).unwrap();
            for k in 0..=7 {
                let t = 0.2 + 0.4 * k as f64;
                let e = mittag_leffler(alpha, -(t * lam).powf(alpha)).unwrap();
                let want = -lam.powf(alpha) * e;
                let got = caputo_derivative(&h, alpha, t).unwrap();
                // relative to the eigenvalue scale: E itself crosses zero
                assert!(
                    (got - want).abs() < 1e-3 * lam.powf(alpha),
                    "alpha {alpha} lambda {lam} t {t}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn zero_initial_slope() {
    for &alpha in &[1.5, 1.75] {
        let mut prev = f64::INFINITY;
        for k in 2..=10 {
            let d = 10f64.powi(-k);
            let e = mittag_leffler(alpha, -(2.0 * d).powf(alpha)).unwrap();
            let slope = ((e - 1.0) / d).abs();
            assert!(slope < prev);
            prev = slope;
        }
        assert!(prev < 1e-4, "alpha {alpha}: {prev}");
    }
}

#[test]
fn brute_force_at_time_zero_is_the_phantom() {
    // f = exp(-|x - c|^2 / (2 s^2))
    let (s, c) = (0.4, [0.3, -0.2]);
    let fhat = |xi: &[f64]| {
        let l2 = xi[0] * xi[0] + xi[1] * xi[1];
        Complex64::from_polar(2.0 * PI * s * s * (-s * s * l2 / 2.0).exp(), -(xi[0] * c[0] + xi[1] * c[1]))
    };
    for x in [[0.0, 0.0], [0.5, 0.1], [-0.3, 0.4]] {
        let want = (-((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)) / (2.0 * s * s)).exp();
        let got = brute_force_pressure(fhat, 1.5, &x, 0.0, 10.5 / s, OracleOrders::default()).unwrap();
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}

#[test]
fn brute_force_flags_non_real_spectra() {
    let odd = |xi: &[f64]| Complex64::new(0.0, xi[0] * (-xi[0] * xi[0] - xi[1] * xi[1]).exp()) + Complex64::new(1e-3, 0.0);
    let v = brute_force_pressure(odd, 1.5, &[0.0, 0.0], 0.5, 6.0, OracleOrders::default());
    assert!(v.is_ok());
    let complex = |_: &[f64]| Complex64::new(0.0, 1.0);
    assert!(brute_force_pressure(complex, 1.5, &[0.1, 0.0], 0.5, 3.0, OracleOrders::default()).is_err());
}
