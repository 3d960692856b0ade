#[allow(clippy::excessive_precision)]
mod oracles {
    pub mod values;
}

use std::f64::consts::PI;

use fracwave::specfun::*;
use num_complex::Complex64;
use oracles::values::{BESSEL_J, GAMMA, MITTAG_LEFFLER};
use proptest::prelude::*;

#[test]
fn mittag_leffler_against_series_oracle() {
    for &(a, x, want) in MITTAG_LEFFLER {
        let got = mittag_leffler(a, x).unwrap();
        assert!((got - want).abs() < 1e-12, "E_{a}({x}) = {got}, oracle {want}");
        let fast = MittagLefflerKernel::new(a).unwrap().eval((-x).powf(1.0 / a));
        assert!((fast - want).abs() < 1e-12, "kernel E_{a}({x}) = {fast}, oracle {want}");
    }
}

#[test]
fn bessel_against_series_oracle() {
    for &(nu, x, want) in BESSEL_J {
        let got = bessel_j(nu, x).unwrap();
        assert!(
            (got - want).abs() <= 1e-12 * want.abs() + 1e-14,
            "J_{nu}({x}) = {got}, oracle {want}"
        );
    }
}

#[test]
fn bessel_order_runs_match_scalar() {
    let mut out = [0.0; 12];
    for &x in &[0.3, 4.0, 9.5, 31.0, 88.0] {
        for &nu0 in &[0.0, 0.5] {
            bessel_j_orders(nu0, x, &mut out).unwrap();
            for (k, v) in out.iter().enumerate() {
                let s = bessel_j(nu0 + k as f64, x).unwrap();
                assert!((v - s).abs() < 1e-14, "nu {} x {x}", nu0 + k as f64);
            }
        }
    }
}

#[test]
fn gamma_against_oracle() {
    for &(re, im, gr, gi) in GAMMA {
        let g = gamma(Complex64::new(re, im)).unwrap();
        let want = Complex64::new(gr, gi);
        assert!((g - want).norm() <= 1e-13 * want.norm(), "Gamma({re}+{im}i) = {g}, oracle {want}");
    }
}

#[test]
fn classical_order_two_is_cosine() {
    for k in 0..200 {
        let t = 0.05 * k as f64;
        assert!((mittag_leffler(2.0, -t * t).unwrap() - t.cos()).abs() < 1e-10);
    }
}

#[test]
fn bessel_small_argument_order() {
    for &nu in &[0.0, 0.5, 1.0, 3.5, 10.0] {
        let x: f64 = 1e-4;
        let ratio = bessel_j(nu, x).unwrap() / x.powf(nu);
        let want = 1.0 / (2f64.powf(nu) * gamma_real(nu + 1.0).unwrap());
        assert!((ratio - want).abs() < 1e-8 * want, "nu {nu}");
    }
}

proptest! {
    #[test]
    fn gamma_recurrence(re in -8.0f64..12.0, im in -20.0f64..20.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let g0 = gamma(z).unwrap();
        let g1 = gamma(z + 1.0).unwrap();
        prop_assert!((g1 - z * g0).norm() <= 1e-10 * g1.norm());
    }

    #[test]
    fn gamma_reflection(re in -6.0f64..6.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (z * PI).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }

    #[test]
    fn bessel_recurrence(nu_pick in 0usize..3, x in 0.1f64..50.0) {
        let nu = [1.0, 2.0, 5.5][nu_pick];
        let jm = bessel_j(nu - 1.0, x).unwrap();
        let j0 = bessel_j(nu, x).unwrap();
        let jp = bessel_j(nu + 1.0, x).unwrap();
        let lhs = jm + jp;
        let rhs = 2.0 * nu / x * j0;
        let scale = jm.abs().max(jp.abs()).max(rhs.abs());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
    }

    #[test]
    fn mittag_leffler_kernel_agrees(alpha in 1.05f64..1.95, z in 0.0f64..300.0) {
        let k = MittagLefflerKernel::new(alpha).unwrap();
        let d = mittag_leffler(alpha, -z.powf(alpha)).unwrap();
        prop_assert!((k.eval(z) - d).abs() < 1e-13);
    }

    #[test]
    fn mittag_leffler_bounded(alpha in 1.01f64..2.0, x in -200.0f64..0.0) {
        let v = mittag_leffler(alpha, x).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-12);
    }
}
