use std::f64::consts::PI;

use fracwave::forward::{
    forward_directional, forward_hyperplane, forward_hyperplane_freq, forward_spherical, spherical_mode_traces, Phantom,
    PlaneGrid, TimeGrid,
};
use fracwave::harmonics::{HarmonicIndex, HarmonicSeries, SphereGrid};
use fracwave::invert::{
    hankel_synthesis, hyperplane_multiplier, invert_directional, invert_directional_mode, invert_hyperplane,
    invert_hyperplane_freq, invert_spherical, invert_spherical_mode, spherical_multiplier, Cutoff, HankelSynthesis,
    LambdaFlag, Regularization, SphereOptions,
};
use fracwave::harmonics::i_pow;
use fracwave::mellin::ml_mellin_closed_form;
use num_complex::Complex64;

fn guarded_error(values: &[f64], truth: &[f64]) -> f64 {
    let (mut e2, mut t2) = (0.0, 0.0);
    for (v, t) in values.iter().zip(truth) {
        if v.is_finite() {
            e2 += (v - t).powi(2);
            t2 += t * t;
        }
    }
    (e2 / t2).sqrt()
}

fn lambdas(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|j| lo + (hi - lo) * j as f64 / (count as f64 - 1.0)).collect()
}

#[test]
fn multipliers_cancel_the_kernel_transform() {
    // 200 points per alpha spread over the strip
    for &alpha in &[1.25, 1.5, 1.75, 2.0] {
        for k in 0..200 {
            let re = alpha * (0.01 + 0.98 * (k % 20) as f64 / 19.0);
            let s = Complex64::new(re, -20.0 + 40.0 * (k / 20) as f64 / 9.0 + 0.013);
            let e = ml_mellin_closed_form(alpha, s).unwrap();
            let h = hyperplane_multiplier(alpha, s).unwrap() * e;
            assert!((h - PI).norm() <= 1e-12 * PI, "alpha {alpha} s {s}: {h}");
            for n in [2usize, 3] {
                for l in [0usize, 1, 2, 3, 7] {
                    let want = i_pow(-(l as i64)) * (2.0 * PI).powf(n as f64 / 2.0);
                    let got = spherical_multiplier(alpha, n, l, s).unwrap() * e;
                    assert!((got - want).norm() <= 1e-12 * want.norm(), "alpha {alpha} n {n} l {l} s {s}");
                }
            }
        }
    }
}

fn single_mode(n: usize, l: usize, k: usize, sigma: f64) -> (Phantom, HarmonicIndex) {
    let p = Phantom::new(n).unwrap().with_mode(l, k, sigma, 1.0).unwrap();
    (p, HarmonicIndex::new(n, l, k).unwrap())
}

fn mode_round_trip(alpha: f64, n: usize, l: usize, c: (f64, f64)) -> f64 {
    let (p, idx) = single_mode(n, l, 1, 0.3);
    let time = TimeGrid::standard(alpha);
    let tr = spherical_mode_traces(&p, alpha, c.0, c.1, l, &time).unwrap();
    let lam = lambdas(0.5, 8.0, 301);
    let r = invert_directional_mode(tr.get(idx), &time, idx, alpha, c.0, c.1, &lam, &Regularization::default()).unwrap();
    let truth: Vec<f64> = lam.iter().map(|&x| p.reduced_profile(idx, x).unwrap()).collect();
    assert!(r.flags.iter().filter(|f| **f == LambdaFlag::Ok).count() > 200);
    guarded_error(&r.values, &truth)
}

#[test]
fn mode_round_trip_fractional() {
    for (n, l) in [(2, 0), (2, 3), (3, 2)] {
        let e = mode_round_trip(1.5, n, l, (1.0, 0.0));
        assert!(e < 5e-2, "n {n} l {l}: {e}");
    }
}

#[test]
fn mode_round_trip_classical() {
    for (n, l) in [(2, 1), (3, 0)] {
        let e = mode_round_trip(2.0, n, l, (1.0, 0.0));
        assert!(e < 1e-3, "n {n} l {l}: {e}");
    }
}

#[test]
fn directional_mode_round_trip() {
    let e = mode_round_trip(1.5, 2, 2, (1.0, 0.5));
    assert!(e < 5e-2, "{e}");
    let e = mode_round_trip(1.75, 3, 1, (0.5, 1.0));
    assert!(e < 5e-2, "{e}");
}

#[test]
fn plain_weights_reproduce_the_spherical_mode() {
    let (p, idx) = single_mode(2, 2, 1, 0.3);
    let time = TimeGrid::standard(1.5);
    let tr = spherical_mode_traces(&p, 1.5, 1.0, 0.0, 2, &time).unwrap();
    let lam = lambdas(0.5, 8.0, 50);
    let reg = Regularization::default();
    let a = invert_spherical_mode(tr.get(idx), &time, idx, 1.5, &lam, &reg).unwrap();
    let b = invert_directional_mode(tr.get(idx), &time, idx, 1.5, 1.0, 0.0, &lam, &reg).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn zero_trace_gives_zero() {
    let time = TimeGrid::standard(1.5);
    let zero = vec![0.0; time.count + 1];
    let idx = HarmonicIndex::new(2, 1, 2).unwrap();
    let lam = lambdas(0.5, 8.0, 40);
    let r = invert_spherical_mode(&zero, &time, idx, 1.5, &lam, &Regularization::default()).unwrap();
    assert!(r.values.iter().all(|v| !v.is_finite() || *v == 0.0));
    let zc = vec![Complex64::new(0.0, 0.0); time.count + 1];
    let h = invert_hyperplane_freq(&zc, &time, &[0.5], 1.5, &[0.3, 1.0], &Regularization::default()).unwrap();
    assert!(h.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn inversion_is_linear() {
    let time = TimeGrid::standard(1.5);
    let idx = HarmonicIndex::new(2, 2, 1).unwrap();
    let (p1, _) = single_mode(2, 2, 1, 0.3);
    let (p2, _) = single_mode(2, 2, 1, 0.5);
    let w1 = spherical_mode_traces(&p1, 1.5, 1.0, 0.0, 2, &time).unwrap().get(idx).to_vec();
    let w2 = spherical_mode_traces(&p2, 1.5, 1.0, 0.0, 2, &time).unwrap().get(idx).to_vec();
    let mix: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| 2.0 * a - 0.7 * b).collect();
    let lam = lambdas(0.5, 8.0, 60);
    let reg = Regularization::default();
    let r1 = invert_spherical_mode(&w1, &time, idx, 1.5, &lam, &reg).unwrap();
    let r2 = invert_spherical_mode(&w2, &time, idx, 1.5, &lam, &reg).unwrap();
    let rm = invert_spherical_mode(&mix, &time, idx, 1.5, &lam, &reg).unwrap();
    let scale = r1.values.iter().chain(&r2.values).filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
    for j in 0..lam.len() {
        if rm.values[j].is_finite() {
            let want = 2.0 * r1.values[j] - 0.7 * r2.values[j];
            // roundoff times the amplification bound
            assert!((rm.values[j] - want).abs() <= 1e-8 * scale, "{j}: {} vs {want} (scale {scale})", rm.values[j]);
        }
    }
}

#[test]
fn larger_cutoff_does_not_hurt_clean_classical_data() {
    let (p, idx) = single_mode(2, 1, 1, 0.3);
    let time = TimeGrid::standard(2.0);
    let tr = spherical_mode_traces(&p, 2.0, 1.0, 0.0, 1, &time).unwrap();
    let lam = lambdas(0.5, 8.0, 151);
    let truth: Vec<f64> = lam.iter().map(|&x| p.reduced_profile(idx, x).unwrap()).collect();
    let mut prev = f64::INFINITY;
    for c in [10.0, 20.0, 40.0] {
        let reg = Regularization {
            cutoff: Cutoff::Fixed(c),
            ..Default::default()
        };
        let r = invert_spherical_mode(tr.get(idx), &time, idx, 2.0, &lam, &reg).unwrap();
        let e = guarded_error(&r.values, &truth);
        assert!(e <= prev * (1.0 + 1e-9), "cutoff {c}: {e} after {prev}");
        prev = e;
    }
}

#[test]
fn kernel_zeros_are_flagged() {
    let time = TimeGrid::standard(1.5);
    let (p, idx) = single_mode(2, 0, 1, 0.3);
    let tr = spherical_mode_traces(&p, 1.5, 1.0, 0.0, 0, &time).unwrap();
    // first zero of J_0
    let lam = [2.404825557695773, 3.0];
    let r = invert_spherical_mode(tr.get(idx), &time, idx, 1.5, &lam, &Regularization::default()).unwrap();
    assert_eq!(r.flags, vec![LambdaFlag::KernelZero, LambdaFlag::Ok]);
    assert!(r.values[0].is_nan());
    // the directional kernel has its zeros elsewhere
    let tr = spherical_mode_traces(&p, 1.5, 1.0, 1.0, 0, &time).unwrap();
    let r = invert_directional_mode(tr.get(idx), &time, idx, 1.5, 1.0, 1.0, &lam[..1], &Regularization::default())
        .unwrap();
    assert_eq!(r.flags, vec![LambdaFlag::Ok]);
}

fn analytic_profiles(p: &Phantom, lmax: usize, lam: &[f64]) -> HarmonicSeries {
    p.fourier_modes(lmax, lam).unwrap()
}

#[test]
fn hankel_synthesis_of_exact_profiles() {
    for n in [2usize, 3] {
        let p = Phantom::new(n)
            .unwrap()
            .with_mode(0, 1, 0.4, 1.0)
            .unwrap()
            .with_mode(2, 2, 0.3, 0.5)
            .unwrap()
            .with_mode(3, 1, 0.35, -0.3)
            .unwrap();
        let lam = lambdas(0.02, 40.0, 2000);
        let prof = analytic_profiles(&p, 3, &lam);
        let synth = HankelSynthesis::new(&prof, 1.5, 1024, false).unwrap();
        let peak = 1.0;
        for x in [vec![0.1, 0.2, 0.3], vec![-0.5, 0.1, 0.4], vec![0.0, 0.0, 0.0], vec![0.7, -0.3, -0.2]] {
            let x = &x[..n];
            let got = synth.eval(x).unwrap();
            let want = p.eval(x).unwrap();
            assert!((got - want).abs() < 1e-4 * peak, "n {n} x {x:?}: {got} vs {want}");
        }
    }
}

#[test]
fn hankel_synthesis_radial_gaussian_and_zero() {
    // l = 0 Gaussian mode in the plane: f(r) = Y_0 exp(-r^2 / (2 s^2))
    let s = 0.4;
    let p = Phantom::new(2).unwrap().with_mode(0, 1, s, 1.0).unwrap();
    let lam = lambdas(0.02, 35.0, 1800);
    let prof = analytic_profiles(&p, 0, &lam);
    for r in [0.0, 0.2, 0.5, 0.9] {
        let got = hankel_synthesis(&prof, r, &[0.6, 0.8], false).unwrap();
        let want = (-r * r / (2.0 * s * s)).exp() / (2.0 * PI).sqrt();
        assert!((got - want).abs() < 1e-4, "r {r}: {got} vs {want}");
    }
    let zero = HarmonicSeries::zeros(2, 3, Some(lam));
    assert_eq!(hankel_synthesis(&zero, 0.4, &[1.0, 0.0], false).unwrap(), 0.0);
}

#[test]
fn too_many_gaps_are_refused() {
    let lam = lambdas(0.5, 8.0, 100);
    let mut prof = HarmonicSeries::zeros(2, 0, Some(lam));
    for (j, v) in prof.values[0].iter_mut().enumerate() {
        *v = if j % 3 == 1 || j % 3 == 2 { f64::NAN } else { 1.0 };
    }
    assert!(HankelSynthesis::new(&prof, 1.0, 64, false).is_err());
}

#[test]
fn hyperplane_frequency_round_trip() {
    let p = Phantom::new(2).unwrap().with_blob(vec![0.3, 0.0], 0.5, 1.0).unwrap();
    for &(alpha, tol) in &[(1.5, 5e-2), (2.0, 1e-3)] {
        let time = TimeGrid::plane(alpha);
        let times = time.times();
        let (mut e2, mut t2) = (0.0, 0.0);
        for es in [0.0, 0.7, 2.1] {
            // stay clear of the grazing band next to eta_n = 0
            let en = lambdas(0.5f64.max(es), 8.0, 40);
            let tr = forward_hyperplane_freq(&p, alpha, &[es], &times).unwrap();
            let got = invert_hyperplane_freq(&tr, &time, &[es], alpha, &en, &Regularization::default()).unwrap();
            for (&v, g) in en.iter().zip(&got) {
                let t = p.fourier(&[es, v]).unwrap();
                e2 += (g - t).norm_sqr();
                t2 += t.norm_sqr();
            }
        }
        let e = (e2 / t2).sqrt();
        assert!(e < tol, "alpha {alpha}: {e}");
    }
}

#[test]
fn hyperplane_frequency_rejects_zero_normal() {
    let time = TimeGrid::standard(1.5);
    let zc = vec![Complex64::new(0.0, 0.0); time.count + 1];
    assert!(invert_hyperplane_freq(&zc, &time, &[0.5], 1.5, &[0.0], &Regularization::default()).is_err());
}

fn plane_phantom() -> Phantom {
    Phantom::new(2)
        .unwrap()
        .with_blob(vec![0.4, 0.0], 0.5, 1.0)
        .unwrap()
        .with_blob(vec![-0.6, 0.0], 0.5, 0.5)
        .unwrap()
}

#[test]
fn hyperplane_pipeline_round_trip_and_linearity() {
    let alpha = 1.5;
    let time = TimeGrid::standard(alpha);
    let plane = PlaneGrid::new(1, 64, 0.25).unwrap();
    let p = plane_phantom();
    let data = forward_hyperplane(&p, alpha, &plane, &time, false).unwrap();
    let reg = Regularization::default();
    let mut inv = invert_hyperplane(&data, &reg).unwrap();
    inv.attach_truth(&p).unwrap();
    assert!(inv.report.profile_error.unwrap() < 5e-2);
    let e = inv.report.field_error.unwrap().rel_l2;
    assert!(e < 5e-2);

    let mut scaled = data.clone();
    for row in scaled.values.iter_mut() {
        for v in row.iter_mut() {
            *v *= -3.0;
        }
    }
    let inv2 = invert_hyperplane(&scaled, &reg).unwrap();
    let peak = inv.recon.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let dev = inv.recon.values.iter().zip(&inv2.recon.values).fold(0.0f64, |m, (a, b)| m.max((b + 3.0 * a).abs()));
    assert!(dev < 1e-8 * 3.0 * peak, "{dev} vs peak {peak}");

    let mut zero = data.clone();
    for row in zero.values.iter_mut() {
        row.iter_mut().for_each(|v| *v = 0.0);
    }
    let z = invert_hyperplane(&zero, &reg).unwrap();
    assert!(z.recon.values.iter().all(|v| *v == 0.0));
}

#[test]
fn sphere_pipeline_single_mode_has_no_cross_talk() {
    let alpha = 1.5;
    let time = TimeGrid::standard(alpha);
    let p = Phantom::new(2).unwrap().with_mode(2, 2, 0.3, 1.0).unwrap();
    let grid = SphereGrid::for_degree(2, 6).unwrap();
    let data = forward_spherical(&p, alpha, &grid, &time, 6).unwrap();
    let opts = SphereOptions::default();
    let inv = invert_spherical(&data, &opts, &Regularization::default()).unwrap();
    let target = HarmonicIndex::new(2, 2, 2).unwrap();
    let peak = inv.profiles.get(target).iter().filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
    for idx in inv.profiles.indices() {
        if idx != target {
            let m = inv.profiles.get(idx).iter().filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(m <= 1e-3 * peak, "{idx:?}: {m} vs {peak}");
        }
    }
}

#[test]
fn sphere_pipeline_zero_data_and_directional_equivalence() {
    let alpha = 1.5;
    let time = TimeGrid::standard(alpha);
    let p = Phantom::new(2).unwrap().with_mode(1, 1, 0.3, 1.0).unwrap();
    let grid = SphereGrid::for_degree(2, 3).unwrap();
    let opts = SphereOptions {
        max_degree: 3,
        count: 21,
        ..Default::default()
    };
    let reg = Regularization::default();
    let data = forward_directional(&p, alpha, 1.0, 0.0, &grid, &time, 3).unwrap();
    let a = invert_spherical(&data, &opts, &reg).unwrap();
    let b = invert_directional(&data, 1.0, 0.0, &opts, &reg).unwrap();
    assert_eq!(a.recon.values, b.recon.values);

    let mut zero = data.clone();
    for row in zero.values.iter_mut() {
        row.iter_mut().for_each(|v| *v = 0.0);
    }
    let z = invert_spherical(&zero, &opts, &reg).unwrap();
    assert!(z.recon.values.iter().all(|v| *v == 0.0));
}
