//! Named invariant suites at desk scale (a few seconds each).
//!
//! Every check reports a measured error next to its tolerance. [`Faults`]
//! lets a caller break a component on purpose to confirm that the suite
//! notices.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::Result;
use crate::forward::{spherical_mode_traces, Phantom, TimeGrid};
use crate::fraccalc::{caputo_derivative, SampledFunction};
use crate::harmonics::{eval_all, eval_harmonic, funk_hecke_plane_wave, i_pow, indices, HarmonicIndex, SphereGrid};
use crate::invert::{hyperplane_multiplier, invert_spherical_mode, spherical_multiplier, Regularization};
use crate::mellin::{mellin_forward, mellin_inverse, ml_mellin_closed_form, LogGridFunction, MellinStrip, Tails};
use crate::specfun::{bessel_j, gamma, mittag_leffler, MittagLefflerKernel};

/// Deliberate defects for mutation checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Negate both Mellin multipliers.
    pub multiplier_sign_flip: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    /// Measured error; NaN when the check could not run.
    pub error: f64,
    pub tolerance: f64,
    pub note: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// (name, error, tolerance)
type Measured = (&'static str, f64, f64);

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    run: fn(&Faults) -> Result<Vec<Measured>>,
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "specfun",
            about: "gamma identities, Bessel integral form, Mittag-Leffler reference values",
            run: specfun_suite,
        },
        Suite {
            name: "mellin",
            about: "log-grid round trip and the Mittag-Leffler kernel transform",
            run: mellin_suite,
        },
        Suite {
            name: "multipliers",
            about: "multiplier times kernel transform is constant on the strip",
            run: multiplier_suite,
        },
        Suite {
            name: "harmonics",
            about: "orthonormality on quadrature grids and the plane-wave expansion",
            run: harmonics_suite,
        },
        Suite {
            name: "fraccalc",
            about: "Caputo eigenfunction property and zero initial slope",
            run: fraccalc_suite,
        },
        Suite {
            name: "inversion",
            about: "mode round trips and superposition",
            run: inversion_suite,
        },
    ]
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = write!(s, "{tag} {}/{}  error {:.3e}  tolerance {:.1e}", c.suite, c.name, c.error, c.tolerance);
            if let Some(n) = &c.note {
                let _ = write!(s, "  ({n})");
            }
            s.push('\n');
        }
        let failed = self.failures().len();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }
}

/// Run the named suites (all when `only` is empty). Unknown names are an
/// error; a suite that errors out is recorded as one failed check.
pub fn run(only: &[String], faults: &Faults) -> Result<SelftestReport> {
    let all = suites();
    for name in only {
        if !all.iter().any(|s| s.name == name) {
            return Err(crate::error::invalid(format!("unknown selftest suite '{name}'")));
        }
    }
    let mut report = SelftestReport::default();
    for suite in all.iter().filter(|s| only.is_empty() || only.iter().any(|n| n == s.name)) {
        match (suite.run)(faults) {
            Ok(checks) => report.checks.extend(checks.into_iter().map(|(name, error, tolerance)| Check {
                suite: suite.name,
                name,
                error,
                tolerance,
                note: None,
            })),
            Err(e) => report.checks.push(Check {
                suite: suite.name,
                name: "suite-error",
                error: f64::NAN,
                tolerance: 0.0,
                note: Some(e.to_string()),
            }),
        }
    }
    Ok(report)
}

// max over samples; NaN propagates so a broken evaluation fails
fn worst(acc: f64, v: f64) -> f64 {
    if v.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

#[allow(clippy::excessive_precision)]
const ML_REFERENCE: [(f64, f64, f64); 6] = [
    (1.25, -10.0, -0.033192071062565766551),
    (1.25, -50.0, -0.0042572794085854681873),
    (1.5, -10.0, -0.10971305425274014669),
    (1.5, -30.0, -0.014470224834105874553),
    (1.75, -10.0, -0.45392110108013876532),
    (1.75, -50.0, -0.13970738964219355219),
];

fn specfun_suite(_: &Faults) -> Result<Vec<(&'static str, f64, f64)>> {
    let mut refl = 0.0f64;
    let mut rec = 0.0f64;
    for &(re, im) in &[(0.3, 0.0), (0.25, 1.5), (-2.7, 0.4), (4.2, -3.0)] {
        let z = Complex64::new(re, im);
        let lhs = gamma(z)? * gamma(Complex64::new(1.0, 0.0) - z)?;
        let rhs = PI / (z * PI).sin();
        refl = worst(refl, (lhs - rhs).norm() / rhs.norm());
        let up = gamma(z + 1.0)?;
        rec = worst(rec, (up - z * gamma(z)?).norm() / up.norm());
    }

    // J_m(x) = (1/pi) int_0^pi cos(m t - x sin t) dt; the trapezoid rule on
    // the periodic integrand converges geometrically
    let mut bes = 0.0f64;
    let m = 400;
    for order in 0..=10 {
        for &x in &[0.7, 3.0, 11.0, 27.5, 60.0] {
            let mut s = 0.0;
            for j in 0..m {
                let t = 2.0 * PI * j as f64 / m as f64;
                s += (order as f64 * t - x * t.sin()).cos();
            }
            let want = s / m as f64;
            bes = worst(bes, (bessel_j(order as f64, x)? - want).abs());
        }
    }

    let mut ml = 0.0f64;
    for &(a, x, want) in &ML_REFERENCE {
        ml = worst(ml, (mittag_leffler(a, x)? - want).abs());
    }
    let mut cos = 0.0f64;
    for k in 0..100 {
        let t = 0.1 * k as f64;
        cos = worst(cos, (mittag_leffler(2.0, -t * t)? - t.cos()).abs());
    }
    Ok(vec![
        ("gamma-reflection", refl, 1e-10),
        ("gamma-recurrence", rec, 1e-10),
        ("bessel-integral-form", bes, 1e-9),
        ("mittag-leffler-reference", ml, 1e-8),
        ("classical-limit-cosine", cos, 1e-10),
    ])
}

fn mellin_suite(_: &Faults) -> Result<Vec<(&'static str, f64, f64)>> {
    let f = LogGridFunction::sample(-14.0, 14.0, 4096, |x| (-x).exp())?;
    let line = mellin_forward(&f, 2.0, MellinStrip::new(0.0, f64::INFINITY)?, 301)?;
    let mut rt = 0.0f64;
    for &x in &[0.01f64, 0.3, 1.0, 2.5, 7.0] {
        rt = worst(rt, (mellin_inverse(&line, x)? - (-x).exp()).abs() / (-x).exp());
    }

    let alpha = 1.5;
    let k = MittagLefflerKernel::new(alpha)?;
    let g = LogGridFunction::sample(-14.0, 14.0, 1 << 13, |rho| k.eval(rho))?.with_tails(Tails {
        left: Some(0.0),
        right: Some(alpha),
    });
    let line = mellin_forward(&g, 0.5 * alpha, MellinStrip::new(0.0, alpha)?, 61)?;
    let mut cf = 0.0f64;
    for (w, v) in line.omegas.iter().zip(&line.values) {
        let exact = ml_mellin_closed_form(alpha, Complex64::new(0.5 * alpha, *w))?;
        cf = worst(cf, (v - exact).norm() / exact.norm());
    }
    Ok(vec![("exponential-round-trip", rt, 1e-6), ("kernel-transform-closed-form", cf, 1e-6)])
}

fn multiplier_suite(faults: &Faults) -> Result<Vec<(&'static str, f64, f64)>> {
    let sign = if faults.multiplier_sign_flip { -1.0 } else { 1.0 };
    let (mut sph, mut hyp) = (0.0f64, 0.0f64);
    for &alpha in &[1.25, 1.5, 1.75, 2.0] {
        for k in 0..200 {
            let re = alpha * (0.01 + 0.98 * (k % 20) as f64 / 19.0);
            let s = Complex64::new(re, -20.0 + 40.0 * (k / 20) as f64 / 9.0 + 0.013);
            let e = ml_mellin_closed_form(alpha, s)?;
            let h = sign * hyperplane_multiplier(alpha, s)? * e;
            hyp = worst(hyp, (h - PI).norm() / PI);
            for n in [2usize, 3] {
                for l in [0usize, 1, 4] {
                    let want = i_pow(-(l as i64)) * (2.0 * PI).powf(n as f64 / 2.0);
                    let got = sign * spherical_multiplier(alpha, n, l, s)? * e;
                    sph = worst(sph, (got - want).norm() / want.norm());
                }
            }
        }
    }
    Ok(vec![
        ("multiplier-identity-spherical", sph, 1e-12),
        ("multiplier-identity-hyperplane", hyp, 1e-12),
    ])
}

fn harmonics_suite(_: &Faults) -> Result<Vec<(&'static str, f64, f64)>> {
    let mut orth = 0.0f64;
    for (n, lmax) in [(2usize, 8usize), (3, 5)] {
        let grid = SphereGrid::for_degree(n, lmax)?;
        let count = indices(n, lmax).len();
        let mut gram = vec![0.0; count * count];
        for (node, w) in grid.nodes.iter().zip(&grid.weights) {
            let y = eval_all(n, lmax, node)?;
            for i in 0..count {
                for j in 0..count {
                    gram[i * count + j] += w * y[i] * y[j];
                }
            }
        }
        for i in 0..count {
            for j in 0..count {
                let want = if i == j { 1.0 } else { 0.0 };
                orth = worst(orth, (gram[i * count + j] - want).abs());
            }
        }
    }

    // circle: int e^{i lambda w.theta} Y(w) dw by the trapezoid rule
    let mut fh = 0.0f64;
    for &(l, k, lambda, phi) in &[(0usize, 1usize, 2.0, 0.3f64), (3, 1, 5.5, 1.1), (4, 2, 9.0, 2.9)] {
        let idx = HarmonicIndex::new(2, l, k)?;
        let theta = [phi.cos(), phi.sin()];
        let m = 512;
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let a = 2.0 * PI * j as f64 / m as f64;
            let w = [a.cos(), a.sin()];
            let d = w[0] * theta[0] + w[1] * theta[1];
            s += Complex64::from_polar(1.0, lambda * d) * eval_harmonic(idx, &w)? * (2.0 * PI / m as f64);
        }
        fh = worst(fh, (funk_hecke_plane_wave(idx, lambda, &theta)? - s).norm());
    }
    Ok(vec![("harmonic-orthonormality", orth, 1e-10), ("funk-hecke", fh, 1e-7)])
}

fn fraccalc_suite(_: &Faults) -> Result<Vec<(&'static str, f64, f64)>> {
    let mut eig = 0.0f64;
    for &alpha in &[1.5, 1.75] {
        let lam: f64 = 1.0;
        let grid = SampledFunction::graded_grid(3.2, 4000, 2.0);
        let h = SampledFunction::sample(grid, |t: f64| {
            mittag_leffler(alpha, -(t * lam).powf(alpha)).unwrap_or(f64::NAN)
        })?;
        for &t in &[0.4, 1.5, 2.8] {
            let e = mittag_leffler(alpha, -(t * lam).powf(alpha))?;
            let got = caputo_derivative(&h, alpha, t)?;
            eig = worst(eig, (got + lam.powf(alpha) * e).abs() / lam.powf(alpha));
        }
    }
    let mut slope = 0.0f64;
    for &alpha in &[1.5, 1.75] {
        let d: f64 = 1e-10;
        slope = worst(slope, ((mittag_leffler(alpha, -(2.0 * d).powf(alpha))? - 1.0) / d).abs());
    }
    Ok(vec![("caputo-eigenfunction", eig, 1e-3), ("zero-initial-slope", slope, 1e-4)])
}

fn mode_error(alpha: f64, l: usize) -> Result<f64> {
    let p = Phantom::new(2)?.with_mode(l, 1, 0.3, 1.0)?;
    let idx = HarmonicIndex::new(2, l, 1)?;
    let time = TimeGrid::standard(alpha);
    let tr = spherical_mode_traces(&p, alpha, 1.0, 0.0, l, &time)?;
    let lam: Vec<f64> = (0..151).map(|j| 0.5 + 7.5 * j as f64 / 150.0).collect();
    let r = invert_spherical_mode(tr.get(idx), &time, idx, alpha, &lam, &Regularization::default())?;
    let (mut e2, mut t2) = (0.0, 0.0);
    for (v, &x) in r.values.iter().zip(&lam) {
        if v.is_finite() {
            let t = p.reduced_profile(idx, x)?;
            e2 += (v - t).powi(2);
            t2 += t * t;
        }
    }
    Ok((e2 / t2).sqrt())
}

fn inversion_suite(_: &Faults) -> Result<Vec<(&'static str, f64, f64)>> {
    let frac = mode_error(1.5, 2)?;
    let classical = mode_error(2.0, 1)?;

    let alpha = 1.5;
    let time = TimeGrid::standard(alpha);
    let idx = HarmonicIndex::new(2, 1, 2)?;
    let p1 = Phantom::new(2)?.with_mode(1, 2, 0.3, 1.0)?;
    let p2 = Phantom::new(2)?.with_mode(1, 2, 0.5, 1.0)?;
    let w1 = spherical_mode_traces(&p1, alpha, 1.0, 0.0, 1, &time)?.get(idx).to_vec();
    let w2 = spherical_mode_traces(&p2, alpha, 1.0, 0.0, 1, &time)?.get(idx).to_vec();
    let mix: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| 2.0 * a - 0.7 * b).collect();
    let lam: Vec<f64> = (0..40).map(|j| 0.5 + 0.2 * j as f64).collect();
    let reg = Regularization::default();
    let r1 = invert_spherical_mode(&w1, &time, idx, alpha, &lam, &reg)?;
    let r2 = invert_spherical_mode(&w2, &time, idx, alpha, &lam, &reg)?;
    let rm = invert_spherical_mode(&mix, &time, idx, alpha, &lam, &reg)?;
    let scale = r1.values.iter().chain(&r2.values).filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
    let mut lin = 0.0f64;
    for j in 0..lam.len() {
        if rm.values[j].is_finite() {
            lin = worst(lin, (rm.values[j] - (2.0 * r1.values[j] - 0.7 * r2.values[j])).abs() / scale);
        }
    }
    Ok(vec![
        ("mode-round-trip", frac, 5e-2),
        ("mode-round-trip-classical", classical, 1e-3),
        ("superposition", lin, 1e-8),
    ])
}
