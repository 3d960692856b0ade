//! Mellin transforms on a logarithmic grid.
//!
//! With x = e^tau the transform Mf(gamma + i omega) is the Fourier integral of
//! f(e^tau) e^{gamma tau}, so one FFT of the samples gives a whole vertical
//! line. Truncating the tau range is the dominant error for functions with
//! power-law tails, and the endpoint terms of the trapezoid rule then leave an
//! error growing linearly in omega. To avoid both, a declared tail model
//!
//! ```text
//! phi_L(x) = x^{-a} (1 + x)^{a - b - 1}      M = B(s - a, b + 1 - s)
//! phi_R(x) = x^{1-a} (1 + x)^{a - 1 - b}     M = B(s - a + 1, b - s)
//! ```
//!
//! is fitted to the two endpoint samples, subtracted before the FFT and its
//! exact transform added back.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{ensure, invalid, Error, Result};
use crate::specfun::{ln_gamma, ln_sin_pi};

/// Open strip a < Re(s) < b of a Mellin transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinStrip {
    pub a: f64,
    pub b: f64,
}

/// Distance from a strip edge below which evaluation is refused.
pub const STRIP_EDGE_GUARD: f64 = 1e-6;

impl MellinStrip {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        ensure(a < b, || format!("empty Mellin strip ({a}, {b})"))?;
        Ok(Self { a, b })
    }

    pub fn contains(&self, re: f64) -> bool {
        re > self.a + STRIP_EDGE_GUARD && re < self.b - STRIP_EDGE_GUARD
    }

    pub fn check(&self, re: f64) -> Result<()> {
        if self.contains(re) {
            Ok(())
        } else {
            Err(Error::OutsideStrip {
                re,
                lo: self.a,
                hi: self.b,
            })
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
}

/// Declared power-law behaviour of a sampled function:
/// f(x) ~ x^{-left} as x -> 0 and f(x) ~ x^{-right} as x -> inf.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tails {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

/// Samples f(e^tau) on a uniform tau grid (both endpoints included).
#[derive(Debug, Clone)]
pub struct LogGridFunction {
    pub tau_min: f64,
    pub tau_max: f64,
    pub values: Vec<f64>,
    pub tails: Tails,
}

impl LogGridFunction {
    pub fn new(tau_min: f64, tau_max: f64, values: Vec<f64>) -> Result<Self> {
        ensure(tau_max > tau_min, || "tau_max must exceed tau_min".into())?;
        ensure(values.len() >= 8, || "need at least 8 samples".into())?;
        ensure(values.iter().all(|v| v.is_finite()), || {
            "log-grid samples must be finite".into()
        })?;
        Ok(Self {
            tau_min,
            tau_max,
            values,
            tails: Tails::default(),
        })
    }

    /// Sample `f` at x = e^tau on `count` points.
    pub fn sample<F: FnMut(f64) -> f64>(tau_min: f64, tau_max: f64, count: usize, mut f: F) -> Result<Self> {
        let h = (tau_max - tau_min) / (count as f64 - 1.0);
        let values = (0..count).map(|j| f((tau_min + j as f64 * h).exp())).collect();
        Self::new(tau_min, tau_max, values)
    }

    pub fn with_tails(mut self, tails: Tails) -> Self {
        self.tails = tails;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.tau_max - self.tau_min) / (self.values.len() as f64 - 1.0)
    }

    pub fn tau(&self, j: usize) -> f64 {
        self.tau_min + j as f64 * self.step()
    }

    /// Four-point Lagrange interpolation in tau; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let t = (x.ln() - self.tau_min) / self.step();
        let n = self.values.len();
        if !(0.0..=(n - 1) as f64).contains(&t) {
            return 0.0;
        }
        let i = (t.floor() as isize).clamp(1, n as isize - 3) as usize;
        let u = t - i as f64;
        let (p0, p1, p2, p3) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        -u * (u - 1.0) * (u - 2.0) / 6.0 * p0 + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * p1
            - (u + 1.0) * u * (u - 2.0) / 2.0 * p2
            + (u + 1.0) * u * (u - 1.0) / 6.0 * p3
    }
}

/// Samples of a Mellin transform on the vertical line Re(s) = gamma.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinLine {
    pub gamma: f64,
    /// Uniform and symmetric about zero.
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub strip: MellinStrip,
    /// Carried into the CSV header when known.
    pub alpha: Option<f64>,
    /// Largest |residual integrand| near the grid ends relative to the peak.
    pub tail_residual: f64,
}

impl MellinLine {
    pub fn new(gamma: f64, omegas: Vec<f64>, values: Vec<Complex64>, strip: MellinStrip) -> Result<Self> {
        strip.check(gamma)?;
        ensure(omegas.len() == values.len(), || "omega/value length mismatch".into())?;
        ensure(omegas.len() >= 2, || "a Mellin line needs at least two samples".into())?;
        let d = omegas[1] - omegas[0];
        let m = omegas.len();
        for j in 0..m {
            ensure((omegas[j] + omegas[m - 1 - j]).abs() <= 1e-9 * d.abs(), || {
                "omega grid must be symmetric about zero".into()
            })?;
            ensure((omegas[j] - omegas[0] - j as f64 * d).abs() <= 1e-9 * d.abs() * m as f64, || {
                "omega grid must be uniform".into()
            })?;
        }
        Ok(Self {
            gamma,
            omegas,
            values,
            strip,
            alpha: None,
            tail_residual: 0.0,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.omegas[1] - self.omegas[0]
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Largest |value(-omega) - conj(value(omega))| relative to the peak.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let m = self.values.len();
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        (0..m)
            .map(|j| (self.values[m - 1 - j] - self.values[j].conj()).norm())
            .fold(0.0, f64::max)
            / peak
    }

    /// Pointwise product with `m(s)`.
    pub fn multiply<F: FnMut(Complex64) -> Result<Complex64>>(&self, mut m: F) -> Result<MellinLine> {
        let mut out = self.clone();
        for (v, &w) in out.values.iter_mut().zip(&self.omegas) {
            *v *= m(Complex64::new(self.gamma, w))?;
        }
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# gamma={:.16e}", self.gamma);
        if let Some(a) = self.alpha {
            let _ = writeln!(s, "# alpha={a:.16e}");
        }
        let _ = writeln!(s, "# strip={:.16e},{:.16e}", self.strip.a, self.strip.b);
        s.push_str("omega,re,im\n");
        for (w, v) in self.omegas.iter().zip(&self.values) {
            let _ = writeln!(s, "{w:.16e},{:.16e},{:.16e}", v.re, v.im);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut gamma = None;
        let mut alpha = None;
        let mut strip = None;
        let mut omegas = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", i + 1));
            let line = line.trim();
            if line.is_empty() || line == "omega,re,im" {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let (k, v) = h.trim().split_once('=').ok_or_else(|| bad("malformed header"))?;
                match k {
                    "gamma" => gamma = Some(v.parse::<f64>().map_err(|_| bad("bad gamma"))?),
                    "alpha" => alpha = Some(v.parse::<f64>().map_err(|_| bad("bad alpha"))?),
                    "strip" => {
                        let (a, b) = v.split_once(',').ok_or_else(|| bad("bad strip"))?;
                        strip = Some(MellinStrip::new(
                            a.parse().map_err(|_| bad("bad strip"))?,
                            b.parse().map_err(|_| bad("bad strip"))?,
                        )?);
                    }
                    _ => {}
                }
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("expected three numbers"))?;
            if cols.len() != 3 {
                return Err(bad("expected three columns"));
            }
            omegas.push(cols[0]);
            values.push(Complex64::new(cols[1], cols[2]));
        }
        let gamma = gamma.ok_or_else(|| Error::Parse("missing gamma header".into()))?;
        let strip = strip.ok_or_else(|| Error::Parse("missing strip header".into()))?;
        let mut line = MellinLine::new(gamma, omegas, values, strip)?;
        line.alpha = alpha;
        Ok(line)
    }
}

fn ln_beta(p: Complex64, q: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?)
}

/// Tail model fitted at the grid ends: values of the basis functions and
/// their Mellin transforms.
struct TailModel {
    coef: Vec<f64>,
    basis: Vec<Box<dyn Fn(f64) -> f64>>,
    transforms: Vec<Box<dyn Fn(Complex64) -> Result<Complex64>>>,
}

fn tail_model(f: &LogGridFunction, gamma: f64) -> Result<TailModel> {
    let x0 = f.tau_min.exp();
    let x1 = f.tau_max.exp();
    let v0 = f.values[0];
    let v1 = *f.values.last().unwrap();
    let mut basis: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
    let mut transforms: Vec<Box<dyn Fn(Complex64) -> Result<Complex64>>> = Vec::new();
    match (f.tails.left, f.tails.right) {
        (Some(a), Some(b)) => {
            ensure(a < gamma && gamma < b, || {
                format!("gamma = {gamma} must lie between the declared tail exponents {a} and {b}")
            })?;
            basis.push(Box::new(move |x: f64| x.powf(-a) * (1.0 + x).powf(a - b - 1.0)));
            basis.push(Box::new(move |x: f64| x.powf(1.0 - a) * (1.0 + x).powf(a - 1.0 - b)));
            transforms.push(Box::new(move |s| Ok(ln_beta(s - a, b + 1.0 - s)?.exp())));
            transforms.push(Box::new(move |s| Ok(ln_beta(s - a + 1.0, b - s)?.exp())));
        }
        (Some(a), None) => {
            ensure(a < gamma, || format!("gamma = {gamma} must exceed the left tail exponent {a}"))?;
            basis.push(Box::new(move |x: f64| x.powf(-a) * (-x).exp()));
            transforms.push(Box::new(move |s| Ok(ln_gamma(s - a)?.exp())));
        }
        (None, Some(b)) => {
            ensure(gamma < b, || format!("gamma = {gamma} must be below the right tail exponent {b}"))?;
            basis.push(Box::new(move |x: f64| x.powf(-b) * (-1.0 / x).exp()));
            transforms.push(Box::new(move |s| Ok(ln_gamma(b - s)?.exp())));
        }
        (None, None) => {}
    }
    let coef = match basis.len() {
        0 => vec![],
        1 => {
            let x = if f.tails.left.is_some() { x0 } else { x1 };
            let v = if f.tails.left.is_some() { v0 } else { v1 };
            vec![v / basis[0](x)]
        }
        _ => {
            let (a00, a01, a10, a11) = (basis[0](x0), basis[1](x0), basis[0](x1), basis[1](x1));
            let det = a00 * a11 - a01 * a10;
            if det == 0.0 || !det.is_finite() {
                return Err(Error::IllConditioned("tail model fit is singular".into()));
            }
            vec![(v0 * a11 - a01 * v1) / det, (a00 * v1 - a10 * v0) / det]
        }
    };
    Ok(TailModel {
        coef,
        basis,
        transforms,
    })
}

/// Frequencies of an `n_freq`-point line with spacing `d`: integer multiples
/// of `d` for odd counts, half-integer multiples (omega = 0 skipped) for even.
pub fn line_frequencies(n_freq: usize, d: f64) -> Vec<f64> {
    let half = (n_freq as f64 - 1.0) / 2.0;
    (0..n_freq).map(|j| (j as f64 - half) * d).collect()
}

/// Forward Mellin transform on the line Re(s) = gamma.
///
/// Returns `n_freq` samples spaced 2 pi / (N h), where N h is the tau period
/// of the grid. An even `n_freq` gives the half-shifted grid without omega = 0.
pub fn mellin_forward(f: &LogGridFunction, gamma: f64, strip: MellinStrip, n_freq: usize) -> Result<MellinLine> {
    strip.check(gamma)?;
    let n = f.len();
    ensure(n_freq >= 2 && n_freq < n, || {
        format!("n_freq must be in [2, {}), got {n_freq}", n)
    })?;
    let h = f.step();
    let model = tail_model(f, gamma)?;

    let mut peak = 0.0f64;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| {
            let tau = f.tau(j);
            let x = tau.exp();
            let mut r = f.values[j];
            for (c, b) in model.coef.iter().zip(&model.basis) {
                r -= c * b(x);
            }
            let g = (gamma * tau).exp();
            peak = peak.max((f.values[j] * g).abs());
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            Complex64::new(w * r * g * h, 0.0)
        })
        .collect();

    let edge = (n / 32).max(1);
    let tail_residual = if peak > 0.0 {
        let at = |j: usize| buf[j].norm() / h;
        at(edge).max(at(n - 1 - edge)) / peak
    } else {
        0.0
    };

    // Half-shifted grid: multiply by e^{i (d/2) tau_j} before the FFT.
    let d = 2.0 * PI / (n as f64 * h);
    let shift = if n_freq.is_multiple_of(2) { 0.5 * d } else { 0.0 };
    if shift != 0.0 {
        for (j, v) in buf.iter_mut().enumerate() {
            *v *= Complex64::from_polar(1.0, shift * j as f64 * h);
        }
    }
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_inverse(n);
    fft.process(&mut buf);

    let k_lo = -(n_freq as i64 / 2);
    let omegas: Vec<f64> = (0..n_freq as i64).map(|j| (k_lo + j) as f64 * d + shift).collect();
    let mut values = Vec::with_capacity(n_freq);
    for (j, &w) in omegas.iter().enumerate() {
        let k = (k_lo + j as i64).rem_euclid(n as i64) as usize;
        // sum_j g_j e^{i w tau_j} = e^{i w tau_min} sum_j g_j e^{i w j h}
        let mut v = buf[k] * Complex64::from_polar(1.0, w * f.tau_min);
        let s = Complex64::new(gamma, w);
        for (c, t) in model.coef.iter().zip(&model.transforms) {
            v += c * t(s)?;
        }
        values.push(v);
    }
    let mut line = MellinLine::new(gamma, omegas, values, strip)?;
    line.tail_residual = tail_residual;
    Ok(line)
}

/// Inverse Mellin transform (1/2 pi) int Mf(gamma + i w) x^{-gamma - i w} dw
/// by the trapezoid rule over the sampled line. The line must be
/// conjugate-symmetric; the imaginary residue is checked.
pub fn mellin_inverse(line: &MellinLine, x: f64) -> Result<f64> {
    ensure(x > 0.0 && x.is_finite(), || format!("inverse Mellin point must be positive, got {x}"))?;
    let lnx = x.ln();
    let mut re = 0.0;
    let mut im = 0.0;
    let mut mag = 0.0;
    for (w, v) in line.omegas.iter().zip(&line.values) {
        let t = *v * Complex64::from_polar(1.0, -w * lnx);
        re += t.re;
        im += t.im;
        mag += t.norm();
    }
    if mag > 0.0 && im.abs() > 1e-8 * mag {
        return Err(Error::ImaginaryResidue {
            what: "inverse Mellin transform",
            residue: im.abs() / mag,
            limit: 1e-8,
        });
    }
    Ok(re * line.spacing() / (2.0 * PI) * (-line.gamma * lnx).exp())
}

/// Multiplicative convolution int_0^inf f(t) g(x/t) dt/t on the grid of `f`,
/// with `g` interpolated in log space.
pub fn mellin_convolve(f: &LogGridFunction, g: &LogGridFunction, x: f64) -> Result<f64> {
    ensure(x > 0.0 && x.is_finite(), || format!("convolution point must be positive, got {x}"))?;
    let n = f.len();
    let h = f.step();
    let mut s = 0.0;
    for j in 0..n {
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        let t = f.tau(j).exp();
        s += w * f.values[j] * g.interpolate(x / t);
    }
    Ok(s * h)
}

/// Mellin transform of E(rho; alpha) = E_alpha(-rho^alpha):
/// pi / (alpha Gamma(1 - s) sin(pi s / alpha)), valid for 0 < Re s < alpha.
pub fn ml_mellin_closed_form(alpha: f64, s: Complex64) -> Result<Complex64> {
    ensure(alpha > 0.0 && alpha <= 2.0, || format!("alpha must be in (0, 2], got {alpha}"))?;
    MellinStrip::new(0.0, alpha)?.check(s.re)?;
    let ln = Complex64::new((PI / alpha).ln(), 0.0) - ln_gamma(1.0 - s)? - ln_sin_pi(s / alpha);
    Ok(ln.exp())
}

/// Multiply by exp(-(omega / cutoff)^{2 sharpness}).
pub fn apply_spectral_window(line: &MellinLine, cutoff: f64, sharpness: u32) -> Result<MellinLine> {
    ensure(cutoff > 0.0, || format!("window cutoff must be positive, got {cutoff}"))?;
    if sharpness == 0 {
        return Err(invalid("window sharpness must be at least 1"));
    }
    let mut out = line.clone();
    for (v, &w) in out.values.iter_mut().zip(&line.omegas) {
        *v *= spectral_window(w, cutoff, sharpness);
    }
    Ok(out)
}

pub fn spectral_window(omega: f64, cutoff: f64, sharpness: u32) -> f64 {
    if cutoff.is_infinite() {
        return 1.0;
    }
    (-(omega / cutoff).powi(2 * sharpness as i32)).exp()
}
