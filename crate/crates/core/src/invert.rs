//! Reconstruction of the initial value from sphere or hyperplane data.
//!
//! Both pipelines rest on the same Mellin identity. With E(rho) =
//! E_alpha(-rho^alpha) the data is a multiplicative convolution of E with an
//! unknown function F, so M(F)(s) = m(s) M(data)(s), where
//!
//! ```text
//! sphere:      m(s) = 2^{n/2} pi^{(n-2)/2} alpha i^{-l} Gamma(1 - s) sin(pi s / alpha)
//! hyperplane:  m(s) = alpha Gamma(1 - s) sin(pi s / alpha)
//! ```
//!
//! on 0 < Re s < alpha. For alpha < 2 the multiplier grows like
//! e^{pi |omega| (1/alpha - 1/2)} along the line, so a spectral window is
//! always applied unless alpha = 2.
//!
//! Sphere modes: F(rho) = H(1/rho) K(1/rho) rho^{-(n+2)/2} with the reduced
//! profile H = i^l (Ff)_lk and K the (directional) Bessel kernel, so
//! H(lambda) = F(1/lambda) / (K(lambda) lambda^{(n+2)/2}). Near zeros of K the
//! division is refused and the point flagged.
//!
//! Hyperplane: Ff(eta*, eta_n) = F_{eta*}(1/|eta|) eta_n / |eta|^2, which is
//! uninformative near eta_n = 0. That band is flagged and, outside strict
//! mode, filled by a fit in eta_n^2 from its neighbours.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::{centered_dft, centered_nodes, dual_spacing};
use crate::error::{ensure, invalid, Error, Result};
use crate::forward::{product_nodes, DetectorGrid, DetectorSeries, Geometry, Phantom, TimeGrid};
use crate::harmonics::{analyze_columns, eval_all, indices, radial_bessel_factor, HarmonicIndex, HarmonicSeries};
use crate::mellin::{
    apply_spectral_window, mellin_forward, mellin_inverse, spectral_window, LogGridFunction, MellinLine, MellinStrip,
    Tails,
};
use crate::quadrature::GaussLegendre;
use crate::specfun::{bessel_j_orders, ln_gamma, ln_sin_pi};

/// ln of the window depth at the end of the sampled line: e^{-37} ~ 1e-16.
const WINDOW_DEPTH: f64 = 37.0;


fn check_alpha(alpha: f64) -> Result<()> {
    ensure(alpha > 1.0 && alpha <= 2.0, || format!("alpha must be in (1, 2], got {alpha}"))
}

fn check_pole(s: Complex64) -> Result<()> {
    // Gamma(1 - s) has poles at s = 1, 2, ...
    if s.im == 0.0 && s.re >= 1.0 && s.re.fract() == 0.0 {
        return Err(Error::Pole(1.0 - s));
    }
    Ok(())
}

/// alpha Gamma(1 - s) sin(pi s / alpha), with strip and pole checks.
pub fn hyperplane_multiplier(alpha: f64, s: Complex64) -> Result<Complex64> {
    check_alpha(alpha)?;
    MellinStrip::new(0.0, alpha)?.check(s.re)?;
    check_pole(s)?;
    Ok((Complex64::new(alpha.ln(), 0.0) + ln_gamma(1.0 - s)? + ln_sin_pi(s / alpha)).exp())
}

/// 2^{n/2} pi^{(n-2)/2} alpha i^{-l} Gamma(1 - s) sin(pi s / alpha).
pub fn spherical_multiplier(alpha: f64, n: usize, l: usize, s: Complex64) -> Result<Complex64> {
    Ok(crate::harmonics::i_pow(-(l as i64)) * spherical_real_multiplier(alpha, n, s)?)
}

/// The spherical multiplier without the i^{-l}, which the reduced profiles absorb.
fn spherical_real_multiplier(alpha: f64, n: usize, s: Complex64) -> Result<Complex64> {
    ensure(n == 2 || n == 3, || format!("dimension must be 2 or 3, got {n}"))?;
    let c = 2f64.powf(n as f64 / 2.0) * PI.powf((n as f64 - 2.0) / 2.0);
    Ok(hyperplane_multiplier(alpha, s)? * c)
}

fn ln_abs_multiplier(alpha: f64, s: Complex64) -> Result<f64> {
    Ok((ln_gamma(1.0 - s)? + ln_sin_pi(s / alpha)).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Largest cutoff whose windowed amplification stays below the bound.
    Auto,
    Fixed(f64),
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization {
    /// Line Re s = gamma; alpha / 2 when unset.
    pub gamma: Option<f64>,
    pub cutoff: Cutoff,
    /// Window exp(-(omega / cutoff)^{2 sharpness}).
    pub sharpness: u32,
    /// Kernel values below this fraction of the local envelope are flagged.
    pub zero_guard: f64,
    /// Bessel envelopes below this are too weak to divide by.
    pub low_envelope: f64,
    /// Bound on the windowed multiplier growth used by [`Cutoff::Auto`].
    pub amplification: f64,
    /// Half-width of the hyperplane eta_n band in units of the line
    /// resolution 1 / cutoff.
    pub band_resolution: f64,
    /// Exclude flagged points instead of bridging them.
    pub strict: bool,
}

impl Default for Regularization {
    fn default() -> Self {
        Self {
            gamma: None,
            cutoff: Cutoff::Auto,
            sharpness: 2,
            zero_guard: 0.05,
            low_envelope: 1e-2,
            amplification: 1e6,
            band_resolution: 5.0,
            strict: false,
        }
    }
}

/// Resolved line parameters shared by every trace of one data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePlan {
    pub gamma: f64,
    pub strip: MellinStrip,
    /// `f64::INFINITY` when no window is applied.
    pub cutoff: f64,
    pub sharpness: u32,
    pub n_freq: usize,
    pub omega_max: f64,
    /// max over the line of the windowed multiplier growth.
    pub peak_amplification: f64,
}

/// Growth of |m| relative to its running minimum from omega = 0, sampled
/// on (k + 1/2) delta.
fn growth_profile(alpha: f64, gamma: f64, omega_end: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let count = 4000;
    let delta = omega_end / count as f64;
    let mut omegas = Vec::with_capacity(count);
    let mut growth = Vec::with_capacity(count);
    let mut run_min = f64::INFINITY;
    for k in 0..count {
        let w = (k as f64 + 0.5) * delta;
        let v = ln_abs_multiplier(alpha, Complex64::new(gamma, w))?;
        run_min = run_min.min(v);
        omegas.push(w);
        growth.push((v - run_min).exp());
    }
    Ok((omegas, growth))
}

fn windowed_peak(omegas: &[f64], growth: &[f64], cutoff: f64, sharpness: u32) -> f64 {
    omegas
        .iter()
        .zip(growth)
        .map(|(&w, &g)| g * spectral_window(w, cutoff, sharpness))
        .fold(0.0, f64::max)
}

/// Largest cutoff with windowed growth at most `bound`; infinite when the
/// unwindowed growth already satisfies it.
pub fn auto_cutoff(alpha: f64, gamma: f64, sharpness: u32, bound: f64, omega_end: f64) -> Result<f64> {
    check_alpha(alpha)?;
    ensure(bound > 1.0, || format!("amplification bound must exceed 1, got {bound}"))?;
    let (omegas, growth) = growth_profile(alpha, gamma, omega_end)?;
    if growth.iter().all(|&g| g <= bound) {
        return Ok(f64::INFINITY);
    }
    let (mut lo, mut hi) = (1e-2f64, 100.0 * omega_end);
    if windowed_peak(&omegas, &growth, lo, sharpness) > bound {
        return Err(Error::IllConditioned(format!(
            "no window cutoff keeps the amplification below {bound:e}"
        )));
    }
    for _ in 0..100 {
        let mid = (lo * hi).sqrt();
        if windowed_peak(&omegas, &growth, mid, sharpness) <= bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Resolve gamma, the cutoff and the line length for data on `time`.
///
/// The line extends to where the window has fallen to e^{-37}, and at most to
/// half the Nyquist frequency of the log-time grid.
pub fn plan_line(alpha: f64, time: &TimeGrid, reg: &Regularization) -> Result<LinePlan> {
    check_alpha(alpha)?;
    ensure(reg.sharpness >= 1, || "window sharpness must be at least 1".into())?;
    ensure(reg.zero_guard >= 0.0 && reg.zero_guard < 1.0, || {
        format!("zero guard must be in [0, 1), got {}", reg.zero_guard)
    })?;
    let strip = MellinStrip::new(0.0, alpha)?;
    let gamma = reg.gamma.unwrap_or(alpha / 2.0);
    strip.check(gamma)?;
    let h = time.step();
    let n = time.count;
    let d = 2.0 * PI / (n as f64 * h);
    let half_nyquist = PI / h / 2.0;
    let cutoff = match reg.cutoff {
        Cutoff::Auto => auto_cutoff(alpha, gamma, reg.sharpness, reg.amplification, half_nyquist)?,
        Cutoff::Fixed(c) => {
            ensure(c > 0.0 && !c.is_nan(), || format!("window cutoff must be positive, got {c}"))?;
            c
        }
        Cutoff::Off => f64::INFINITY,
    };
    let omega_max = if cutoff.is_finite() {
        (cutoff * WINDOW_DEPTH.powf(1.0 / (2.0 * reg.sharpness as f64))).min(half_nyquist)
    } else {
        half_nyquist
    };
    let n_freq = (2 * (omega_max / d).ceil() as usize).max(2);
    ensure(n_freq < n, || format!("time grid too short for {n_freq} line samples"))?;
    let (omegas, growth) = growth_profile(alpha, gamma, half_nyquist)?;
    let keep = omegas.partition_point(|&w| w <= omega_max);
    let peak_amplification = windowed_peak(&omegas[..keep], &growth[..keep], cutoff, reg.sharpness);
    Ok(LinePlan {
        gamma,
        strip,
        cutoff,
        sharpness: reg.sharpness,
        n_freq,
        omega_max,
        peak_amplification,
    })
}

/// Mellin line of a trace (t = 0 first, then the log samples) times `mult`,
/// windowed.
fn recovered_line<M>(trace: &[f64], time: &TimeGrid, alpha: f64, plan: &LinePlan, mult: M) -> Result<MellinLine>
where
    M: FnMut(Complex64) -> Result<Complex64>,
{
    recovered_line_with(trace, time, alpha, plan, Some(alpha), mult)
}

fn recovered_line_with<M>(
    trace: &[f64],
    time: &TimeGrid,
    alpha: f64,
    plan: &LinePlan,
    right: Option<f64>,
    mult: M,
) -> Result<MellinLine>
where
    M: FnMut(Complex64) -> Result<Complex64>,
{
    ensure(trace.len() == time.count + 1, || {
        format!("trace has {} samples, time grid needs {}", trace.len(), time.count + 1)
    })?;
    let f = LogGridFunction::new(time.tau_min, time.tau_max, trace[1..].to_vec())?.with_tails(Tails {
        left: Some(0.0),
        right,
    });
    let mut line = mellin_forward(&f, plan.gamma, plan.strip, plan.n_freq)?.multiply(mult)?;
    if plan.cutoff.is_finite() {
        let r = line.tail_residual;
        line = apply_spectral_window(&line, plan.cutoff, plan.sharpness)?;
        line.tail_residual = r;
    }
    line.alpha = Some(alpha);
    Ok(line)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaFlag {
    Ok,
    /// Within the guard band of a kernel zero.
    KernelZero,
    /// Kernel too small (small lambda, high degree) for a stable division.
    LowSensitivity,
}

/// Recovered reduced profile H = i^l (Ff)_lk of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRecovery {
    pub idx: HarmonicIndex,
    pub lambdas: Vec<f64>,
    /// NaN where flagged.
    pub values: Vec<f64>,
    /// F(1/lambda) before division by the kernel.
    pub intermediate: Vec<f64>,
    pub flags: Vec<LambdaFlag>,
    pub tail_residual: f64,
}

/// Kernel (c1 + c2 l) J_nu - c2 lambda J_{nu+1} and its envelope.
fn kernel_with_envelope(n: usize, l: usize, c1: f64, c2: f64, lambda: f64) -> Result<(f64, f64, f64)> {
    let nu = l as f64 + (n as f64 - 2.0) / 2.0;
    let mut j = [0.0; 2];
    bessel_j_orders(nu, lambda, &mut j)?;
    let a = c1 + c2 * l as f64;
    let b = c2 * lambda;
    let bessel_env = j[0].hypot(j[1]);
    Ok((a * j[0] - b * j[1], a.hypot(b) * bessel_env, bessel_env))
}

fn invert_mode_with_plan(
    trace: &[f64],
    time: &TimeGrid,
    idx: HarmonicIndex,
    alpha: f64,
    (c1, c2): (f64, f64),
    lambdas: &[f64],
    reg: &Regularization,
    plan: &LinePlan,
) -> Result<ModeRecovery> {
    ensure(c1 != 0.0 || c2 != 0.0, || "direction weights (c1, c2) must not both vanish".into())?;
    ensure(lambdas.iter().all(|&l| l > 0.0 && l.is_finite()), || {
        "output wavenumbers must be positive".into()
    })?;
    let n = idx.n;
    let line = recovered_line(trace, time, alpha, plan, |s| spherical_real_multiplier(alpha, n, s))?;
    let mut values = Vec::with_capacity(lambdas.len());
    let mut intermediate = Vec::with_capacity(lambdas.len());
    let mut flags = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let f = mellin_inverse(&line, 1.0 / lam)?;
        let (k, env, bessel_env) = kernel_with_envelope(n, idx.l, c1, c2, lam)?;
        let flag = if bessel_env < reg.low_envelope {
            LambdaFlag::LowSensitivity
        } else if k.abs() < reg.zero_guard * env {
            LambdaFlag::KernelZero
        } else {
            LambdaFlag::Ok
        };
        intermediate.push(f);
        values.push(match flag {
            LambdaFlag::Ok => f / (k * lam.powf((n as f64 + 2.0) / 2.0)),
            _ => f64::NAN,
        });
        flags.push(flag);
    }
    Ok(ModeRecovery {
        idx,
        lambdas: lambdas.to_vec(),
        values,
        intermediate,
        flags,
        tail_residual: line.tail_residual,
    })
}

/// Recover H = i^l (Ff)_lk at `lambdas` from a plain pressure trace
/// (t = 0 first, on `time`).
pub fn invert_spherical_mode(
    trace: &[f64],
    time: &TimeGrid,
    idx: HarmonicIndex,
    alpha: f64,
    lambdas: &[f64],
    reg: &Regularization,
) -> Result<ModeRecovery> {
    invert_directional_mode(trace, time, idx, alpha, 1.0, 0.0, lambdas, reg)
}

/// As [`invert_spherical_mode`] for data c1 p + c2 dp/dr.
#[allow(clippy::too_many_arguments)]
pub fn invert_directional_mode(
    trace: &[f64],
    time: &TimeGrid,
    idx: HarmonicIndex,
    alpha: f64,
    c1: f64,
    c2: f64,
    lambdas: &[f64],
    reg: &Regularization,
) -> Result<ModeRecovery> {
    let plan = plan_line(alpha, time, reg)?;
    invert_mode_with_plan(trace, time, idx, alpha, (c1, c2), lambdas, reg, &plan)
}

/// Flat-top taper exp(-(t/T)^8) with T = t_max / 2. It only matters at
/// alpha = 2, where the trace does not decay: the recovered spectrum is then
/// smoothed along |eta| by a kernel of width about 1/T whose low moments
/// vanish.
fn classical_taper(time: &TimeGrid) -> impl Fn(f64) -> f64 {
    let scale = 2.0 / time.tau_max.exp();
    move |t: f64| (-(t * scale).powi(8)).exp()
}

/// Distance in |eta| past the edge |eta| = |eta*| within which the tapered
/// alpha = 2 line is unreliable, in units of 1/T. Measured: beyond it the
/// smoothed edge singularity leaves errors below 1e-5.
const CLASSICAL_EDGE: f64 = 45.0;

/// Highest |eta| whose oscillation the tapered trace resolves at half the
/// log-grid Nyquist rate (the taper is negligible past 1.6 T).
pub fn classical_plane_bandwidth(time: &TimeGrid) -> f64 {
    let support = 0.8 * time.tau_max.exp();
    PI / time.step() / 2.0 / support
}

/// Plan for hyperplane lines. At alpha = 2 the default line Re s = 1 runs
/// through the pole of Gamma(1 - s). The tapered trace has no right tail, and
/// at eta* = 0 the recovered F decays only like 1/rho, so its periodic images
/// shrink like e^{-(1 - gamma) L}: the line moves to Re s = 1/4.
fn plane_plan(alpha: f64, time: &TimeGrid, reg: &Regularization) -> Result<LinePlan> {
    let gamma = reg.gamma.or(if alpha == 2.0 { Some(0.25) } else { None });
    plan_line(alpha, time, &Regularization { gamma, ..*reg })
}

fn hyperplane_line(trace: &[f64], time: &TimeGrid, alpha: f64, plan: &LinePlan) -> Result<MellinLine> {
    let mult = |s| hyperplane_multiplier(alpha, s);
    if alpha == 2.0 {
        let w = classical_taper(time);
        let tapered: Vec<f64> = trace.iter().zip(time.times()).map(|(v, t)| v * w(t)).collect();
        recovered_line_with(&tapered, time, alpha, plan, None, mult)
    } else {
        recovered_line(trace, time, alpha, plan, mult)
    }
}

fn split(trace: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    (trace.iter().map(|v| v.re).collect(), trace.iter().map(|v| v.im).collect())
}

fn slice_values(re: &MellinLine, im: &MellinLine, eta_star: &[f64], eta_n: &[f64]) -> Result<Vec<Complex64>> {
    let e2: f64 = eta_star.iter().map(|v| v * v).sum();
    eta_n
        .iter()
        .map(|&en| {
            let q = e2 + en * en;
            let x = 1.0 / q.sqrt();
            Ok(Complex64::new(mellin_inverse(re, x)?, mellin_inverse(im, x)?) * (en / q))
        })
        .collect()
}

/// Recover Ff(eta*, eta_n) for eta_n > 0 from the Fourier-transformed
/// hyperplane trace at eta* (t = 0 first).
pub fn invert_hyperplane_freq(
    trace: &[Complex64],
    time: &TimeGrid,
    eta_star: &[f64],
    alpha: f64,
    eta_n: &[f64],
    reg: &Regularization,
) -> Result<Vec<Complex64>> {
    ensure(eta_n.iter().all(|&v| v > 0.0 && v.is_finite()), || {
        "eta_n must be positive: the factor eta_n / |eta|^2 gives no information at eta_n = 0".into()
    })?;
    let plan = plane_plan(alpha, time, reg)?;
    let (re, im) = split(trace);
    let re = hyperplane_line(&re, time, alpha, &plan)?;
    let im = hyperplane_line(&im, time, alpha, &plan)?;
    slice_values(&re, &im, eta_star, eta_n)
}

/// Relative L2 and max errors against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub rel_l2: f64,
    pub max_abs: f64,
    /// max_abs / max |reference|.
    pub rel_max: f64,
}

impl ErrorSummary {
    pub fn between(values: &[f64], reference: &[f64]) -> Self {
        let mut e2 = 0.0;
        let mut r2 = 0.0;
        let mut max_abs = 0.0f64;
        let mut max_ref = 0.0f64;
        for (v, r) in values.iter().zip(reference) {
            e2 += (v - r).powi(2);
            r2 += r * r;
            max_abs = max_abs.max((v - r).abs());
            max_ref = max_ref.max(r.abs());
        }
        let rel = |num: f64, den: f64| if den > 0.0 { num / den } else { num };
        Self {
            rel_l2: rel(e2.sqrt(), r2.sqrt()),
            max_abs,
            rel_max: rel(max_abs, max_ref),
        }
    }
}

/// Reconstruction on a uniform product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconGrid {
    pub n: usize,
    /// Shared coordinate axis, row-major with the last coordinate fastest.
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
    pub truth: Option<Vec<f64>>,
}

impl ReconGrid {
    /// `count` points per axis on [-extent, extent].
    pub fn cube(n: usize, extent: f64, count: usize) -> Result<Self> {
        ensure(extent > 0.0 && extent.is_finite(), || "grid extent must be positive".into())?;
        ensure(count >= 2, || "grid needs at least two points per axis".into())?;
        let axis = (0..count)
            .map(|j| -extent + 2.0 * extent * j as f64 / (count as f64 - 1.0))
            .collect();
        Ok(Self::with_axis(n, axis))
    }

    pub fn with_axis(n: usize, axis: Vec<f64>) -> Self {
        let len = axis.len().pow(n as u32);
        Self {
            n,
            axis,
            values: vec![0.0; len],
            truth: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        product_nodes(&self.axis, self.n)
    }

    pub fn set_truth<F: Fn(&[f64]) -> Result<f64>>(&mut self, f: F) -> Result<()> {
        self.truth = Some(self.points().iter().map(|x| f(x)).collect::<Result<_>>()?);
        Ok(())
    }

    pub fn error_summary(&self) -> Option<ErrorSummary> {
        self.truth.as_ref().map(|t| ErrorSummary::between(&self.values, t))
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::IllConditioned("reconstruction contains non-finite values".into()))
        }
    }

    /// Coordinates, value, and truth and error columns when truth is known.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# n={}", self.n);
        let _ = writeln!(s, "# axis_count={}", self.axis.len());
        let mut header: Vec<String> = (0..self.n).map(|i| format!("x{i}")).collect();
        header.push("value".into());
        if self.truth.is_some() {
            header.push("truth".into());
            header.push("error".into());
        }
        s.push_str(&header.join(","));
        s.push('\n');
        for (j, x) in self.points().iter().enumerate() {
            for c in x {
                let _ = write!(s, "{c:.16e},");
            }
            let _ = write!(s, "{:.16e}", self.values[j]);
            if let Some(t) = &self.truth {
                let _ = write!(s, ",{:.16e},{:.16e}", t[j], self.values[j] - t[j]);
            }
            s.push('\n');
        }
        s
    }

    /// Heat maps of the reconstruction (and truth and error when known); for
    /// n = 3 the slice nearest x_3 = 0.
    pub fn to_svg(&self, title: &str) -> String {
        let m = self.axis.len();
        let mid = self
            .axis
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(j, _)| j)
            .unwrap_or(0);
        let slice = |v: &[f64]| -> Vec<f64> {
            if self.n == 2 {
                v.to_vec()
            } else {
                (0..m * m).map(|ij| v[ij * m + mid]).collect()
            }
        };
        let mut panels = vec![("reconstruction", slice(&self.values))];
        if let Some(t) = &self.truth {
            panels.push(("truth", slice(t)));
            let e: Vec<f64> = self.values.iter().zip(t).map(|(a, b)| a - b).collect();
            panels.push(("error", slice(&e)));
        }
        let scale = panels
            .iter()
            .take(2)
            .flat_map(|p| p.1.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let cell = (300.0 / m as f64).max(1.0);
        let side = cell * m as f64;
        let width = panels.len() as f64 * (side + 20.0) + 20.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{:.0}\">",
            side + 60.0
        );
        let _ = writeln!(s, "<!-- fracwave {} -->", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "<text x=\"20\" y=\"18\" font-size=\"14\">{}</text>", xml_escape(title));
        for (p, (name, v)) in panels.iter().enumerate() {
            let x0 = 20.0 + p as f64 * (side + 20.0);
            let _ = writeln!(s, "<text x=\"{x0:.1}\" y=\"36\" font-size=\"12\">{name}</text>");
            for i in 0..m {
                for j in 0..m {
                    // first coordinate to the right, second upwards
                    let val = v[i * m + j] / scale;
                    let _ = writeln!(
                        s,
                        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                        x0 + i as f64 * cell,
                        44.0 + (m - 1 - j) as f64 * cell,
                        cell + 0.05,
                        cell + 0.05,
                        diverging(val)
                    );
                }
            }
        }
        let _ = writeln!(
            s,
            "<text x=\"20\" y=\"{:.0}\" font-size=\"11\">colour scale +-{scale:.3e}</text>",
            side + 58.0
        );
        s.push_str("</svg>\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Blue-white-red for v in [-1, 1].
fn diverging(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v >= 0.0 {
        (1.0, 1.0 - v, 1.0 - v)
    } else {
        (1.0 + v, 1.0 + v, 1.0)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        (r * 255.0).round() as u8,
        (g * 255.0).round() as u8,
        (b * 255.0).round() as u8
    )
}

/// Least-squares polynomial in x of degree `deg`, coefficients low first.
fn polyfit(x: &[f64], y: &[f64], deg: usize) -> Result<Vec<f64>> {
    let m = deg + 1;
    ensure(x.len() >= m, || format!("need at least {m} points for a degree {deg} fit"))?;
    // scale x to [-1, 1] for conditioning
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (c, w) = ((hi + lo) / 2.0, ((hi - lo) / 2.0).max(f64::MIN_POSITIVE));
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&xi, &yi) in x.iter().zip(y) {
        let u = (xi - c) / w;
        let pw: Vec<f64> = (0..m).map(|k| u.powi(k as i32)).collect();
        for r in 0..m {
            for k in 0..m {
                a[r][k] += pw[r] * pw[k];
            }
            a[r][m] += pw[r] * yi;
        }
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).unwrap();
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return Err(Error::IllConditioned("singular least-squares fit".into()));
        }
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=m {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    let scaled: Vec<f64> = (0..m).map(|r| a[r][m] / a[r][r]).collect();
    // expand sum_k b_k ((x - c)/w)^k into powers of x
    let mut coef = vec![0.0; m];
    let mut binom = vec![vec![0.0; m]; m];
    for k in 0..m {
        binom[k][0] = 1.0;
        for j in 1..=k {
            binom[k][j] = binom[k - 1][j - 1] + if j < k { binom[k - 1][j] } else { 0.0 };
        }
    }
    for (k, &b) in scaled.iter().enumerate() {
        let bk = b / w.powi(k as i32);
        for j in 0..=k {
            coef[j] += bk * binom[k][j] * (-c).powi((k - j) as i32);
        }
    }
    Ok(coef)
}

fn polyval(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Monotone cubic (Fritsch-Carlson) interpolant through (x, y).
struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let m = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..m.saturating_sub(1)).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; m];
        if m == 2 {
            d = vec![delta[0]; 2];
        } else if m > 2 {
            for k in 1..m - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
                let v = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
                if v * d0 <= 0.0 {
                    0.0
                } else if d0 * d1 <= 0.0 && v.abs() > 3.0 * d0.abs() {
                    3.0 * d0
                } else {
                    v
                }
            };
            d[0] = end(h[0], h[1], delta[0], delta[1]);
            d[m - 1] = end(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
        }
        Self { x, y, d }
    }

    fn eval(&self, t: f64) -> f64 {
        let m = self.x.len();
        let k = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            p => (p - 1).min(m - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s).powi(2),
            s * (1.0 - s).powi(2),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }
}

/// Quadrature representation of one mode's profile on [0, lambda_max].
struct DenseProfile {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    interior_gaps: usize,
}

/// Fill a sampled profile (NaN = flagged): below the first good sample by
/// lambda^l times a quadratic in lambda^2, interior gaps by a monotone
/// cubic, trailing gaps by zero. Strict mode zeroes every flagged sample.
fn dense_profile(l: usize, lambdas: &[f64], values: &[f64], strict: bool) -> Result<DenseProfile> {
    let good: Vec<usize> = (0..values.len()).filter(|&j| values[j].is_finite()).collect();
    let m = lambdas.len();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut out = Vec::new();
    let (first, last) = match (good.first(), good.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (m, 0),
    };
    let interior_gaps = if first <= last {
        (first..=last).filter(|&j| !values[j].is_finite()).count()
    } else {
        0
    };
    // head [0, lambdas[0]] and the leading gap are covered by the fit
    let head: Option<Vec<f64>> = if strict {
        None
    } else {
        let sel: Vec<usize> = good.iter().copied().take(16).collect();
        if sel.len() < 3 {
            None
        } else {
            let q: Vec<f64> = sel.iter().map(|&j| lambdas[j] * lambdas[j]).collect();
            let g: Vec<f64> = sel.iter().map(|&j| values[j] / lambdas[j].powi(l as i32)).collect();
            Some(polyfit(&q, &g, 2)?)
        }
    };
    // every profile carries the head nodes so that all modes share one rule
    let gl = GaussLegendre::new(24)?;
    let b = lambdas[0];
    for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
        let lam = 0.5 * b * (x + 1.0);
        nodes.push(lam);
        weights.push(0.5 * b * w);
        out.push(match &head {
            Some(c) => lam.powi(l as i32) * polyval(c, lam * lam),
            None => 0.0,
        });
    }
    let pchip = if !strict && good.len() >= 2 {
        Some(Pchip::new(
            good.iter().map(|&j| lambdas[j]).collect(),
            good.iter().map(|&j| values[j]).collect(),
        ))
    } else {
        None
    };
    for j in 0..m {
        let w = match (j, m) {
            (_, 1) => 0.0,
            (0, _) => 0.5 * (lambdas[1] - lambdas[0]),
            (j, m) if j == m - 1 => 0.5 * (lambdas[m - 1] - lambdas[m - 2]),
            (j, _) => 0.5 * (lambdas[j + 1] - lambdas[j - 1]),
        };
        let v = if values[j].is_finite() {
            values[j]
        } else if strict || j > last {
            0.0
        } else if j < first {
            match &head {
                Some(c) => lambdas[j].powi(l as i32) * polyval(c, lambdas[j] * lambdas[j]),
                None => 0.0,
            }
        } else {
            pchip.as_ref().map(|p| p.eval(lambdas[j])).unwrap_or(0.0)
        };
        nodes.push(lambdas[j]);
        weights.push(w);
        out.push(v);
    }
    Ok(DenseProfile {
        nodes,
        weights,
        values: out,
        interior_gaps,
    })
}

/// Radial Hankel synthesis of reduced profiles:
/// f(r theta) = sum_lk (2 pi)^{-n/2} r^{(2-n)/2} int H_lk J_nu(lambda r) lambda^{n/2} d lambda Y_lk(theta),
/// tabulated on a radial grid and interpolated.
pub struct HankelSynthesis {
    n: usize,
    max_degree: usize,
    dr: f64,
    radial: Vec<Vec<f64>>,
    /// Fraction of samples inside bridged (or, in strict mode, zeroed) gaps.
    pub gap_fraction: f64,
}

/// Bridged gaps above this fraction are refused.
pub const MAX_GAP_FRACTION: f64 = 0.25;

impl HankelSynthesis {
    /// `profiles` holds H on its grid (increasing, positive); NaN marks flags.
    pub fn new(profiles: &HarmonicSeries, r_max: f64, radial_count: usize, strict: bool) -> Result<Self> {
        let lambdas = profiles
            .grid
            .as_ref()
            .ok_or_else(|| invalid("profile series needs a wavenumber grid"))?;
        ensure(lambdas.len() >= 2 && lambdas.windows(2).all(|w| w[1] > w[0]) && lambdas[0] > 0.0, || {
            "wavenumber grid must be positive and increasing".into()
        })?;
        ensure(r_max > 0.0 && radial_count >= 4, || "radial table needs r_max > 0 and 4+ points".into())?;
        let n = profiles.n;
        let idxs = profiles.indices();
        let dense = idxs
            .iter()
            .zip(&profiles.values)
            .map(|(idx, v)| dense_profile(idx.l, lambdas, v, strict))
            .collect::<Result<Vec<_>>>()?;
        let gaps: usize = dense.iter().map(|d| d.interior_gaps).sum();
        let gap_fraction = gaps as f64 / (idxs.len() * lambdas.len()) as f64;
        if gap_fraction > MAX_GAP_FRACTION {
            return Err(Error::IllConditioned(format!(
                "{:.1}% of the profile samples are flagged (limit {:.0}%)",
                100.0 * gap_fraction,
                100.0 * MAX_GAP_FRACTION
            )));
        }
        let active: Vec<usize> = (0..idxs.len())
            .filter(|&m| dense[m].values.iter().any(|v| *v != 0.0))
            .collect();
        let c = (2.0 * PI).powf(-(n as f64) / 2.0);
        let dr = r_max / radial_count as f64;
        let max_degree = profiles.max_degree;
        let nu0 = (n as f64 - 2.0) / 2.0;
        let rows: Vec<Vec<f64>> = (0..=radial_count)
            .into_par_iter()
            .map(|j| {
                let r = j as f64 * dr;
                let mut acc = vec![0.0; active.len()];
                let mut jv = vec![0.0; max_degree + 1];
                let shared = &dense[active.first().copied().unwrap_or(0)];
                for q in 0..shared.nodes.len() {
                    let lam = shared.nodes[q];
                    let x = lam * r;
                    if x < 1e-8 {
                        for (l, v) in jv.iter_mut().enumerate() {
                            *v = radial_bessel_factor(n, l, x)?;
                        }
                    } else {
                        bessel_j_orders(nu0, x, &mut jv)?;
                        let scale = x.powf(-nu0);
                        for v in jv.iter_mut() {
                            *v *= scale;
                        }
                    }
                    let base = shared.weights[q] * lam.powi(n as i32 - 1);
                    for (a, &m) in acc.iter_mut().zip(&active) {
                        *a += base * dense[m].values[q] * jv[idxs[m].l];
                    }
                }
                Ok(acc.into_iter().map(|v| c * v).collect())
            })
            .collect::<Result<_>>()?;
        let mut radial = vec![Vec::new(); idxs.len()];
        for (k, &m) in active.iter().enumerate() {
            radial[m] = rows.iter().map(|row| row[k]).collect();
        }
        Ok(Self {
            n,
            max_degree,
            dr,
            radial,
            gap_fraction,
        })
    }

    /// f_lk(r) by cubic interpolation in the table.
    pub fn radial(&self, idx: HarmonicIndex, r: f64) -> Result<f64> {
        let tab = &self.radial[idx.position()];
        if tab.is_empty() {
            return Ok(0.0);
        }
        let last = tab.len() - 1;
        ensure(r >= 0.0 && r <= last as f64 * self.dr * (1.0 + 1e-12), || {
            format!("radius {r} outside the synthesis table")
        })?;
        let u = r / self.dr;
        let k = (u.floor() as usize).clamp(1, last - 2);
        let s = u - k as f64;
        let (p0, p1, p2, p3) = (tab[k - 1], tab[k], tab[k + 1], tab[k + 2]);
        Ok(-s * (s - 1.0) * (s - 2.0) / 6.0 * p0 + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * p1
            - (s + 1.0) * s * (s - 2.0) / 2.0 * p2
            + (s + 1.0) * s * (s - 1.0) / 6.0 * p3)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        ensure(x.len() == self.n, || format!("point must have {} coordinates", self.n))?;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let theta: Vec<f64> = if r > 0.0 {
            x.iter().map(|v| v / r).collect()
        } else {
            let mut e = vec![0.0; self.n];
            e[self.n - 1] = 1.0;
            e
        };
        let y = eval_all(self.n, self.max_degree, &theta)?;
        let mut s = 0.0;
        for (idx, yv) in indices(self.n, self.max_degree).into_iter().zip(y) {
            if !self.radial[idx.position()].is_empty() {
                s += self.radial(idx, r)? * yv;
            }
        }
        Ok(s)
    }
}

/// One-point Hankel synthesis; see [`HankelSynthesis`] for repeated use.
pub fn hankel_synthesis(profiles: &HarmonicSeries, r: f64, theta: &[f64], strict: bool) -> Result<f64> {
    ensure(r >= 0.0, || format!("radius must be non-negative, got {r}"))?;
    let table = HankelSynthesis::new(profiles, (2.0 * r).max(1e-3), 8, strict)?;
    let x: Vec<f64> = theta.iter().map(|v| v * r).collect();
    let norm: f64 = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
    ensure((norm - 1.0).abs() < 1e-10, || "direction must be a unit vector".into())?;
    table.eval(&x)
}

/// Per-stage diagnostics of one reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionReport {
    pub geometry: Geometry,
    pub n: usize,
    pub alpha: f64,
    pub plan: LinePlan,
    pub strict: bool,
    /// Sphere: bridged kernel-zero gaps. Hyperplane: the eta_n band.
    pub gap_fraction: f64,
    pub tail_residual: f64,
    /// Profile or spectrum error against truth, flagged points excluded.
    pub profile_error: Option<f64>,
    pub field_error: Option<ErrorSummary>,
    pub notes: Vec<String>,
}

impl InversionReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let geo = match self.geometry {
            Geometry::Sphere => "sphere",
            Geometry::Hyperplane => "hyperplane",
        };
        let _ = writeln!(s, "geometry            {geo}");
        let _ = writeln!(s, "dimension           {}", self.n);
        let _ = writeln!(s, "alpha               {}", self.alpha);
        let _ = writeln!(s, "strip               ({}, {})", self.plan.strip.a, self.plan.strip.b);
        let _ = writeln!(s, "gamma               {}", self.plan.gamma);
        if self.plan.cutoff.is_finite() {
            let _ = writeln!(s, "window cutoff       {:.6}", self.plan.cutoff);
        } else {
            let _ = writeln!(s, "window cutoff       off");
        }
        let _ = writeln!(s, "window sharpness    {}", self.plan.sharpness);
        let _ = writeln!(s, "line samples        {}", self.plan.n_freq);
        let _ = writeln!(s, "line extent         {:.6}", self.plan.omega_max);
        let _ = writeln!(s, "peak amplification  {:.3e}", self.plan.peak_amplification);
        let _ = writeln!(s, "tail residual       {:.3e}", self.tail_residual);
        let what = match self.geometry {
            Geometry::Sphere => "bessel gap fraction",
            Geometry::Hyperplane => "eta_n band fraction",
        };
        let _ = writeln!(s, "{what:<20}{:.4}", self.gap_fraction);
        let _ = writeln!(s, "strict              {}", self.strict);
        if let Some(e) = self.profile_error {
            let label = match self.geometry {
                Geometry::Sphere => "profile rel l2",
                Geometry::Hyperplane => "spectrum rel l2",
            };
            let _ = writeln!(s, "{label:<20}{e:.6e}");
        }
        if let Some(e) = self.field_error {
            let _ = writeln!(s, "field rel l2        {:.6e}", e.rel_l2);
            let _ = writeln!(s, "field max abs       {:.6e}", e.max_abs);
            let _ = writeln!(s, "field rel max       {:.6e}", e.rel_max);
        }
        for note in &self.notes {
            let _ = writeln!(s, "note                {note}");
        }
        s
    }
}

/// Wavenumber sampling and output grid of the sphere pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereOptions {
    pub max_degree: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    /// Output cube [-extent, extent]^n.
    pub extent: f64,
    pub count: usize,
    pub radial_count: usize,
}

impl Default for SphereOptions {
    fn default() -> Self {
        Self {
            max_degree: 6,
            lambda_min: 0.5,
            lambda_max: 24.0,
            lambda_step: 0.02,
            extent: 1.5,
            count: 61,
            radial_count: 1024,
        }
    }
}

impl SphereOptions {
    pub fn lambdas(&self) -> Result<Vec<f64>> {
        ensure(self.lambda_min > 0.0 && self.lambda_max > self.lambda_min, || {
            "need 0 < lambda_min < lambda_max".into()
        })?;
        ensure(self.lambda_step > 0.0, || "lambda_step must be positive".into())?;
        let count = ((self.lambda_max - self.lambda_min) / self.lambda_step).round() as usize + 1;
        ensure(count >= 16, || "wavenumber grid needs at least 16 points".into())?;
        Ok((0..count)
            .map(|j| self.lambda_min + (self.lambda_max - self.lambda_min) * j as f64 / (count as f64 - 1.0))
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct SphereInversion {
    pub recon: ReconGrid,
    /// Reduced profiles on the wavenumber grid; NaN where flagged.
    pub profiles: HarmonicSeries,
    pub report: InversionReport,
}

impl SphereInversion {
    /// Attach the phantom as truth: field error on the grid and the pooled
    /// profile error over unflagged wavenumbers in `lambda_range`.
    pub fn attach_truth(&mut self, p: &Phantom, lambda_range: (f64, f64)) -> Result<()> {
        self.recon.set_truth(|x| p.eval(x))?;
        self.report.field_error = self.recon.error_summary();
        self.report.profile_error = Some(profile_error(&self.profiles, p, lambda_range)?);
        Ok(())
    }
}

/// Pooled relative L2 error of recovered profiles against a phantom over
/// unflagged samples with lambda in `range`.
pub fn profile_error(profiles: &HarmonicSeries, p: &Phantom, range: (f64, f64)) -> Result<f64> {
    let lambdas = profiles.grid.as_ref().ok_or_else(|| invalid("profile series needs a grid"))?;
    let (mut e2, mut t2) = (0.0, 0.0);
    for (idx, v) in profiles.indices().into_iter().zip(&profiles.values) {
        for (&lam, &h) in lambdas.iter().zip(v) {
            if lam >= range.0 && lam <= range.1 && h.is_finite() {
                let t = p.reduced_profile(idx, lam)?;
                e2 += (h - t).powi(2);
                t2 += t * t;
            }
        }
    }
    Ok(if t2 > 0.0 { (e2 / t2).sqrt() } else { e2.sqrt() })
}

/// Full sphere pipeline using the direction weights recorded in the data.
pub fn invert_spherical(data: &DetectorSeries, opts: &SphereOptions, reg: &Regularization) -> Result<SphereInversion> {
    invert_directional(data, data.weights.0, data.weights.1, opts, reg)
}

/// Sphere pipeline for data c1 p + c2 dp/dr: harmonic analysis per time
/// slice, mode-wise inversion, Hankel synthesis on the output cube.
pub fn invert_directional(
    data: &DetectorSeries,
    c1: f64,
    c2: f64,
    opts: &SphereOptions,
    reg: &Regularization,
) -> Result<SphereInversion> {
    let grid = match &data.grid {
        DetectorGrid::Sphere(g) => g,
        DetectorGrid::Plane(_) => return Err(invalid("sphere inversion needs sphere data")),
    };
    let n = data.n;
    let lmax = opts.max_degree;
    let plan = plan_line(data.alpha, &data.time, reg)?;
    let lambdas = opts.lambdas()?;
    let traces = analyze_columns(grid, &data.values, lmax)?;
    let idxs = traces.indices();
    let recovered: Vec<ModeRecovery> = idxs
        .par_iter()
        .zip(&traces.values)
        .map(|(&idx, tr)| invert_mode_with_plan(tr, &data.time, idx, data.alpha, (c1, c2), &lambdas, reg, &plan))
        .collect::<Result<_>>()?;
    let mut profiles = HarmonicSeries::zeros(n, lmax, Some(lambdas.clone()));
    let mut tail_residual = 0.0f64;
    for r in &recovered {
        *profiles.get_mut(r.idx) = r.values.clone();
        tail_residual = tail_residual.max(r.tail_residual);
    }
    let r_max = opts.extent * (n as f64).sqrt() * (1.0 + 1e-9);
    let synth = HankelSynthesis::new(&profiles, r_max, opts.radial_count, reg.strict)?;
    let mut recon = ReconGrid::cube(n, opts.extent, opts.count)?;
    recon.values = recon
        .points()
        .par_iter()
        .map(|x| synth.eval(x))
        .collect::<Result<_>>()?;
    recon.check_finite()?;
    let mut notes = Vec::new();
    if reg.strict {
        notes.push("flagged wavenumbers excluded (zeroed), not bridged".into());
    } else {
        notes.push("kernel-zero gaps bridged by monotone cubic interpolation".into());
    }
    let report = InversionReport {
        geometry: Geometry::Sphere,
        n,
        alpha: data.alpha,
        plan,
        strict: reg.strict,
        gap_fraction: synth.gap_fraction,
        tail_residual,
        profile_error: None,
        field_error: None,
        notes,
    };
    Ok(SphereInversion {
        recon,
        profiles,
        report,
    })
}

#[derive(Debug, Clone)]
pub struct HyperplaneInversion {
    /// Grid of the plane data extended by the same axis along x_n.
    pub recon: ReconGrid,
    pub eta_star: Vec<Vec<f64>>,
    /// eta_n = k d_eta for k = 0..=count/2.
    pub eta_n: Vec<f64>,
    /// Recovered Ff(eta*, eta_n), band filled unless strict.
    pub spectrum: Vec<Vec<Complex64>>,
    pub band: Vec<Vec<bool>>,
    pub report: InversionReport,
}

impl HyperplaneInversion {
    /// Attach the phantom (symmetrized in x_n if needed) as truth.
    pub fn attach_truth(&mut self, p: &Phantom) -> Result<()> {
        let p = if p.is_even_in_last() { p.clone() } else { p.symmetrized() };
        self.recon.set_truth(|x| p.eval(x))?;
        self.report.field_error = self.recon.error_summary();
        self.report.profile_error = Some(self.spectrum_error(&p)?);
        Ok(())
    }

    /// Relative L2 error of the recovered spectrum outside the band.
    pub fn spectrum_error(&self, p: &Phantom) -> Result<f64> {
        let (mut e2, mut t2) = (0.0, 0.0);
        for ((es, row), band) in self.eta_star.iter().zip(&self.spectrum).zip(&self.band) {
            for ((&en, v), &b) in self.eta_n.iter().zip(row).zip(band) {
                if b {
                    continue;
                }
                let mut xi = es.clone();
                xi.push(en);
                let t = p.fourier(&xi)?;
                e2 += (v - t).norm_sqr();
                t2 += t.norm_sqr();
            }
        }
        Ok(if t2 > 0.0 { (e2 / t2).sqrt() } else { e2.sqrt() })
    }
}

/// Band half-width factor kappa: |eta_n| <= kappa |eta*| is uninformative
/// when the factor eta_n / |eta| changes by more than the line resolution.
fn band_slope(cutoff: f64, resolution: f64) -> f64 {
    if cutoff.is_finite() {
        ((2.0 * resolution / cutoff).exp() - 1.0).sqrt()
    } else {
        0.0
    }
}

/// Relative level below which recovered spectrum values are treated as
/// amplified roundoff when choosing the band fill.
const NOISE_FLOOR: f64 = 1e-7;

/// Fill flagged entries of one real sequence from the first good samples
/// after the band: log-linear in q = eta_n^2 when they share a sign and
/// exceed `floor`, quadratic in q otherwise.
fn fill_band(eta_n: &[f64], v: &mut [f64], band: &[bool], d: f64, floor: f64) -> Result<()> {
    let good: Vec<usize> = (0..v.len()).filter(|&k| !band[k]).collect();
    let Some(&g0) = good.first() else {
        return Err(Error::IllConditioned("eta_n band covers the whole slice".into()));
    };
    let limit = 2.0 * eta_n[g0] + 4.0 * d;
    let sel: Vec<usize> = good.iter().copied().filter(|&k| eta_n[k] <= limit).take(6).collect();
    if sel.len() < 3 {
        return Err(Error::IllConditioned("too few samples next to the eta_n band".into()));
    }
    let q: Vec<f64> = sel.iter().map(|&k| eta_n[k] * eta_n[k]).collect();
    let y: Vec<f64> = sel.iter().map(|&k| v[k]).collect();
    let significant = y.iter().all(|x| x.abs() > floor);
    let sign = if !significant {
        0.0
    } else if y.iter().all(|&x| x > 0.0) {
        1.0
    } else if y.iter().all(|&x| x < 0.0) {
        -1.0
    } else {
        0.0
    };
    let fill: Box<dyn Fn(f64) -> f64> = if sign != 0.0 {
        let ly: Vec<f64> = y.iter().map(|x| (sign * x).ln()).collect();
        let c = polyfit(&q, &ly, 1)?;
        Box::new(move |qq| sign * polyval(&c, qq).exp())
    } else {
        let c = polyfit(&q, &y, 2)?;
        Box::new(move |qq| polyval(&c, qq))
    };
    for k in 0..v.len() {
        if band[k] {
            v[k] = fill(eta_n[k] * eta_n[k]);
        }
    }
    Ok(())
}

/// Full hyperplane pipeline: DFT along the plane, per-frequency Mellin
/// inversion, even extension in eta_n and an n-dimensional inverse DFT.
pub fn invert_hyperplane(data: &DetectorSeries, reg: &Regularization) -> Result<HyperplaneInversion> {
    let plane = match &data.grid {
        DetectorGrid::Plane(g) => *g,
        DetectorGrid::Sphere(_) => return Err(invalid("hyperplane inversion needs hyperplane data")),
    };
    let n = data.n;
    let alpha = data.alpha;
    let time = &data.time;
    let plan = plane_plan(alpha, time, reg)?;
    if alpha == 2.0 {
        let b = classical_plane_bandwidth(time);
        ensure(b >= PI / plane.spacing, || {
            format!("time grid resolves |eta| <= {b:.3} only; alpha = 2 plane data needs {:.3}", PI / plane.spacing)
        })?;
    }
    let count = plane.count;
    let d_eta = dual_spacing(count, plane.spacing);
    let per = time.count + 1;

    // step 1: Fourier transform along the plane for every time
    let dims = plane.dims();
    let mut spectra = vec![vec![Complex64::new(0.0, 0.0); per]; plane.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); plane.len()];
    for j in 0..per {
        for (b, row) in buf.iter_mut().zip(&data.values) {
            *b = Complex64::new(row[j], 0.0);
        }
        centered_dft(&mut buf, &dims, plane.spacing, false)?;
        for (s, b) in spectra.iter_mut().zip(&buf) {
            s[j] = *b;
        }
    }

    let eta_star = plane.frequencies();
    let eta_n: Vec<f64> = (0..=count / 2).map(|k| k as f64 * d_eta).collect();
    let kappa = band_slope(plan.cutoff, reg.band_resolution);
    let delta = CLASSICAL_EDGE * 2.0 / time.tau_max.exp();
    let band_limit = |e: f64| -> f64 {
        let edge = if alpha == 2.0 { (2.0 * e * delta + delta * delta).sqrt() } else { kappa * e };
        (2.0 * d_eta).max(edge)
    };
    let rows: Vec<(Vec<Complex64>, Vec<bool>, f64)> = eta_star
        .par_iter()
        .zip(&spectra)
        .map(|(es, tr)| {
            let e = es.iter().map(|v| v * v).sum::<f64>().sqrt();
            let band: Vec<bool> = eta_n.iter().map(|&en| en <= band_limit(e)).collect();
            let (re, im) = split(tr);
            let re = hyperplane_line(&re, time, alpha, &plan)?;
            let im = hyperplane_line(&im, time, alpha, &plan)?;
            let res = re.tail_residual.max(im.tail_residual);
            let outside: Vec<f64> = eta_n.iter().zip(&band).filter(|(_, &b)| !b).map(|(&v, _)| v).collect();
            let vals = slice_values(&re, &im, es, &outside)?;
            let mut row = vec![Complex64::new(0.0, 0.0); eta_n.len()];
            let mut it = vals.into_iter();
            for (r, &b) in row.iter_mut().zip(&band) {
                if !b {
                    *r = it.next().unwrap();
                }
            }
            Ok((row, band, res))
        })
        .collect::<Result<_>>()?;

    // the lines are inverted independently; restore conjugate symmetry in eta*
    let mirror = |s: usize| -> usize {
        let mut idx = 0;
        let mut rem = s;
        let mut stride = 1;
        for _ in 0..plane.dim {
            let j = rem % count;
            rem /= count;
            idx += ((count - j) % count) * stride;
            stride *= count;
        }
        idx
    };
    let mut rows = rows;
    for s in 0..rows.len() {
        let m = mirror(s);
        if m < s {
            continue;
        }
        for k in 0..eta_n.len() {
            let avg = (rows[s].0[k] + rows[m].0[k].conj()) * 0.5;
            rows[s].0[k] = avg;
            rows[m].0[k] = avg.conj();
        }
    }

    // fill the band; log-linear fits are only trusted well above the
    // amplified roundoff of the whole spectrum
    if !reg.strict {
        let peak = rows
            .iter()
            .flat_map(|(row, band, _)| row.iter().zip(band).filter(|(_, &f)| !f).map(|(v, _)| v.norm()))
            .fold(0.0f64, f64::max);
        for (row, band, _) in rows.iter_mut() {
            let mut a: Vec<f64> = row.iter().map(|v| v.re).collect();
            let mut b: Vec<f64> = row.iter().map(|v| v.im).collect();
            fill_band(&eta_n, &mut a, band, d_eta, NOISE_FLOOR * peak)?;
            fill_band(&eta_n, &mut b, band, d_eta, NOISE_FLOOR * peak)?;
            for (r, (x, y)) in row.iter_mut().zip(a.into_iter().zip(b)) {
                *r = Complex64::new(x, y);
            }
        }
    }

    // even extension in eta_n and inverse transform over all n axes
    let mut full = vec![Complex64::new(0.0, 0.0); plane.len() * count];
    for (s, (row, _, _)) in rows.iter().enumerate() {
        for j in 0..count {
            let k = (j as i64 - count as i64 / 2).unsigned_abs() as usize;
            full[s * count + j] = row[k];
        }
    }
    centered_dft(&mut full, &vec![count; n], plane.spacing, true)?;
    let mag = full.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let res = full.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if mag > 0.0 && res > 1e-8 * mag {
        return Err(Error::ImaginaryResidue {
            what: "hyperplane reconstruction",
            residue: res / mag,
            limit: 1e-8,
        });
    }
    let mut recon = ReconGrid::with_axis(n, centered_nodes(count, plane.spacing));
    recon.values = full.iter().map(|v| v.re).collect();
    recon.check_finite()?;

    let band_count: usize = rows.iter().map(|r| r.1.iter().filter(|&&b| b).count()).sum();
    let gap_fraction = band_count as f64 / (rows.len() * eta_n.len()) as f64;
    let tail_residual = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let mut notes = vec![format!(
        "eta_n band |eta_n| <= max(2 d_eta, {kappa:.4} |eta*|), d_eta = {d_eta:.6}"
    )];
    notes.push(if reg.strict {
        "band excluded (zeroed), not filled".into()
    } else {
        "band filled from neighbouring eta_n samples".into()
    });
    let (spectrum, band): (Vec<_>, Vec<_>) = rows.into_iter().map(|(r, b, _)| (r, b)).unzip();
    Ok(HyperplaneInversion {
        recon,
        eta_star,
        eta_n,
        spectrum,
        band,
        report: InversionReport {
            geometry: Geometry::Hyperplane,
            n,
            alpha,
            plan,
            strict: reg.strict,
            gap_fraction,
            tail_residual,
            profile_error: None,
            field_error: None,
            notes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::ml_mellin_closed_form;

    #[test]
    fn multiplier_identities() {
        for &alpha in &[1.25, 1.5, 2.0] {
            for k in 0..20 {
                let s = Complex64::new(alpha * (0.05 + 0.9 * k as f64 / 19.0), -9.0 + k as f64);
                if check_pole(s).is_err() {
                    continue;
                }
                let e = ml_mellin_closed_form(alpha, s).unwrap();
                let h = hyperplane_multiplier(alpha, s).unwrap() * e;
                assert!((h - PI).norm() < 1e-12 * PI, "{h}");
                for (n, l) in [(2, 3), (3, 2)] {
                    let sp = spherical_multiplier(alpha, n, l, s).unwrap() * e;
                    let want = crate::harmonics::i_pow(-(l as i64)) * (2.0 * PI).powf(n as f64 / 2.0);
                    assert!((sp - want).norm() < 1e-12 * want.norm());
                }
            }
        }
    }

    #[test]
    fn multiplier_guards() {
        assert!(matches!(
            hyperplane_multiplier(2.0, Complex64::new(1.0, 0.0)),
            Err(Error::Pole(_))
        ));
        assert!(hyperplane_multiplier(1.5, Complex64::new(1.5, 1.0)).is_err());
        assert!(hyperplane_multiplier(1.5, Complex64::new(0.0, 1.0)).is_err());
        let v = hyperplane_multiplier(1.5, Complex64::new(0.75, 2.0)).unwrap();
        let w = hyperplane_multiplier(1.5, Complex64::new(0.75, -2.0)).unwrap();
        assert!((v - w.conj()).norm() < 1e-14 * v.norm());
    }

    #[test]
    fn auto_cutoff_values() {
        let t = TimeGrid::standard(1.5);
        let p = plan_line(1.5, &t, &Regularization::default()).unwrap();
        assert!(p.cutoff > 20.0 && p.cutoff < 35.0, "{}", p.cutoff);
        assert!(p.peak_amplification <= 1e6 * (1.0 + 1e-9));
        assert!(p.n_freq.is_multiple_of(2));
        let p2 = plan_line(2.0, &TimeGrid::standard(2.0), &Regularization::default()).unwrap();
        assert!(p2.cutoff.is_infinite());
    }

    #[test]
    fn polyfit_recovers_quadratic() {
        let x: Vec<f64> = (0..10).map(|k| 3.0 + 0.1 * k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 - 2.0 * v + 0.5 * v * v).collect();
        let c = polyfit(&x, &y, 2).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-9 && (c[1] + 2.0).abs() < 1e-9 && (c[2] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pchip_is_monotone_and_interpolating() {
        let x = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let y = vec![0.0, 0.1, 2.0, 2.1, 5.0];
        let p = Pchip::new(x.clone(), y.clone());
        for (a, b) in x.iter().zip(&y) {
            assert!((p.eval(*a) - b).abs() < 1e-14);
        }
        let mut prev = -1.0;
        for k in 0..=400 {
            let v = p.eval(k as f64 * 0.01);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn csv_has_truth_columns() {
        let mut g = ReconGrid::cube(2, 1.0, 3).unwrap();
        assert!(g.to_csv().contains("x0,x1,value\n"));
        g.set_truth(|x| Ok(x[0])).unwrap();
        let csv = g.to_csv();
        assert!(csv.contains("x0,x1,value,truth,error\n"));
        assert_eq!(csv.lines().count(), 3 + 9);
        assert!(g.to_svg("t").starts_with("<svg"));
    }
}
