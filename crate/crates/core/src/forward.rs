//! Synthetic detector data from Gaussian phantoms.
//!
//! Everything goes through the spectral solution
//! p(x, t) = (2 pi)^{-n} int E_alpha(-t^alpha |xi|^alpha) e^{i xi.x} Ff(xi) dxi.
//!
//! Harmonic profiles are stored in reduced form H_lk = i^l (Ff)_lk, which is
//! real for real phantoms in the real harmonic basis. Sphere data per mode is
//!
//! ```text
//! w_lk(t) = (2 pi)^{-n/2} int_0^inf E(t lambda) H_lk(lambda) lambda^{n/2} K_l(lambda) d lambda
//! K_l = (c1 + c2 l) J_nu(lambda) - c2 lambda J_{nu+1}(lambda),   nu = l + (n-2)/2
//! ```
//!
//! with (c1, c2) = (1, 0) for plain pressure data. Hyperplane data is built
//! per frequency eta* along the plane:
//! F_u(W_H f)(eta*, t) = (1/pi) int_0^inf E(t sqrt(|eta*|^2 + mu^2)) Ff(eta*, mu) d mu.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::{centered_dft, centered_nodes, dual_spacing};
use crate::error::{ensure, invalid, Error, Result};
use crate::harmonics::{eval_all, i_pow, indices, radial_bessel_factor, HarmonicIndex, HarmonicSeries, SphereGrid};
use crate::quadrature::{GaussLegendre, QuadratureNodes};
use crate::specfun::{bessel_j_orders, MittagLefflerKernel};

/// Gaussian factors are negligible (below about 1e-24 of the peak) past
/// sigma |xi| = FOURIER_EXTENT.
pub const FOURIER_EXTENT: f64 = 10.5;

/// Logarithmic time samples t_j = e^{tau_j}; t = 0 is carried separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(tau_min: f64, tau_max: f64, count: usize) -> Result<Self> {
        ensure(tau_max > tau_min, || "time grid needs tau_max > tau_min".into())?;
        ensure(count >= 16, || format!("time grid needs at least 16 samples, got {count}"))?;
        Ok(Self { tau_min, tau_max, count })
    }

    /// t in [e^-14, e^14] on 2^11 points; for alpha = 2 the upper end is e^7.
    pub fn standard(alpha: f64) -> Self {
        let tau_max = if alpha == 2.0 { 7.0 } else { 14.0 };
        Self {
            tau_min: -14.0,
            tau_max,
            count: 2048,
        }
    }

    /// Grid for hyperplane data. At alpha = 2 the Fourier-transformed trace
    /// oscillates like t^{-1/2} cos(|eta*| t) forever, so it is sampled densely
    /// on t <= 240 and tapered by the inversion.
    pub fn plane(alpha: f64) -> Self {
        if alpha == 2.0 {
            Self {
                tau_min: -14.0,
                tau_max: 240f64.ln(),
                count: 32768,
            }
        } else {
            Self::standard(alpha)
        }
    }

    pub fn step(&self) -> f64 {
        (self.tau_max - self.tau_min) / (self.count as f64 - 1.0)
    }

    /// The logarithmic samples only.
    pub fn log_times(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.count).map(|j| (self.tau_min + j as f64 * h).exp()).collect()
    }

    /// t = 0 followed by the logarithmic samples.
    pub fn times(&self) -> Vec<f64> {
        let mut t = vec![0.0];
        t.extend(self.log_times());
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBlob {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub amp: f64,
}

/// amp (r / sigma)^l e^{-r^2 / (2 sigma^2)} Y_lk(x / r).
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMode {
    pub idx: HarmonicIndex,
    pub sigma: f64,
    pub amp: f64,
}

/// A sum of Gaussian blobs and Gaussian-weighted harmonic modes, all with
/// closed-form Fourier transforms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Phantom {
    pub n: usize,
    pub blobs: Vec<GaussianBlob>,
    pub modes: Vec<HarmonicMode>,
}

impl Phantom {
    pub fn new(n: usize) -> Result<Self> {
        ensure(n == 2 || n == 3, || format!("dimension must be 2 or 3, got {n}"))?;
        Ok(Self {
            n,
            ..Default::default()
        })
    }

    pub fn with_blob(mut self, center: Vec<f64>, sigma: f64, amp: f64) -> Result<Self> {
        ensure(center.len() == self.n, || format!("blob center must have {} coordinates", self.n))?;
        ensure(center.iter().all(|c| c.is_finite()), || "blob center must be finite".into())?;
        ensure(sigma > 0.0 && sigma.is_finite(), || format!("blob width must be positive, got {sigma}"))?;
        ensure(amp.is_finite(), || "blob amplitude must be finite".into())?;
        self.blobs.push(GaussianBlob { center, sigma, amp });
        Ok(self)
    }

    pub fn with_mode(mut self, l: usize, k: usize, sigma: f64, amp: f64) -> Result<Self> {
        let idx = HarmonicIndex::new(self.n, l, k)?;
        ensure(sigma > 0.0 && sigma.is_finite(), || format!("mode width must be positive, got {sigma}"))?;
        ensure(amp.is_finite(), || "mode amplitude must be finite".into())?;
        self.modes.push(HarmonicMode { idx, sigma, amp });
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.blobs.is_empty() && self.modes.is_empty()
    }

    /// Largest harmonic degree among the modes (blobs have all degrees).
    pub fn mode_degree(&self) -> usize {
        self.modes.iter().map(|m| m.idx.l).max().unwrap_or(0)
    }

    /// Wavenumber past which the Fourier data is negligible.
    pub fn fourier_extent(&self) -> f64 {
        let smin = self
            .blobs
            .iter()
            .map(|b| b.sigma)
            .chain(self.modes.iter().map(|m| m.sigma))
            .fold(f64::INFINITY, f64::min);
        if smin.is_finite() {
            FOURIER_EXTENT / smin
        } else {
            FOURIER_EXTENT
        }
    }

    /// Radius containing the effective support (8 sigma past every center).
    pub fn support_radius(&self) -> f64 {
        let b = self
            .blobs
            .iter()
            .map(|b| b.center.iter().map(|c| c * c).sum::<f64>().sqrt() + 8.0 * b.sigma);
        let m = self
            .modes
            .iter()
            .map(|m| m.sigma * ((m.idx.l as f64).sqrt() + 8.0));
        b.chain(m).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        ensure(x.len() == self.n, || format!("point must have {} coordinates", self.n))?;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let mut s = 0.0;
        for b in &self.blobs {
            let d2: f64 = x.iter().zip(&b.center).map(|(a, c)| (a - c) * (a - c)).sum();
            s += b.amp * (-d2 / (2.0 * b.sigma * b.sigma)).exp();
        }
        if !self.modes.is_empty() {
            let r = r2.sqrt();
            let theta = unit_or_pole(x, r, self.n);
            let y = eval_all(self.n, self.mode_degree(), &theta)?;
            for m in &self.modes {
                let radial = if m.idx.l == 0 { 1.0 } else { (r / m.sigma).powi(m.idx.l as i32) };
                s += m.amp * radial * (-r2 / (2.0 * m.sigma * m.sigma)).exp() * y[m.idx.position()];
            }
        }
        Ok(s)
    }

    /// Ff(xi) = int f(x) e^{-i xi.x} dx.
    pub fn fourier(&self, xi: &[f64]) -> Result<Complex64> {
        ensure(xi.len() == self.n, || format!("frequency must have {} coordinates", self.n))?;
        let n = self.n as f64;
        let lam2: f64 = xi.iter().map(|v| v * v).sum();
        let mut s = Complex64::new(0.0, 0.0);
        for b in &self.blobs {
            let phase: f64 = xi.iter().zip(&b.center).map(|(a, c)| a * c).sum();
            let mag = b.amp * (2.0 * PI * b.sigma * b.sigma).powf(n / 2.0) * (-b.sigma * b.sigma * lam2 / 2.0).exp();
            s += Complex64::from_polar(mag, -phase);
        }
        if !self.modes.is_empty() {
            let lam = lam2.sqrt();
            let theta = unit_or_pole(xi, lam, self.n);
            let y = eval_all(self.n, self.mode_degree(), &theta)?;
            for m in &self.modes {
                s += i_pow(-(m.idx.l as i64)) * (mode_profile(m, self.n, lam) * y[m.idx.position()]);
            }
        }
        Ok(s)
    }

    /// H_lk(lambda) = i^l (Ff)_lk(lambda).
    pub fn reduced_profile(&self, idx: HarmonicIndex, lambda: f64) -> Result<f64> {
        ensure(idx.n == self.n, || "harmonic index dimension differs from the phantom's".into())?;
        let n = self.n as f64;
        let mut s = 0.0;
        for m in self.modes.iter().filter(|m| m.idx == idx) {
            s += mode_profile(m, self.n, lambda);
        }
        for b in &self.blobs {
            let c = b.center.iter().map(|v| v * v).sum::<f64>().sqrt();
            let theta = unit_or_pole(&b.center, c, self.n);
            let y = eval_all(self.n, idx.l, &theta)?[idx.position()];
            let g = b.amp * (2.0 * PI * b.sigma * b.sigma).powf(n / 2.0) * (-b.sigma * b.sigma * lambda * lambda / 2.0).exp();
            s += g * (2.0 * PI).powf(n / 2.0) * radial_bessel_factor(self.n, idx.l, lambda * c)? * y;
        }
        Ok(s)
    }

    /// Reduced Fourier profiles H_lk on `lambdas` for l <= max_degree.
    pub fn fourier_modes(&self, max_degree: usize, lambdas: &[f64]) -> Result<HarmonicSeries> {
        ensure(lambdas.iter().all(|&l| l >= 0.0), || "wavenumbers must be non-negative".into())?;
        let mut out = HarmonicSeries::zeros(self.n, max_degree, Some(lambdas.to_vec()));
        for idx in indices(self.n, max_degree) {
            let v = lambdas
                .iter()
                .map(|&l| self.reduced_profile(idx, l))
                .collect::<Result<Vec<_>>>()?;
            *out.get_mut(idx) = v;
        }
        Ok(out)
    }

    /// Whether the phantom is even in the last coordinate.
    pub fn is_even_in_last(&self) -> bool {
        let n = self.n;
        let blobs_ok = self.blobs.iter().all(|b| {
            b.center[n - 1] == 0.0
                || self.blobs.iter().any(|o| {
                    o.sigma == b.sigma
                        && o.amp == b.amp
                        && o.center[n - 1] == -b.center[n - 1]
                        && o.center[..n - 1] == b.center[..n - 1]
                })
        });
        blobs_ok && self.modes.iter().all(|m| mode_is_even(m.idx))
    }

    /// (f(x*, x_n) + f(x*, -x_n)) / 2.
    pub fn symmetrized(&self) -> Self {
        if self.is_even_in_last() {
            return self.clone();
        }
        let n = self.n;
        let mut blobs = Vec::new();
        for b in &self.blobs {
            if b.center[n - 1] == 0.0 {
                blobs.push(b.clone());
            } else {
                let mut m = b.clone();
                m.center[n - 1] = -m.center[n - 1];
                blobs.push(GaussianBlob {
                    amp: 0.5 * b.amp,
                    ..b.clone()
                });
                blobs.push(GaussianBlob { amp: 0.5 * b.amp, ..m });
            }
        }
        Self {
            n,
            blobs,
            modes: self.modes.iter().filter(|m| mode_is_even(m.idx)).cloned().collect(),
        }
    }
}

fn mode_is_even(idx: HarmonicIndex) -> bool {
    if idx.l == 0 {
        return true;
    }
    match idx.n {
        2 => idx.k == 1,
        _ => {
            let m = (idx.k as i64 - idx.l as i64 - 1).unsigned_abs() as usize;
            (idx.l + m).is_multiple_of(2)
        }
    }
}

fn unit_or_pole(x: &[f64], r: f64, n: usize) -> Vec<f64> {
    if r > 0.0 {
        x.iter().map(|v| v / r).collect()
    } else {
        let mut e = vec![0.0; n];
        e[n - 1] = 1.0;
        e
    }
}

/// Reduced profile of one harmonic mode: (2 pi)^{n/2} a sigma^{l+n} lambda^l e^{-sigma^2 lambda^2 / 2}.
fn mode_profile(m: &HarmonicMode, n: usize, lambda: f64) -> f64 {
    let l = m.idx.l as i32;
    (2.0 * PI).powf(n as f64 / 2.0)
        * m.amp
        * m.sigma.powi(l + n as i32)
        * lambda.powi(l)
        * (-m.sigma * m.sigma * lambda * lambda / 2.0).exp()
}

/// Quadrature nodes on [0, lambda_max] for spectral integrals against
/// E(t lambda), t <= t_max. Panels shrink geometrically towards 0 (where
/// the long-time data lives) and are narrow enough for the oscillation of
/// cos(t lambda) when alpha = 2.
pub fn spectral_nodes(lambda_max: f64, t_max: f64, alpha: f64) -> Result<QuadratureNodes> {
    ensure(lambda_max > 1.0, || format!("spectral extent must exceed 1, got {lambda_max}"))?;
    let rule = GaussLegendre::new(20)?;
    let width = if alpha == 2.0 { (6.0 * PI / t_max).min(0.5) } else { 0.5 };
    let mut breaks = vec![0.0];
    let mut e: f64 = 1e-9;
    while e < 1.0 {
        breaks.push(e);
        e = (2.0 * e).min(e + width);
    }
    let mut e = 1.0;
    while e < lambda_max {
        breaks.push(e);
        e += width;
    }
    breaks.push(lambda_max);
    QuadratureNodes::composite(&breaks, &rule)
}

/// Rows `out[t][m] = sum_j E(t_i lambda_j) weights[m][j]`, evaluated with
/// one kernel sweep per time.
fn kernel_traces(kernel: &MittagLefflerKernel, times: &[f64], lambdas: &[f64], weights: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            let mut acc = vec![0.0; weights.len()];
            for (j, &lam) in lambdas.iter().enumerate() {
                let e = kernel.eval(t * lam);
                for (a, w) in acc.iter_mut().zip(weights) {
                    *a += e * w[j];
                }
            }
            acc
        })
        .collect();
    // transpose to [mode][time]
    (0..weights.len())
        .map(|m| rows.iter().map(|r| r[m]).collect())
        .collect()
}

/// Kernel lambda^{n/2} [(c1 + c2 l) J_nu(lambda) - c2 lambda J_{nu+1}(lambda)].
pub fn directional_kernel(n: usize, l: usize, c1: f64, c2: f64, lambda: f64) -> Result<f64> {
    let nu = l as f64 + (n as f64 - 2.0) / 2.0;
    let mut j = [0.0; 2];
    bessel_j_orders(nu, lambda, &mut j)?;
    let k = (c1 + c2 * l as f64) * j[0] - c2 * lambda * j[1];
    Ok(lambda.powf(n as f64 / 2.0) * k)
}

/// One mode's trace w_lk(t) for a reduced profile `profile`.
pub fn forward_spherical_mode<F>(profile: F, idx: HarmonicIndex, alpha: f64, times: &[f64], lambda_max: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    directional_mode(profile, idx, alpha, 1.0, 0.0, times, lambda_max)
}

/// As [`forward_spherical_mode`] with direction-dependent weights (c1, c2).
pub fn directional_mode<F>(profile: F, idx: HarmonicIndex, alpha: f64, c1: f64, c2: f64, times: &[f64], lambda_max: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    ensure(times.iter().all(|&t| t >= 0.0 && t.is_finite()), || "times must be finite and non-negative".into())?;
    let kernel = MittagLefflerKernel::new(alpha)?;
    let t_max = times.iter().copied().fold(1.0, f64::max);
    let q = spectral_nodes(lambda_max, t_max, alpha)?;
    let c = (2.0 * PI).powf(-(idx.n as f64) / 2.0);
    let w = q
        .nodes
        .iter()
        .zip(&q.weights)
        .map(|(&lam, &wq)| Ok(c * wq * profile(lam) * directional_kernel(idx.n, idx.l, c1, c2, lam)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(kernel_traces(&kernel, times, &q.nodes, &[w]).pop().unwrap())
}

/// Mode traces of a phantom for l <= max_degree; the series grid is
/// [0, t_1, ..., t_N] (t = 0 first).
pub fn spherical_mode_traces(p: &Phantom, alpha: f64, c1: f64, c2: f64, max_degree: usize, time: &TimeGrid) -> Result<HarmonicSeries> {
    ensure(c1 != 0.0 || c2 != 0.0, || "direction weights (c1, c2) must not both vanish".into())?;
    let times = time.times();
    let lambda_max = p.fourier_extent();
    let q = spectral_nodes(lambda_max, *times.last().unwrap(), alpha)?;
    let n = p.n;
    let c = (2.0 * PI).powf(-(n as f64) / 2.0);
    let idxs = indices(n, max_degree);
    // kernel values per degree, shared across orders
    let kern: Vec<Vec<f64>> = (0..=max_degree)
        .map(|l| {
            q.nodes
                .iter()
                .map(|&lam| directional_kernel(n, l, c1, c2, lam))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut weights = Vec::new();
    let mut active = Vec::new();
    for idx in &idxs {
        let w = q
            .nodes
            .iter()
            .zip(&q.weights)
            .zip(&kern[idx.l])
            .map(|((&lam, &wq), &k)| Ok(c * wq * p.reduced_profile(*idx, lam)? * k))
            .collect::<Result<Vec<f64>>>()?;
        if w.iter().any(|v| *v != 0.0) {
            weights.push(w);
            active.push(*idx);
        }
    }
    let kernel = MittagLefflerKernel::new(alpha)?;
    let traces = kernel_traces(&kernel, &times, &q.nodes, &weights);
    let mut out = HarmonicSeries::zeros(n, max_degree, Some(times));
    for (idx, tr) in active.iter().zip(traces) {
        *out.get_mut(*idx) = tr;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Sphere,
    Hyperplane,
}

/// Uniform centered grid on R^{dim}, `count` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGrid {
    pub dim: usize,
    pub count: usize,
    pub spacing: f64,
}

impl PlaneGrid {
    pub fn new(dim: usize, count: usize, spacing: f64) -> Result<Self> {
        ensure(dim == 1 || dim == 2, || format!("plane grid dimension must be 1 or 2, got {dim}"))?;
        ensure(count >= 4 && count.is_multiple_of(2), || format!("plane grid needs an even count >= 4, got {count}"))?;
        ensure(spacing > 0.0 && spacing.is_finite(), || "plane grid spacing must be positive".into())?;
        Ok(Self { dim, count, spacing })
    }

    pub fn len(&self) -> usize {
        self.count.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.count; self.dim]
    }

    /// Points in row-major order.
    pub fn nodes(&self) -> Vec<Vec<f64>> {
        product_nodes(&centered_nodes(self.count, self.spacing), self.dim)
    }

    /// Dual frequencies eta*, same ordering as [`PlaneGrid::nodes`].
    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        product_nodes(&centered_nodes(self.count, dual_spacing(self.count, self.spacing)), self.dim)
    }
}

pub(crate) fn product_nodes(axis: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let m = axis.len();
    (0..m.pow(dim as u32))
        .map(|flat| {
            let mut v = vec![0.0; dim];
            let mut rest = flat;
            for c in v.iter_mut().rev() {
                *c = axis[rest % m];
                rest /= m;
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorGrid {
    Sphere(SphereGrid),
    Plane(PlaneGrid),
}

impl DetectorGrid {
    pub fn len(&self) -> usize {
        match self {
            DetectorGrid::Sphere(g) => g.len(),
            DetectorGrid::Plane(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            DetectorGrid::Sphere(_) => Geometry::Sphere,
            DetectorGrid::Plane(_) => Geometry::Hyperplane,
        }
    }

    /// Detector positions in R^n.
    pub fn positions(&self) -> Vec<Vec<f64>> {
        match self {
            DetectorGrid::Sphere(g) => g.nodes.clone(),
            DetectorGrid::Plane(g) => g
                .nodes()
                .into_iter()
                .map(|mut u| {
                    u.push(0.0);
                    u
                })
                .collect(),
        }
    }
}

/// Solution samples on the detector: `values[node][j]` at `time.times()[j]`
/// (t = 0 first).
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSeries {
    pub n: usize,
    pub alpha: f64,
    pub grid: DetectorGrid,
    pub time: TimeGrid,
    /// Direction weights (c1, c2) for sphere data; (1, 0) is plain pressure.
    pub weights: (f64, f64),
    pub values: Vec<Vec<f64>>,
}

impl DetectorSeries {
    pub fn geometry(&self) -> Geometry {
        self.grid.geometry()
    }

    /// Values at t = 0, one per node.
    pub fn initial(&self) -> Vec<f64> {
        self.values.iter().map(|v| v[0]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let geom = match self.geometry() {
            Geometry::Sphere => "sphere",
            Geometry::Hyperplane => "hyperplane",
        };
        let _ = writeln!(s, "# geometry={geom}");
        let _ = writeln!(s, "# n={}", self.n);
        let _ = writeln!(s, "# alpha={:?}", self.alpha);
        match &self.grid {
            DetectorGrid::Sphere(g) => {
                let shape: Vec<String> = g.shape.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "# grid={}", shape.join(":"));
            }
            DetectorGrid::Plane(g) => {
                let _ = writeln!(s, "# grid={}:{}:{:?}", g.dim, g.count, g.spacing);
            }
        }
        let _ = writeln!(s, "# time={:?}:{:?}:{}", self.time.tau_min, self.time.tau_max, self.time.count);
        let _ = writeln!(s, "# weights={:?}:{:?}", self.weights.0, self.weights.1);
        s.push_str("node,t,value\n");
        let times = self.time.times();
        for (i, row) in self.values.iter().enumerate() {
            for (t, v) in times.iter().zip(row) {
                let _ = writeln!(s, "{i},{t:.16e},{v:.16e}");
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut head = std::collections::HashMap::new();
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", ln + 1));
            if line.is_empty() || line == "node,t,value" {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let (k, v) = h.trim().split_once('=').ok_or_else(|| bad("malformed header"))?;
                head.insert(k.trim().to_string(), v.trim().to_string());
                continue;
            }
            let c: Vec<&str> = line.split(',').collect();
            if c.len() != 3 {
                return Err(bad("expected three columns"));
            }
            let node: usize = c[0].parse().map_err(|_| bad("bad node index"))?;
            let v: f64 = c[2].parse().map_err(|_| bad("bad value"))?;
            rows.push((node, v));
        }
        let get = |k: &str| head.get(k).ok_or_else(|| Error::Parse(format!("missing header '{k}'")));
        let num = |k: &str| -> Result<f64> { get(k)?.parse::<f64>().map_err(|_| Error::Parse(format!("bad header '{k}'"))) };
        let parts = |k: &str| -> Result<Vec<String>> { Ok(get(k)?.split(':').map(str::to_string).collect()) };
        let pf = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}'")));
        let pu = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer '{s}'")));

        let n = num("n")? as usize;
        let alpha = num("alpha")?;
        let tp = parts("time")?;
        if tp.len() != 3 {
            return Err(Error::Parse("time header needs tau_min:tau_max:count".into()));
        }
        let time = TimeGrid::new(pf(&tp[0])?, pf(&tp[1])?, pu(&tp[2])?)?;
        let gp = parts("grid")?;
        let grid = match get("geometry")?.as_str() {
            "sphere" => {
                let shape = gp.iter().map(|s| pu(s)).collect::<Result<Vec<_>>>()?;
                DetectorGrid::Sphere(SphereGrid::from_shape(n, &shape)?)
            }
            "hyperplane" => {
                if gp.len() != 3 {
                    return Err(Error::Parse("plane grid header needs dim:count:spacing".into()));
                }
                DetectorGrid::Plane(PlaneGrid::new(pu(&gp[0])?, pu(&gp[1])?, pf(&gp[2])?)?)
            }
            g => return Err(Error::Parse(format!("unknown geometry '{g}'"))),
        };
        let weights = match head.get("weights") {
            Some(w) => {
                let (a, b) = w.split_once(':').ok_or_else(|| Error::Parse("weights header needs c1:c2".into()))?;
                (pf(a)?, pf(b)?)
            }
            None => (1.0, 0.0),
        };
        let per = time.count + 1;
        let mut values = vec![Vec::with_capacity(per); grid.len()];
        for (node, v) in rows {
            let row = values
                .get_mut(node)
                .ok_or_else(|| Error::Parse(format!("node index {node} out of range")))?;
            row.push(v);
        }
        if values.iter().any(|r| r.len() != per) {
            return Err(Error::Parse(format!("every node needs {per} time samples")));
        }
        Ok(Self {
            n,
            alpha,
            grid,
            time,
            weights,
            values,
        })
    }
}

/// Pressure on the unit sphere.
pub fn forward_spherical(p: &Phantom, alpha: f64, grid: &SphereGrid, time: &TimeGrid, max_degree: usize) -> Result<DetectorSeries> {
    forward_directional(p, alpha, 1.0, 0.0, grid, time, max_degree)
}

/// Direction-dependent data c1 p + c2 dp/dr on the unit sphere.
pub fn forward_directional(
    p: &Phantom,
    alpha: f64,
    c1: f64,
    c2: f64,
    grid: &SphereGrid,
    time: &TimeGrid,
    max_degree: usize,
) -> Result<DetectorSeries> {
    ensure(p.n == grid.n, || "phantom and detector grid dimensions differ".into())?;
    let traces = spherical_mode_traces(p, alpha, c1, c2, max_degree, time)?;
    let per = time.count + 1;
    let values = grid
        .nodes
        .iter()
        .map(|node| {
            let y = eval_all(p.n, max_degree, node)?;
            let mut row = vec![0.0; per];
            for (yv, tr) in y.iter().zip(&traces.values) {
                for (r, v) in row.iter_mut().zip(tr) {
                    *r += yv * v;
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DetectorSeries {
        n: p.n,
        alpha,
        grid: DetectorGrid::Sphere(grid.clone()),
        time: *time,
        weights: (c1, c2),
        values,
    })
}

fn hyperplane_weights(p: &Phantom, eta_star: &[f64], q: &QuadratureNodes) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let e2: f64 = eta_star.iter().map(|v| v * v).sum();
    let mut lam = Vec::with_capacity(q.len());
    let mut re = Vec::with_capacity(q.len());
    let mut im = Vec::with_capacity(q.len());
    let mut xi = eta_star.to_vec();
    xi.push(0.0);
    for (&mu, &w) in q.nodes.iter().zip(&q.weights) {
        *xi.last_mut().unwrap() = mu;
        let f = p.fourier(&xi)? * (w / PI);
        lam.push((e2 + mu * mu).sqrt());
        re.push(f.re);
        im.push(f.im);
    }
    Ok((lam, re, im))
}

fn hyperplane_traces(p: &Phantom, kernel: &MittagLefflerKernel, eta_star: &[f64], times: &[f64], q: &QuadratureNodes) -> Result<Vec<Complex64>> {
    let (lam, re, im) = hyperplane_weights(p, eta_star, q)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let (mut a, mut b) = (0.0, 0.0);
        for j in 0..lam.len() {
            let e = kernel.eval(t * lam[j]);
            a += e * re[j];
            b += e * im[j];
        }
        out.push(Complex64::new(a, b));
    }
    Ok(out)
}

fn check_even(p: &Phantom) -> Result<()> {
    if p.is_even_in_last() {
        Ok(())
    } else {
        Err(invalid(
            "phantom is not even in the last coordinate; hyperplane data does not determine its odd part",
        ))
    }
}

/// F_u(W_H f)(eta*, t) at the given times. Complex in general; real when the
/// phantom is also even along the plane.
pub fn forward_hyperplane_freq(p: &Phantom, alpha: f64, eta_star: &[f64], times: &[f64]) -> Result<Vec<Complex64>> {
    ensure(eta_star.len() + 1 == p.n, || format!("eta* must have {} coordinates", p.n - 1))?;
    ensure(times.iter().all(|&t| t >= 0.0 && t.is_finite()), || "times must be finite and non-negative".into())?;
    check_even(p)?;
    let kernel = MittagLefflerKernel::new(alpha)?;
    let t_max = times.iter().copied().fold(1.0, f64::max);
    let q = spectral_nodes(p.fourier_extent(), t_max, alpha)?;
    hyperplane_traces(p, &kernel, eta_star, times, &q)
}

/// Hyperplane data on a uniform grid along {x_n = 0}. Non-even phantoms are
/// symmetrized first unless `strict`.
pub fn forward_hyperplane(p: &Phantom, alpha: f64, plane: &PlaneGrid, time: &TimeGrid, strict: bool) -> Result<DetectorSeries> {
    ensure(plane.dim + 1 == p.n, || "plane grid dimension must be n - 1".into())?;
    let p = if p.is_even_in_last() {
        p.clone()
    } else if strict {
        return Err(invalid("phantom is not even in the last coordinate (strict mode)"));
    } else {
        p.symmetrized()
    };
    check_aliasing(&p, plane)?;
    let times = time.times();
    let kernel = MittagLefflerKernel::new(alpha)?;
    let q = spectral_nodes(p.fourier_extent(), *times.last().unwrap(), alpha)?;
    let freqs = plane.frequencies();
    let spectra: Vec<Vec<Complex64>> = freqs
        .par_iter()
        .map(|eta| hyperplane_traces(&p, &kernel, eta, &times, &q))
        .collect::<Result<_>>()?;
    let dims = plane.dims();
    let mut values = vec![vec![0.0; times.len()]; plane.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); plane.len()];
    for j in 0..times.len() {
        for (b, s) in buf.iter_mut().zip(&spectra) {
            *b = s[j];
        }
        centered_dft(&mut buf, &dims, plane.spacing, true)?;
        let mag = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let res = buf.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        if mag > 0.0 && res > 1e-8 * mag {
            return Err(Error::ImaginaryResidue {
                what: "hyperplane data",
                residue: res / mag,
                limit: 1e-8,
            });
        }
        for (row, b) in values.iter_mut().zip(&buf) {
            row[j] = b.re;
        }
    }
    Ok(DetectorSeries {
        n: p.n,
        alpha,
        grid: DetectorGrid::Plane(*plane),
        time: *time,
        weights: (1.0, 0.0),
        values,
    })
}

/// Spectral content at the Nyquist frequency and spatial content at the
/// grid edge must both be below 1e-8 of the peak.
pub fn check_aliasing(p: &Phantom, plane: &PlaneGrid) -> Result<()> {
    let n = p.n;
    let peak = p.fourier(&vec![0.0; n])?.norm().max(
        // modes with l > 0 vanish at the origin
        p.modes
            .iter()
            .map(|m| {
                let mut xi = vec![0.0; n];
                xi[0] = (m.idx.l as f64).sqrt() / m.sigma;
                p.fourier(&xi).map(|v| v.norm()).unwrap_or(0.0)
            })
            .fold(0.0, f64::max),
    );
    let nyq = PI / plane.spacing;
    let mut worst: f64 = 0.0;
    for axis in 0..n - 1 {
        let mut xi = vec![0.0; n];
        xi[axis] = nyq;
        worst = worst.max(p.fourier(&xi)?.norm());
    }
    if peak > 0.0 && worst > 1e-8 * peak {
        return Err(Error::Truncation(format!(
            "phantom spectrum at the Nyquist frequency {nyq:.3} is {:.2e} of its peak; reduce the plane grid spacing",
            worst / peak
        )));
    }
    let edge = plane.spacing * (plane.count / 2) as f64;
    let r = p.support_radius();
    if r > edge {
        // check the actual value rather than the conservative radius
        let mut x = vec![0.0; n];
        let mut v: f64 = 0.0;
        for axis in 0..n - 1 {
            x.iter_mut().for_each(|c| *c = 0.0);
            x[axis] = -edge;
            v = v.max(p.eval(&x)?.abs());
        }
        let fpeak = p.blobs.iter().map(|b| b.amp.abs()).sum::<f64>() + p.modes.iter().map(|m| m.amp.abs()).sum::<f64>();
        if v > 1e-8 * fpeak {
            return Err(Error::Truncation(format!(
                "phantom is not negligible at the plane grid edge |u| = {edge:.3}; enlarge the grid"
            )));
        }
    }
    Ok(())
}
