//! Real orthonormal spherical harmonics on S^1 and S^2, quadrature grids
//! that integrate them exactly, and the Funk-Hecke plane-wave identity.
//!
//! Orders run k = 1..N(n, l). On S^1: k = 1 is cos(l phi)/sqrt(pi), k = 2 is
//! sin(l phi)/sqrt(pi). On S^2, k = 1..2l+1 maps to m = k - l - 1 with
//! cos(m phi) for m > 0 and sin(|m| phi) for m < 0.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{ensure, invalid, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::{bessel_j, gamma_real};

/// N(n, l) = (2l + n - 2)(n + l - 3)! / (l! (n - 2)!), N(n, 0) = 1.
pub fn num_harmonics(n: usize, l: usize) -> usize {
    if l == 0 {
        return 1;
    }
    if n == 2 {
        return 2;
    }
    // (n + l - 3)! / (l! (n - 2)!) = C(n + l - 3, l) / (n - 2)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=(n - 2) as u128 {
        den *= i;
    }
    for i in (l as u128 + 1)..=((n + l - 3) as u128) {
        num *= i;
    }
    ((2 * l + n - 2) as u128 * num / den) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicIndex {
    pub n: usize,
    pub l: usize,
    pub k: usize,
}

impl HarmonicIndex {
    pub fn new(n: usize, l: usize, k: usize) -> Result<Self> {
        ensure(n == 2 || n == 3, || format!("dimension must be 2 or 3, got {n}"))?;
        let nk = num_harmonics(n, l);
        ensure(k >= 1 && k <= nk, || format!("order k = {k} outside 1..={nk} for n = {n}, l = {l}"))?;
        Ok(Self { n, l, k })
    }

    /// Bessel order l + (n - 2)/2 attached to this degree.
    pub fn bessel_order(&self) -> f64 {
        self.l as f64 + (self.n as f64 - 2.0) / 2.0
    }

    /// Position in the canonical (l, k) ordering.
    pub fn position(&self) -> usize {
        (0..self.l).map(|d| num_harmonics(self.n, d)).sum::<usize>() + self.k - 1
    }
}

/// All indices with l <= max_degree in canonical order.
pub fn indices(n: usize, max_degree: usize) -> Vec<HarmonicIndex> {
    let mut out = Vec::new();
    for l in 0..=max_degree {
        for k in 1..=num_harmonics(n, l) {
            out.push(HarmonicIndex { n, l, k });
        }
    }
    out
}

pub fn surface_measure(n: usize) -> f64 {
    // 2 pi^{n/2} / Gamma(n/2)
    2.0 * PI.powf(n as f64 / 2.0) / gamma_real(n as f64 / 2.0).unwrap_or(f64::NAN)
}

fn check_unit(theta: &[f64], n: usize) -> Result<()> {
    ensure(theta.len() == n, || format!("expected a point in R^{n}, got {} coordinates", theta.len()))?;
    let r: f64 = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
    ensure((r - 1.0).abs() <= 1e-12, || format!("direction is not a unit vector (|theta| = {r})"))
}

/// All harmonics of degree <= max_degree at `theta`, in canonical order.
pub fn eval_all(n: usize, max_degree: usize, theta: &[f64]) -> Result<Vec<f64>> {
    ensure(n == 2 || n == 3, || format!("dimension must be 2 or 3, got {n}"))?;
    check_unit(theta, n)?;
    Ok(eval_all_unchecked(n, max_degree, theta))
}

pub(crate) fn eval_all_unchecked(n: usize, max_degree: usize, theta: &[f64]) -> Vec<f64> {
    let lmax = max_degree;
    if n == 2 {
        let phi = theta[1].atan2(theta[0]);
        let mut out = Vec::with_capacity(2 * lmax + 1);
        out.push(1.0 / (2.0 * PI).sqrt());
        let c = 1.0 / PI.sqrt();
        for l in 1..=lmax {
            let (s, co) = (l as f64 * phi).sin_cos();
            out.push(c * co);
            out.push(c * s);
        }
        return out;
    }
    let z = theta[2].clamp(-1.0, 1.0);
    let st = (1.0 - z * z).max(0.0).sqrt();
    let phi = theta[1].atan2(theta[0]);
    // Fully normalized associated Legendre functions p[l][m].
    let mut p = vec![vec![0.0; lmax + 1]; lmax + 1];
    p[0][0] = (1.0 / (4.0 * PI)).sqrt();
    for m in 1..=lmax {
        let mf = m as f64;
        p[m][m] = p[m - 1][m - 1] * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * st;
    }
    for m in 0..lmax {
        p[m + 1][m] = (2.0 * m as f64 + 3.0).sqrt() * z * p[m][m];
        for l in (m + 2)..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            p[l][m] = a * (z * p[l - 1][m] - b * p[l - 2][m]);
        }
    }
    let mut out = Vec::with_capacity((lmax + 1) * (lmax + 1));
    let r2 = 2f64.sqrt();
    for (l, pl) in p.iter().enumerate() {
        for k in 1..=(2 * l + 1) {
            let m = k as i64 - l as i64 - 1;
            let v = match m.cmp(&0) {
                std::cmp::Ordering::Equal => pl[0],
                std::cmp::Ordering::Greater => r2 * pl[m as usize] * (m as f64 * phi).cos(),
                std::cmp::Ordering::Less => r2 * pl[(-m) as usize] * ((-m) as f64 * phi).sin(),
            };
            out.push(v);
        }
    }
    out
}

/// Value of the orthonormal real harmonic `idx` at the unit vector `theta`.
pub fn eval_harmonic(idx: HarmonicIndex, theta: &[f64]) -> Result<f64> {
    let all = eval_all(idx.n, idx.l, theta)?;
    Ok(all[idx.position()])
}

/// Detector nodes on S^{n-1} with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub n: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Harmonics of degree <= this are integrated exactly (pairwise products included).
    pub exact_degree: usize,
    /// `[count]` on the circle, `[n_lat, n_lon]` on the sphere.
    pub shape: Vec<usize>,
}

impl SphereGrid {
    /// Smallest grid for which analysis up to degree `max_degree` is exact.
    pub fn for_degree(n: usize, max_degree: usize) -> Result<Self> {
        match n {
            2 => Self::circle(2 * max_degree + 2),
            3 => Self::sphere(max_degree + 1, 2 * max_degree + 2),
            _ => Err(invalid(format!("dimension must be 2 or 3, got {n}"))),
        }
    }

    /// `count` equally spaced points on the circle.
    pub fn circle(count: usize) -> Result<Self> {
        ensure(count >= 1, || "circle grid needs at least one node".into())?;
        let nodes = (0..count)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / count as f64;
                vec![phi.cos(), phi.sin()]
            })
            .collect();
        Ok(Self {
            n: 2,
            nodes,
            weights: vec![2.0 * PI / count as f64; count],
            exact_degree: (count - 1) / 2,
            shape: vec![count],
        })
    }

    /// Gauss-Legendre in cos(colatitude) times uniform longitude.
    pub fn sphere(n_lat: usize, n_lon: usize) -> Result<Self> {
        ensure(n_lat >= 1 && n_lon >= 1, || "sphere grid needs nodes in both directions".into())?;
        let gl = GaussLegendre::new(n_lat)?;
        let mut nodes = Vec::with_capacity(n_lat * n_lon);
        let mut weights = Vec::with_capacity(n_lat * n_lon);
        for (&z, &w) in gl.nodes.iter().zip(&gl.weights) {
            let st = (1.0 - z * z).sqrt();
            for j in 0..n_lon {
                let phi = 2.0 * PI * j as f64 / n_lon as f64;
                nodes.push(vec![st * phi.cos(), st * phi.sin(), z]);
                weights.push(w * 2.0 * PI / n_lon as f64);
            }
        }
        // product of two degree-L harmonics has degree 2L: needs 2L <= 2 n_lat - 1
        // in z and 2L < n_lon in longitude.
        let exact = (n_lat.saturating_sub(1)).min((n_lon - 1) / 2);
        Ok(Self {
            n: 3,
            nodes,
            weights,
            exact_degree: exact,
            shape: vec![n_lat, n_lon],
        })
    }

    /// Rebuild from [`SphereGrid::shape`].
    pub fn from_shape(n: usize, shape: &[usize]) -> Result<Self> {
        match (n, shape) {
            (2, [c]) => Self::circle(*c),
            (3, [a, b]) => Self::sphere(*a, *b),
            _ => Err(invalid(format!("no detector grid of shape {shape:?} in dimension {n}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Coefficients per harmonic index; each coefficient may be a function
/// sampled on `grid` (radii, wavenumbers or times).
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSeries {
    pub n: usize,
    pub max_degree: usize,
    pub grid: Option<Vec<f64>>,
    /// `values[position][grid index]`.
    pub values: Vec<Vec<f64>>,
}

impl HarmonicSeries {
    pub fn zeros(n: usize, max_degree: usize, grid: Option<Vec<f64>>) -> Self {
        let len = grid.as_ref().map_or(1, |g| g.len());
        let count = indices(n, max_degree).len();
        Self {
            n,
            max_degree,
            grid,
            values: vec![vec![0.0; len]; count],
        }
    }

    pub fn indices(&self) -> Vec<HarmonicIndex> {
        indices(self.n, self.max_degree)
    }

    pub fn get(&self, idx: HarmonicIndex) -> &[f64] {
        &self.values[idx.position()]
    }

    pub fn get_mut(&mut self, idx: HarmonicIndex) -> &mut Vec<f64> {
        &mut self.values[idx.position()]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# n={}", self.n);
        let _ = writeln!(s, "# max_degree={}", self.max_degree);
        if let Some(g) = &self.grid {
            let _ = writeln!(
                s,
                "# grid={}",
                g.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(";")
            );
        }
        s.push_str("l,k,index,value\n");
        for idx in self.indices() {
            for (j, v) in self.get(idx).iter().enumerate() {
                let _ = writeln!(s, "{},{},{},{:.16e}", idx.l, idx.k, j, v);
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut n = None;
        let mut lmax = None;
        let mut grid = None;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", i + 1));
            let line = line.trim();
            if line.is_empty() || line == "l,k,index,value" {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let (k, v) = h.trim().split_once('=').ok_or_else(|| bad("malformed header"))?;
                match k {
                    "n" => n = Some(v.parse::<usize>().map_err(|_| bad("bad n"))?),
                    "max_degree" => lmax = Some(v.parse::<usize>().map_err(|_| bad("bad max_degree"))?),
                    "grid" => {
                        grid = Some(
                            v.split(';')
                                .map(|x| x.parse::<f64>())
                                .collect::<std::result::Result<Vec<_>, _>>()
                                .map_err(|_| bad("bad grid"))?,
                        )
                    }
                    _ => {}
                }
                continue;
            }
            let c: Vec<&str> = line.split(',').collect();
            if c.len() != 4 {
                return Err(bad("expected four columns"));
            }
            let l: usize = c[0].parse().map_err(|_| bad("bad l"))?;
            let k: usize = c[1].parse().map_err(|_| bad("bad k"))?;
            let j: usize = c[2].parse().map_err(|_| bad("bad index"))?;
            let v: f64 = c[3].parse().map_err(|_| bad("bad value"))?;
            rows.push((l, k, j, v));
        }
        let n = n.ok_or_else(|| Error::Parse("missing n header".into()))?;
        let lmax = lmax.ok_or_else(|| Error::Parse("missing max_degree header".into()))?;
        let mut s = HarmonicSeries::zeros(n, lmax, grid);
        for (l, k, j, v) in rows {
            let idx = HarmonicIndex::new(n, l, k)?;
            let slot = s.get_mut(idx);
            if j >= slot.len() {
                return Err(Error::Parse(format!("grid index {j} out of range")));
            }
            slot[j] = v;
        }
        Ok(s)
    }
}

/// Harmonic coefficients of node samples: c_lk = sum_j w_j f_j Y_lk(theta_j).
pub fn analyze(grid: &SphereGrid, samples: &[f64], max_degree: usize) -> Result<HarmonicSeries> {
    let cols: Vec<Vec<f64>> = samples.iter().map(|&v| vec![v]).collect();
    let mut s = analyze_columns(grid, &cols, max_degree)?;
    s.grid = None;
    Ok(s)
}

/// As [`analyze`], for node data carrying several columns (for example one
/// per time sample). `data[node][column]`.
pub fn analyze_columns(grid: &SphereGrid, data: &[Vec<f64>], max_degree: usize) -> Result<HarmonicSeries> {
    ensure(data.len() == grid.len(), || {
        format!("{} samples for a grid of {} nodes", data.len(), grid.len())
    })?;
    ensure(max_degree <= grid.exact_degree, || {
        format!(
            "degree {max_degree} exceeds the exactness of the detector grid (max {})",
            grid.exact_degree
        )
    })?;
    let ncol = data.first().map_or(0, |d| d.len());
    ensure(data.iter().all(|d| d.len() == ncol), || "ragged node data".into())?;
    let count = indices(grid.n, max_degree).len();
    let mut values = vec![vec![0.0; ncol]; count];
    for ((node, w), row) in grid.nodes.iter().zip(&grid.weights).zip(data) {
        let y = eval_all_unchecked(grid.n, max_degree, node);
        for (p, yv) in y.iter().enumerate() {
            let c = w * yv;
            for (acc, v) in values[p].iter_mut().zip(row) {
                *acc += c * v;
            }
        }
    }
    Ok(HarmonicSeries {
        n: grid.n,
        max_degree,
        grid: Some((0..ncol).map(|j| j as f64).collect()),
        values,
    })
}

/// sum_lk c_lk Y_lk(theta) for a single-valued series.
pub fn synthesize(series: &HarmonicSeries, theta: &[f64]) -> Result<f64> {
    synthesize_column(series, theta, 0)
}

/// Synthesis of column `col` of a multi-valued series.
pub fn synthesize_column(series: &HarmonicSeries, theta: &[f64], col: usize) -> Result<f64> {
    let y = eval_all(series.n, series.max_degree, theta)?;
    let mut s = 0.0;
    for (yv, vals) in y.iter().zip(&series.values) {
        let v = vals.get(col).ok_or_else(|| invalid(format!("column {col} out of range")))?;
        s += yv * v;
    }
    Ok(s)
}

/// lambda^{(2-n)/2} J_{l+(n-2)/2}(lambda), continuous at lambda = 0.
pub fn radial_bessel_factor(n: usize, l: usize, lambda: f64) -> Result<f64> {
    ensure(lambda >= 0.0, || format!("wavenumber must be non-negative, got {lambda}"))?;
    let nu = l as f64 + (n as f64 - 2.0) / 2.0;
    if lambda < 1e-8 {
        // leading series term: lambda^l / (2^nu Gamma(nu + 1))
        return Ok(lambda.powi(l as i32) / (2f64.powf(nu) * gamma_real(nu + 1.0)?));
    }
    Ok(lambda.powf((2.0 - n as f64) / 2.0) * bessel_j(nu, lambda)?)
}

/// Closed form of int_{S^{n-1}} e^{i lambda omega.theta} Y_lk(omega) dS(omega):
/// (2 pi)^{n/2} i^l lambda^{(2-n)/2} J_{l+(n-2)/2}(lambda) Y_lk(theta).
pub fn funk_hecke_plane_wave(idx: HarmonicIndex, lambda: f64, theta: &[f64]) -> Result<Complex64> {
    let y = eval_harmonic(idx, theta)?;
    let r = radial_bessel_factor(idx.n, idx.l, lambda)?;
    Ok(i_pow(idx.l as i64) * ((2.0 * PI).powf(idx.n as f64 / 2.0) * r * y))
}

/// i^m for integer m.
pub fn i_pow(m: i64) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for l in 0..=20 {
            assert_eq!(num_harmonics(2, l), if l == 0 { 1 } else { 2 });
            assert_eq!(num_harmonics(3, l), 2 * l + 1);
        }
        assert_eq!(num_harmonics(4, 2), 9);
    }

    #[test]
    fn constants() {
        let y = eval_harmonic(HarmonicIndex::new(2, 0, 1).unwrap(), &[0.6, 0.8]).unwrap();
        assert!((y - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let y = eval_harmonic(HarmonicIndex::new(3, 0, 1).unwrap(), &[0.0, 0.6, 0.8]).unwrap();
        assert!((y - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!(eval_harmonic(HarmonicIndex::new(2, 0, 1).unwrap(), &[1.0, 1.0]).is_err());
        assert!(HarmonicIndex::new(3, 2, 6).is_err());
        assert!(HarmonicIndex::new(2, 2, 0).is_err());
    }

    #[test]
    fn positions_are_canonical() {
        for (p, idx) in indices(3, 5).into_iter().enumerate() {
            assert_eq!(idx.position(), p);
        }
    }

    #[test]
    fn grid_weights() {
        let g = SphereGrid::for_degree(3, 7).unwrap();
        assert!((g.weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        let g = SphereGrid::for_degree(2, 7).unwrap();
        assert!((g.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        assert_eq!(g.exact_degree, 7);
    }

    #[test]
    fn funk_hecke_at_zero() {
        let idx = HarmonicIndex::new(2, 0, 1).unwrap();
        let v = funk_hecke_plane_wave(idx, 0.0, &[1.0, 0.0]).unwrap();
        assert!((v.re - (2.0 * PI).sqrt()).abs() < 1e-14 && v.im == 0.0);
    }
}
