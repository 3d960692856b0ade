//! Slow, simple reference computations used only to check the fast paths:
//! Riemann-Liouville integrals and Caputo derivatives of sampled functions,
//! and the solution p(x, t) by direct quadrature of the spectral formula
//!
//! ```text
//! p(x, t) = (2 pi)^{-n} int E_alpha(-t^alpha |xi|^alpha) e^{i xi.x} Ff(xi) dxi
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure, invalid, Error, Result};
use crate::quadrature::{GaussLegendre, QuadratureNodes};
use crate::specfun::{gamma_real, mittag_leffler};

/// A function of one variable sampled on an increasing grid starting at 0.
///
/// Accuracy of everything below depends on the grid resolving `values`;
/// that is the caller's job.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        ensure(grid.len() == values.len(), || "grid and values differ in length".into())?;
        ensure(grid.len() >= 3, || "need at least three samples".into())?;
        ensure(grid[0] == 0.0, || format!("grid must start at 0, starts at {}", grid[0]))?;
        ensure(grid.windows(2).all(|w| w[1] > w[0]), || "grid must be strictly increasing".into())?;
        ensure(values.iter().all(|v| v.is_finite()), || "values must be finite".into())?;
        Ok(Self { grid, values })
    }

    pub fn sample<F: FnMut(f64) -> f64>(grid: Vec<f64>, f: F) -> Result<Self> {
        let values = grid.iter().copied().map(f).collect();
        Self::new(grid, values)
    }

    /// Grid t_j = T (j / count)^power; power > 1 clusters points near 0.
    pub fn graded_grid(t_max: f64, count: usize, power: f64) -> Vec<f64> {
        (0..=count)
            .map(|j| t_max * (j as f64 / count as f64).powf(power))
            .collect()
    }

    pub fn t_max(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Piecewise-linear interpolation.
    pub fn eval(&self, t: f64) -> f64 {
        let j = self.grid.partition_point(|&g| g <= t).clamp(1, self.grid.len() - 1);
        let (a, b) = (self.grid[j - 1], self.grid[j]);
        let u = (t - a) / (b - a);
        self.values[j - 1] * (1.0 - u) + self.values[j] * u
    }
}

/// (I^order h)(t) = (1 / Gamma(order)) int_0^t (t - s)^{order - 1} h(s) ds.
///
/// Product integration: h is taken piecewise linear and the weakly singular
/// kernel is integrated exactly on every subinterval.
pub fn riemann_liouville_integral(h: &SampledFunction, order: f64, t: f64) -> Result<f64> {
    ensure(order >= 0.0 && order.is_finite(), || format!("order must be non-negative, got {order}"))?;
    ensure((0.0..=h.t_max()).contains(&t), || {
        format!("t = {t} outside the sampled range [0, {}]", h.t_max())
    })?;
    if order == 0.0 {
        return Ok(h.eval(t));
    }
    let q = order;
    let mut sum = 0.0;
    for j in 0..h.grid.len() - 1 {
        let a = h.grid[j];
        if a >= t {
            break;
        }
        let b = h.grid[j + 1].min(t);
        let (ha, hb) = (h.values[j], h.eval(b));
        let (da, db) = (t - a, t - b);
        // int_a^b (t - s)^{q-1} ds and int_a^b (t - s)^{q-1} (s - a) ds
        let m0 = (da.powf(q) - db.powf(q)) / q;
        let m1 = da * m0 - (da.powf(q + 1.0) - db.powf(q + 1.0)) / (q + 1.0);
        sum += ha * m0 + (hb - ha) / (b - a) * m1;
    }
    Ok(sum / gamma_real(q)?)
}

/// Caputo derivative (I^{2 - alpha} h'')(t) for 1 < alpha <= 2, with h''
/// from three-point differences on the (possibly non-uniform) grid.
pub fn caputo_derivative(h: &SampledFunction, alpha: f64, t: f64) -> Result<f64> {
    ensure(alpha > 1.0 && alpha <= 2.0, || format!("alpha must be in (1, 2], got {alpha}"))?;
    let n = h.grid.len();
    ensure(n >= 4, || "need at least four samples for second differences".into())?;
    ensure(t >= 0.0 && t <= h.grid[n - 2], || {
        format!("t = {t} too close to the grid end {} for the difference stencil", h.t_max())
    })?;
    let mut d2 = vec![0.0; n - 1];
    for j in 1..n - 1 {
        let (x0, x1, x2) = (h.grid[j - 1], h.grid[j], h.grid[j + 1]);
        let (y0, y1, y2) = (h.values[j - 1], h.values[j], h.values[j + 1]);
        let (hl, hr) = (x1 - x0, x2 - x1);
        d2[j] = 2.0 * (y0 * hr - y1 * (hl + hr) + y2 * hl) / (hl * hr * (hl + hr));
    }
    // Linear extrapolation to the left end.
    let (x1, x2) = (h.grid[1], h.grid[2]);
    d2[0] = d2[1] - (d2[2] - d2[1]) / (x2 - x1) * x1;
    let second = SampledFunction {
        grid: h.grid[..n - 1].to_vec(),
        values: d2,
    };
    if alpha == 2.0 {
        return Ok(second.eval(t));
    }
    riemann_liouville_integral(&second, 2.0 - alpha, t)
}

/// Quadrature orders for [`brute_force_pressure`].
#[derive(Debug, Clone, Copy)]
pub struct OracleOrders {
    pub radial: usize,
    pub angular: usize,
}

impl Default for OracleOrders {
    fn default() -> Self {
        Self {
            radial: 256,
            angular: 128,
        }
    }
}

fn radial_nodes(cutoff: f64, count: usize) -> Result<QuadratureNodes> {
    // 8 equal Gauss-Legendre panels.
    let panels = 8.min(count).max(1);
    let rule = GaussLegendre::new(count.div_ceil(panels))?;
    let breaks: Vec<f64> = (0..=panels).map(|j| cutoff * j as f64 / panels as f64).collect();
    QuadratureNodes::composite(&breaks, &rule)
}

fn check_real(sum: Complex64, mag: f64) -> Result<f64> {
    if mag > 0.0 && sum.im.abs() > 1e-9 * mag {
        return Err(Error::ImaginaryResidue {
            what: "brute-force pressure",
            residue: sum.im.abs() / mag,
            limit: 1e-9,
        });
    }
    Ok(sum.re)
}

/// p(x, t) by tensor-product quadrature over the ball |xi| <= cutoff in polar
/// (n = 2) or spherical (n = 3) coordinates. Uses the direct Mittag-Leffler
/// evaluation, never the tabulated kernel.
pub fn brute_force_pressure<F>(f_hat: F, alpha: f64, x: &[f64], t: f64, cutoff: f64, orders: OracleOrders) -> Result<f64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let n = x.len();
    ensure(n == 2 || n == 3, || format!("dimension must be 2 or 3, got {n}"))?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    ensure(cutoff > 0.0, || "cutoff must be positive".into())?;
    let rad = radial_nodes(cutoff, orders.radial)?;
    let ml: Vec<f64> = rad
        .nodes
        .iter()
        .map(|&lam| mittag_leffler(alpha, -(t * lam).powf(alpha)))
        .collect::<Result<_>>()?;

    let mut dirs: Vec<(Vec<f64>, f64)> = Vec::new();
    if n == 2 {
        let m = orders.angular;
        for j in 0..m {
            let phi = 2.0 * PI * j as f64 / m as f64;
            dirs.push((vec![phi.cos(), phi.sin()], 2.0 * PI / m as f64));
        }
    } else {
        let gl = GaussLegendre::new(orders.angular)?;
        let m = 2 * orders.angular;
        for (&z, &wz) in gl.nodes.iter().zip(&gl.weights) {
            let st = (1.0 - z * z).sqrt();
            for j in 0..m {
                let phi = 2.0 * PI * j as f64 / m as f64;
                dirs.push((vec![st * phi.cos(), st * phi.sin(), z], wz * 2.0 * PI / m as f64));
            }
        }
    }

    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let mut xi = vec![0.0; n];
    for ((&lam, &wr), &e) in rad.nodes.iter().zip(&rad.weights).zip(&ml) {
        let jac = wr * lam.powi(n as i32 - 1) * e;
        for (dir, wa) in &dirs {
            for (k, d) in dir.iter().enumerate() {
                xi[k] = lam * d;
            }
            let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
            let v = f_hat(&xi) * Complex64::from_polar(1.0, phase) * (jac * wa);
            sum += v;
            mag += v.norm();
        }
    }
    let scale = (2.0 * PI).powi(-(n as i32));
    check_real(sum * scale, mag * scale)
}

/// Plane-wave component of hyperplane data straight from the definition:
/// (1 / 2 pi) int_R E_alpha(-t^alpha |xi|^alpha) Ff(eta*, xi_n) d xi_n with
/// xi = (eta*, xi_n), Gauss-Legendre panels over [-cutoff, cutoff] and the
/// direct Mittag-Leffler evaluation.
pub fn hyperplane_slice_direct<F>(f_hat: F, alpha: f64, eta_star: &[f64], t: f64, cutoff: f64, order: usize) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let n = eta_star.len() + 1;
    ensure(n == 2 || n == 3, || format!("dimension must be 2 or 3, got {n}"))?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    ensure(cutoff > 0.0, || "cutoff must be positive".into())?;
    // |xi|^alpha is not smooth at xi_n = 0 when eta* = 0: grade the panels there.
    let mut half: Vec<f64> = (0..24).map(|k| cutoff * 0.5f64.powi(k)).collect();
    half.extend((1..8).map(|j| cutoff * j as f64 / 8.0));
    half.sort_by(f64::total_cmp);
    half.dedup();
    let mut breaks: Vec<f64> = half.iter().rev().map(|v| -v).collect();
    breaks.push(0.0);
    breaks.extend(&half);
    let rule = GaussLegendre::new((order / breaks.len()).max(8))?;
    let q = QuadratureNodes::composite(&breaks, &rule)?;
    let e2: f64 = eta_star.iter().map(|v| v * v).sum();
    let mut xi = eta_star.to_vec();
    xi.push(0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (&x, &w) in q.nodes.iter().zip(&q.weights) {
        xi[n - 1] = x;
        let lam = (e2 + x * x).sqrt();
        sum += f_hat(&xi) * (w * mittag_leffler(alpha, -(t * lam).powf(alpha))?);
    }
    Ok(sum / (2.0 * PI))
}

/// Hyperplane data W_H f(u, t) = p((u, 0), t) by [`brute_force_pressure`].
pub fn hyperplane_direct<F>(f_hat: F, alpha: f64, u: &[f64], t: f64, cutoff: f64, orders: OracleOrders) -> Result<f64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let mut x = u.to_vec();
    x.push(0.0);
    brute_force_pressure(f_hat, alpha, &x, t, cutoff, orders)
}

/// Central-difference estimate of d/dt E_alpha(-t^alpha lambda^alpha) at t.
pub fn ml_time_slope(alpha: f64, lambda: f64, t: f64, dt: f64) -> Result<f64> {
    if t < dt {
        return Err(invalid("slope point must be at least one step from 0"));
    }
    let e = |s: f64| mittag_leffler(alpha, -(s * lambda).powf(alpha));
    Ok((e(t + dt)? - e(t - dt)?) / (2.0 * dt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rl_of_constant_and_order_zero() {
        let h = SampledFunction::sample((0..=50).map(|j| j as f64 * 0.04).collect(), |_| 1.0).unwrap();
        assert!((riemann_liouville_integral(&h, 1.0, 1.3).unwrap() - 1.3).abs() < 1e-13);
        let g = SampledFunction::sample(h.grid.clone(), |t| t.sin()).unwrap();
        assert_eq!(riemann_liouville_integral(&g, 0.0, 0.8).unwrap(), g.eval(0.8));
        assert!(riemann_liouville_integral(&g, 0.5, 2.5).is_err());
    }

    #[test]
    fn rl_power_rule() {
        // I^{1/2} t = 1 / Gamma(2.5) at t = 1; piecewise-linear h is exact.
        let h = SampledFunction::sample((0..=10).map(|j| j as f64 * 0.1).collect(), |t| t).unwrap();
        let v = riemann_liouville_integral(&h, 0.5, 1.0).unwrap();
        assert!((v - 0.752_252_778_063_675).abs() < 1e-12, "{v}");
    }

    #[test]
    fn caputo_of_square() {
        let h = SampledFunction::sample(SampledFunction::graded_grid(2.0, 400, 1.0), |t| t * t).unwrap();
        let v = caputo_derivative(&h, 1.5, 1.0).unwrap();
        assert!((v - 2.256_758_334_191_025).abs() < 1e-9, "{v}");
        let c = SampledFunction::sample(h.grid.clone(), |_| 3.0).unwrap();
        assert!(caputo_derivative(&c, 1.7, 1.0).unwrap().abs() < 1e-12);
        assert!(caputo_derivative(&c, 1.7, 2.0).is_err());
    }

    #[test]
    fn pressure_of_zero_data() {
        let v = brute_force_pressure(|_| Complex64::new(0.0, 0.0), 1.5, &[0.1, 0.2], 1.0, 10.0, OracleOrders::default())
            .unwrap();
        assert_eq!(v, 0.0);
    }
}
