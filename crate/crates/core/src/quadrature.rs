//! Gauss-Legendre rules, composite panel rules and a double-exponential
//! (exp-sinh) rule for the half line.

use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};

/// An `n`-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        ensure(n >= 1, || "Gauss-Legendre rule needs at least one node".into())?;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }

    /// Append the mapped nodes and weights for [a, b] to `out`.
    pub fn push_panel(&self, a: f64, b: f64, out: &mut QuadratureNodes) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            out.nodes.push(c + h * x);
            out.weights.push(h * w);
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A flat list of quadrature nodes and weights.
#[derive(Debug, Clone, Default)]
pub struct QuadratureNodes {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureNodes {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Composite rule over consecutive breakpoints.
    pub fn composite(breaks: &[f64], rule: &GaussLegendre) -> Result<Self> {
        ensure(breaks.len() >= 2, || "need at least two breakpoints".into())?;
        ensure(breaks.windows(2).all(|w| w[1] > w[0]), || {
            "breakpoints must be strictly increasing".into()
        })?;
        let mut q = QuadratureNodes::default();
        for w in breaks.windows(2) {
            rule.push_panel(w[0], w[1], &mut q);
        }
        Ok(q)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Exp-sinh quadrature of `f` over (0, inf).
///
/// Halves the step until two successive estimates agree to `rel_tol`.
/// `f` may be singular (integrably) at 0 and must decay at infinity.
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, rel_tol: f64) -> Result<f64> {
    let half_pi = 0.5 * PI;
    let mut eval = |u: f64| -> f64 {
        let r = (half_pi * u.sinh()).exp();
        if r == 0.0 || !r.is_finite() {
            return 0.0;
        }
        let v = f(r) * r * half_pi * u.cosh();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let (umin, umax) = (-6.5, 4.0);
    let mut h = 0.5;
    let mut sum = 0.0;
    let mut n = ((umax - umin) / h) as i64;
    for k in 0..=n {
        sum += eval(umin + k as f64 * h);
    }
    let mut estimate = sum * h;
    let mut change = f64::INFINITY;
    for _ in 0..9 {
        h *= 0.5;
        n *= 2;
        // Only the new odd nodes are evaluated.
        for k in (1..n).step_by(2) {
            sum += eval(umin + k as f64 * h);
        }
        let next = sum * h;
        change = (next - estimate).abs();
        estimate = next;
        if change <= rel_tol.max(1e-15) * next.abs() || change < 1e-300 {
            return Ok(estimate);
        }
    }
    Err(Error::NoConvergence {
        what: "exp-sinh quadrature",
        change,
    })
}
