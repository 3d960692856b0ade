//! Bessel functions of the first kind J_nu(x), real order nu >= 0, x >= 0.
//!
//! Power series for x <= 5, where it loses at most one digit to cancellation.
//! Beyond that, Miller's backward recurrence started well above max(x, nu),
//! normalized with the Neumann sum
//! (x/2)^mu = sum_k (mu + 2k) Gamma(mu + k) / k! J_{mu+2k}(x), mu = frac(nu).

use super::gamma::ln_gamma_abs;
use crate::error::{ensure, Result};

const SERIES_MAX_X: f64 = 5.0;

/// J_nu(x) for nu >= 0, x >= 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_MAX_X {
        return Ok(series(nu, x));
    }
    let mut out = [0.0];
    miller(nu, x, &mut out);
    Ok(out[0])
}

/// J_{nu0 + k}(x) for k = 0 .. out.len().
pub fn bessel_j_orders(nu0: f64, x: f64, out: &mut [f64]) -> Result<()> {
    check_args(nu0, x)?;
    if out.is_empty() {
        return Ok(());
    }
    if x == 0.0 {
        for (k, o) in out.iter_mut().enumerate() {
            *o = if nu0 + k as f64 == 0.0 { 1.0 } else { 0.0 };
        }
        return Ok(());
    }
    if x <= SERIES_MAX_X {
        for (k, o) in out.iter_mut().enumerate() {
            *o = series(nu0 + k as f64, x);
        }
        return Ok(());
    }
    miller(nu0, x, out);
    Ok(())
}

fn check_args(nu: f64, x: f64) -> Result<()> {
    ensure(nu.is_finite() && nu >= 0.0, || {
        format!("Bessel order must be finite and non-negative, got {nu}")
    })?;
    ensure(x.is_finite() && x >= 0.0, || {
        format!("Bessel argument must be finite and non-negative, got {x}")
    })
}

/// Plain power series; fine for small x or nu >> x.
pub(crate) fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu * half.ln() - ln_gamma_abs(nu + 1.0).unwrap_or(f64::INFINITY)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while k < 1000.0 {
        term *= -q / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && k > half {
            break;
        }
        k += 1.0;
    }
    lead * sum
}

fn miller(nu0: f64, x: f64, out: &mut [f64]) {
    let mu = nu0.fract();
    let base = nu0.floor() as usize;
    let top = base + out.len() - 1;
    let start = {
        let s = (top as f64).max(x) + 30.0 + 3.0 * x.sqrt();
        let s = s.ceil() as usize;
        s + s % 2 // even, so the Neumann sum ends on the same parity as 0
    };

    let mut vals = vec![0.0; top + 1];
    let mut next = 0.0; // J_{m+1}
    let mut cur = 1e-280; // J_m
    // Neumann weights c_k = (mu + 2k) g_k with g_k = Gamma(mu + k) / k!,
    // stepped downward via g_{k-1} = g_k k / (mu + k - 1).
    let k_top = start / 2;
    let mut g = if mu == 0.0 {
        2.0
    } else {
        (ln_gamma_abs(mu + k_top as f64).unwrap_or(0.0) - ln_gamma_abs(k_top as f64 + 1.0).unwrap_or(0.0)).exp()
    };
    let weight = |k: usize, g: f64| -> f64 {
        if mu == 0.0 {
            if k == 0 {
                1.0
            } else {
                2.0
            }
        } else {
            (mu + 2.0 * k as f64) * g
        }
    };
    let mut norm = weight(k_top, g) * cur;
    if start <= top {
        vals[start] = cur;
    }
    for m in (1..=start).rev() {
        let order = mu + m as f64;
        let prev = 2.0 * order / x * cur - next;
        next = cur;
        cur = prev;
        let idx = m - 1;
        if idx <= top {
            vals[idx] = cur;
        }
        if idx % 2 == 0 {
            let k = idx / 2;
            if mu != 0.0 {
                g *= (k + 1) as f64 / (mu + k as f64);
            }
            norm += weight(k, g) * cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            for v in vals.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let target = if mu == 0.0 { 1.0 } else { (0.5 * x).powf(mu) };
    let scale = target / norm;
    for (o, v) in out.iter_mut().zip(&vals[base..=top]) {
        *o = v * scale;
    }
}
