//! Centered discrete Fourier transforms on uniform grids.
//!
//! A grid of `count` points with spacing `d` has nodes u_j = (j - count/2) d
//! and dual frequencies eta_k = (k - count/2) 2 pi / (count d). The forward
//! transform approximates int g(u) e^{-i eta u} du, the inverse approximates
//! (1 / 2 pi) int G(eta) e^{i eta u} d eta, per axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{ensure, Result};

/// Nodes of a centered uniform grid.
pub fn centered_nodes(count: usize, spacing: f64) -> Vec<f64> {
    let half = (count / 2) as f64;
    (0..count).map(|j| (j as f64 - half) * spacing).collect()
}

/// Spacing of the frequency grid dual to (`count`, `spacing`).
pub fn dual_spacing(count: usize, spacing: f64) -> f64 {
    2.0 * PI / (count as f64 * spacing)
}

fn rotate(buf: &mut [Complex64], count: usize, stride: usize, offset: usize, scratch: &mut Vec<Complex64>, fwd: bool) {
    let half = count / 2;
    scratch.clear();
    scratch.extend((0..count).map(|j| buf[offset + j * stride]));
    for j in 0..count {
        let src = if fwd { (j + half) % count } else { (j + count - half) % count };
        buf[offset + j * stride] = scratch[src];
    }
}

/// In-place centered transform of an array with row-major `dims`, equal
/// `spacing` on every axis. `inverse` selects the sign and scaling.
pub fn centered_dft(values: &mut [Complex64], dims: &[usize], spacing: f64, inverse: bool) -> Result<()> {
    let total: usize = dims.iter().product();
    ensure(values.len() == total, || format!("{} values for shape {dims:?}", values.len()))?;
    ensure(dims.iter().all(|&d| d >= 2 && d % 2 == 0), || {
        "every axis needs an even number of points".into()
    })?;
    let mut planner = FftPlanner::<f64>::new();
    let mut scratch = Vec::new();
    let mut line = Vec::new();
    for (axis, &count) in dims.iter().enumerate() {
        let stride: usize = dims[axis + 1..].iter().product();
        let fft = if inverse {
            planner.plan_fft_inverse(count)
        } else {
            planner.plan_fft_forward(count)
        };
        let scale = if inverse {
            dual_spacing(count, spacing) / (2.0 * PI)
        } else {
            spacing
        };
        let outer = total / (count * stride);
        for o in 0..outer {
            for s in 0..stride {
                let offset = o * count * stride + s;
                // shift so the node at index count/2 (u = 0) sits at 0
                rotate(values, count, stride, offset, &mut scratch, true);
                line.clear();
                line.extend((0..count).map(|j| values[offset + j * stride]));
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    values[offset + j * stride] = v * scale;
                }
                rotate(values, count, stride, offset, &mut scratch, false);
            }
        }
    }
    Ok(())
}
