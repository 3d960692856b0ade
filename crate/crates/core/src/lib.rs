//! Forward simulation and Mellin-transform inversion for the space-time
//! fractional wave equation
//!
//! ```text
//! D_t^alpha p = Laplace p,   p(x, 0) = f(x),   d/dt p(x, 0) = 0,   1 < alpha <= 2
//! ```
//!
//! with `p` observed on the unit sphere or (integrated) on a family of
//! hyperplanes. The modules build on each other bottom-up:
//!
//! * [`specfun`]: gamma, Bessel and Mittag-Leffler functions
//! * [`fraccalc`]: slow sampled-function fractional calculus used as a test oracle
//! * [`mellin`]: log-grid Mellin transforms and their regularized inversion
//! * [`harmonics`]: real spherical harmonics, detector grids, Funk-Hecke
//! * [`forward`]: phantoms and simulated detector data
//! * [`invert`]: mode-wise Mellin inversion and full-field reconstruction
//! * [`selftest`]: fast named invariant checks

pub mod dft;
pub mod error;
pub mod forward;
pub mod fraccalc;
pub mod harmonics;
pub mod invert;
pub mod mellin;
pub mod quadrature;
pub mod selftest;
pub mod specfun;

pub use error::{Error, ErrorKind, Result};
