//! Special functions: complex gamma, Bessel J of real order, and the
//! one-parameter Mittag-Leffler function on the negative real axis.

mod bessel;
mod gamma;
mod mittag_leffler;

pub use bessel::{bessel_j, bessel_j_orders};
pub use gamma::{gamma, gamma_real, ln_gamma, ln_gamma_abs, ln_sin_pi, recip_gamma};
pub use mittag_leffler::{mittag_leffler, MittagLefflerKernel};
