//! Complex gamma function: Lanczos approximation (g = 607/128, 15 terms)
//! with the reflection formula for Re z < 1/2.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];
// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_pole(z: Complex64) -> Result<()> {
    let nearest = z.re.round();
    if nearest <= 0.0 && (z.re - nearest).abs() < 1e-12 && z.im.abs() < 1e-12 {
        return Err(Error::Pole(z));
    }
    Ok(())
}

/// ln Gamma(z) for Re z >= 1/2 (no reflection).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    (zm + 0.5) * t.ln() - t + a.ln() + LN_SQRT_2PI
}

/// ln sin(pi z), computed without overflow for large |Im z|.
///
/// The imaginary part is only determined modulo 2 pi.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i)
        -i * PI * z + ((2.0 * i * PI * z).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() - (2.0 * i).ln()
    }
}

/// Complex ln Gamma(z); the imaginary part is only meaningful modulo 2 pi.
///
/// Errors with [`Error::Pole`] at non-positive integers.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        let lnpi = PI.ln();
        Ok(Complex64::new(lnpi, 0.0) - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    }
}

/// Complex Gamma(z).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z).exp())
    } else {
        let s = (z * PI).sin();
        if s.norm() > 1e300 || !s.is_finite() {
            return Ok(ln_gamma(z)?.exp());
        }
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    }
}

/// Real Gamma(x).
pub fn gamma_real(x: f64) -> Result<f64> {
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}

/// ln |Gamma(x)| for real x.
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    Ok(ln_gamma(Complex64::new(x, 0.0))?.re)
}

/// 1 / Gamma(x), which is entire; zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    let nearest = x.round();
    if nearest <= 0.0 && (x - nearest).abs() < 1e-14 {
        return 0.0;
    }
    match gamma_real(x) {
        Ok(g) if g.is_finite() => 1.0 / g,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..20 {
            let g = gamma_real(n as f64).unwrap();
            assert!((g - f).abs() <= 1e-14 * f, "n = {n}: {g} vs {f}");
            f *= n as f64;
        }
    }

    #[test]
    fn half_integer() {
        let g = gamma_real(0.5).unwrap();
        assert!((g - PI.sqrt()).abs() < 1e-15);
        let g = gamma_real(-1.5).unwrap();
        assert!((g - 4.0 * PI.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for n in 0..5 {
            assert!(matches!(
                gamma(Complex64::new(-(n as f64), 0.0)),
                Err(Error::Pole(_))
            ));
        }
    }

    #[test]
    fn large_imaginary_part_via_logs() {
        // |Gamma(1/2 + i y)|^2 = pi / cosh(pi y)
        let y = 300.0;
        let lg = ln_gamma(Complex64::new(0.5, y)).unwrap();
        let expect = 0.5 * (PI.ln() - (PI * y - 2f64.ln()));
        assert!((lg.re - expect).abs() < 1e-10);
        let lg = ln_gamma(Complex64::new(0.25, -400.0)).unwrap();
        assert!(lg.re.is_finite());
    }
}
