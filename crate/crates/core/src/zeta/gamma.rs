//! Complex log-gamma and digamma via upward recurrence and Stirling's series.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_{2n} for n = 1..=10.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const STIRLING_MIN_MODULUS: f64 = 12.0;
const HALF_LN_TAU: f64 = 0.918_938_533_204_672_8;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(())
}

/// Number of unit shifts that move `z` into the Stirling region.
fn shift_count(z: Complex64) -> usize {
    let mut m = 0usize;
    while z.re + (m as f64) < 1.0 || Complex64::new(z.re + m as f64, z.im).norm() < STIRLING_MIN_MODULUS {
        m += 1;
    }
    m
}

/// Principal branch of `log Γ(z)`: continuous off the negative real axis
/// and real on the positive real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let m = shift_count(z);
    let mut shifted = z;
    let mut log_prod = Complex64::new(0.0, 0.0);
    for _ in 0..m {
        log_prod += shifted.ln();
        shifted += 1.0;
    }
    Ok(stirling(shifted) - log_prod)
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (i, &b) in BERNOULLI.iter().enumerate() {
        let n = (i + 1) as f64;
        series += pow * (b / (2.0 * n * (2.0 * n - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TAU + series
}

/// `ψ(z) = Γ'(z)/Γ(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let m = shift_count(z);
    let mut shifted = z;
    let mut correction = Complex64::new(0.0, 0.0);
    for _ in 0..m {
        correction += shifted.inv();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (i, &b) in BERNOULLI.iter().enumerate() {
        let n = (i + 1) as f64;
        series += pow * (b / (2.0 * n));
        pow *= inv2;
    }
    Ok(shifted.ln() - inv * 0.5 - series - correction)
}
