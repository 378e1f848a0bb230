//! Euler–Maclaurin summation for ζ(s) and ζ'(s).
//!
//! ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//!        + Σ_{j=1}^{p} B_{2j}/(2j)! · s(s+1)···(s+2j-2) · N^{-s-2j+1} + E_p
//!
//! The derivative differentiates every piece analytically.

use num_complex::Complex64;

/// B_{2j}/(2j)! for j = 1..=8.
const CORRECTION: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

pub const CORRECTION_ORDER: usize = CORRECTION.len();

/// Cutoff `N = max(50, ⌈1.3|t|⌉)`.
pub fn cutoff(t: f64) -> usize {
    (1.3 * t.abs()).ceil().max(50.0) as usize
}

#[inline]
fn n_pow_neg_s(log_n: f64, s: Complex64) -> Complex64 {
    let mag = (-s.re * log_n).exp();
    let (sin, cos) = (s.im * log_n).sin_cos();
    Complex64::new(mag * cos, -mag * sin)
}

/// ζ(s) with `n_terms` explicit terms; valid for Re(s) > -15, s ≠ 1.
pub fn zeta_em(s: Complex64, n_terms: usize) -> Complex64 {
    let mut head_re = 0.0;
    let mut head_im = 0.0;
    for n in 1..n_terms {
        let v = n_pow_neg_s((n as f64).ln(), s);
        head_re += v.re;
        head_im += v.im;
    }
    let big_n = n_terms as f64;
    let log_n = big_n.ln();
    let n_s = n_pow_neg_s(log_n, s);
    let mut acc = Complex64::new(head_re, head_im) + n_s * big_n / (s - 1.0) + n_s * 0.5;

    let mut poly = s;
    let mut pow = n_s / big_n;
    let inv_n2 = 1.0 / (big_n * big_n);
    for (j, &coef) in CORRECTION.iter().enumerate() {
        acc += poly * pow * coef;
        let a = s + (2 * j + 1) as f64;
        let b = s + (2 * j + 2) as f64;
        poly *= a * b;
        pow *= inv_n2;
    }
    acc
}

/// (ζ(s), ζ'(s)) from the same expansion.
pub fn zeta_and_deriv_em(s: Complex64, n_terms: usize) -> (Complex64, Complex64) {
    let mut head = Complex64::new(0.0, 0.0);
    let mut head_d = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        let log_n = (n as f64).ln();
        let v = n_pow_neg_s(log_n, s);
        head += v;
        head_d -= v * log_n;
    }
    let big_n = n_terms as f64;
    let log_n = big_n.ln();
    let n_s = n_pow_neg_s(log_n, s);
    let inv_sm1 = (s - 1.0).inv();

    let tail = n_s * big_n * inv_sm1;
    let mut value = head + tail + n_s * 0.5;
    let mut deriv = head_d - tail * log_n - tail * inv_sm1 - n_s * (0.5 * log_n);

    // poly = s(s+1)...(s+2j-2), carried with its derivative
    let mut poly = s;
    let mut poly_d = Complex64::new(1.0, 0.0);
    let mut pow = n_s / big_n;
    let inv_n2 = 1.0 / (big_n * big_n);
    for (j, &coef) in CORRECTION.iter().enumerate() {
        value += poly * pow * coef;
        deriv += (poly_d - poly * log_n) * pow * coef;
        for shift in [(2 * j + 1) as f64, (2 * j + 2) as f64] {
            let factor = s + shift;
            poly_d = poly_d * factor + poly;
            poly *= factor;
        }
        pow *= inv_n2;
    }
    (value, deriv)
}
