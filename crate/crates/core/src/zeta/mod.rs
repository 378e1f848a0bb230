//! The Riemann zeta function, its derivative, and the Hardy Z function.
//!
//! Right of the critical line the Euler–Maclaurin expansion is used
//! directly. Left of it the functional equation
//! `ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)` carries values over from
//! `1 - s`, with the exponentially large sine and exponentially small gamma
//! factor combined in log space.

mod euler_maclaurin;
mod gamma;
mod hardy;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use euler_maclaurin::{cutoff, CORRECTION_ORDER};
pub use gamma::{digamma, log_gamma};
pub use hardy::{hardy_z, locate_zeros, refine_zero, theta, GRID_STEP, REFINE_TOL};

/// Largest |Im s| served by the Euler–Maclaurin route.
pub const MAX_HEIGHT: f64 = 1.0e4;

/// Smallest accuracy request the expansion can honour in f64.
pub const MIN_TARGET: f64 = 1.0e-14;

const DEFAULT_TARGET: f64 = 1.0e-10;

/// Points closer than this to `s = 0` skip the reflection, whose `ζ(1-s)`
/// factor would sit on the pole.
const NEAR_ORIGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub const fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

impl From<f64> for ComplexPoint {
    fn from(sigma: f64) -> Self {
        Self { sigma, t: 0.0 }
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { sigma: z.re, t: z.im }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_c64()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalAccuracy {
    pub target_abs_error: f64,
    /// Euler–Maclaurin cutoff `N`.
    pub achieved_terms: usize,
    pub correction_order: usize,
}

impl EvalAccuracy {
    /// The default plan at height `t`.
    pub fn for_height(t: f64) -> Self {
        Self {
            target_abs_error: DEFAULT_TARGET,
            achieved_terms: cutoff(t),
            correction_order: CORRECTION_ORDER,
        }
    }

    fn validate(&self, t: f64) -> Result<()> {
        if !(self.target_abs_error >= MIN_TARGET) {
            return Err(Error::domain(format!(
                "target error {} is below the floor {MIN_TARGET:e}",
                self.target_abs_error
            )));
        }
        let floor = (t.abs() / 2.0).ceil() as usize + 10;
        if self.achieved_terms < floor {
            return Err(Error::domain(format!(
                "cutoff N = {} is below ceil(|t|/2) + 10 = {floor}",
                self.achieved_terms
            )));
        }
        if self.correction_order != CORRECTION_ORDER {
            return Err(Error::domain(format!(
                "only {CORRECTION_ORDER} correction terms are implemented"
            )));
        }
        Ok(())
    }
}

fn check_height(s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain(format!("non-finite argument {s}")));
    }
    if s.im.abs() > MAX_HEIGHT {
        return Err(Error::AccuracyUnreachable {
            t: s.im,
            budget: MAX_HEIGHT,
        });
    }
    Ok(())
}

fn check_pole(s: Complex64) -> Result<()> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    Ok(())
}

fn use_reflection(s: Complex64) -> bool {
    s.re < 0.5 && s.norm() >= NEAR_ORIGIN
}

/// `e^{-|Im z|} sin z` and `e^{-|Im z|} cos z`.
fn scaled_sin_cos(z: Complex64) -> (Complex64, Complex64) {
    let a = z.im.abs();
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let e2 = (-2.0 * a).exp();
    let ch = 0.5 * (1.0 + e2);
    let sh = 0.5 * sign * (1.0 - e2);
    let (sx, cx) = z.re.sin_cos();
    (Complex64::new(sx * ch, cx * sh), Complex64::new(cx * ch, -sx * sh))
}

/// Pieces of the functional equation at `s`:
/// `A(s) = 2^s π^{s-1} Γ(1-s)` pre-multiplied by `e^{|Im πs/2|}`, and the
/// scaled sine and cosine of `πs/2`.
struct Reflection {
    scaled_factor: Complex64,
    sin: Complex64,
    cos: Complex64,
}

fn reflection(s: Complex64) -> Result<Reflection> {
    use std::f64::consts::{LN_2, PI};
    let z = s * (PI / 2.0);
    let log_a = s * LN_2 + (s - 1.0) * PI.ln() + log_gamma(1.0 - s)?;
    let (sin, cos) = scaled_sin_cos(z);
    Ok(Reflection {
        scaled_factor: (log_a + z.im.abs()).exp(),
        sin,
        cos,
    })
}

/// ζ(s) through the functional equation, with `ζ(1-s)` taken from the
/// Euler–Maclaurin expansion. Valid wherever `1 - s` is, so it can be
/// compared with the direct route on the strip `1/2 ≤ Re s ≤ 1`.
pub fn zeta_reflected(s: impl Into<ComplexPoint>) -> Result<Complex64> {
    let s = s.into().to_c64();
    check_height(s)?;
    check_pole(s)?;
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("reflection is singular at s = 0"));
    }
    let r = reflection(s)?;
    let w = 1.0 - s;
    let z1 = euler_maclaurin::zeta_em(w, cutoff(w.im));
    Ok(r.scaled_factor * r.sin * z1)
}

/// ζ(s) by the Euler–Maclaurin expansion alone, at the default cutoff.
pub fn zeta_direct(s: impl Into<ComplexPoint>) -> Result<Complex64> {
    let s = s.into().to_c64();
    check_height(s)?;
    check_pole(s)?;
    Ok(euler_maclaurin::zeta_em(s, cutoff(s.im)))
}

/// ζ(s) with the default accuracy plan for the height of `s`.
pub fn zeta(s: impl Into<ComplexPoint>) -> Result<Complex64> {
    let s = s.into();
    zeta_with_accuracy(s, &EvalAccuracy::for_height(s.t))
}

pub fn zeta_with_accuracy(s: impl Into<ComplexPoint>, acc: &EvalAccuracy) -> Result<Complex64> {
    let s = s.into().to_c64();
    check_height(s)?;
    check_pole(s)?;
    acc.validate(s.im)?;
    if use_reflection(s) {
        let r = reflection(s)?;
        let w = 1.0 - s;
        let n = acc.achieved_terms.max(cutoff(w.im));
        let z1 = euler_maclaurin::zeta_em(w, n);
        Ok(r.scaled_factor * r.sin * z1)
    } else {
        Ok(euler_maclaurin::zeta_em(s, acc.achieved_terms))
    }
}

/// ζ'(s) with the default accuracy plan.
pub fn zeta_deriv(s: impl Into<ComplexPoint>) -> Result<Complex64> {
    let s = s.into();
    zeta_deriv_with_accuracy(s, &EvalAccuracy::for_height(s.t))
}

pub fn zeta_deriv_with_accuracy(s: impl Into<ComplexPoint>, acc: &EvalAccuracy) -> Result<Complex64> {
    Ok(zeta_and_deriv_with_accuracy(s, acc)?.1)
}

/// `(ζ(s), ζ'(s))` from a single expansion.
pub fn zeta_and_deriv(s: impl Into<ComplexPoint>) -> Result<(Complex64, Complex64)> {
    let s = s.into();
    zeta_and_deriv_with_accuracy(s, &EvalAccuracy::for_height(s.t))
}

pub fn zeta_and_deriv_with_accuracy(s: impl Into<ComplexPoint>, acc: &EvalAccuracy) -> Result<(Complex64, Complex64)> {
    let s = s.into().to_c64();
    check_height(s)?;
    check_pole(s)?;
    acc.validate(s.im)?;
    if !use_reflection(s) {
        return Ok(euler_maclaurin::zeta_and_deriv_em(s, acc.achieved_terms));
    }
    // ζ(s) = A(s) sin(πs/2) ζ(1-s) with A'/A = ln 2π - ψ(1-s)
    let r = reflection(s)?;
    let w = 1.0 - s;
    let n = acc.achieved_terms.max(cutoff(w.im));
    let (z1, dz1) = euler_maclaurin::zeta_and_deriv_em(w, n);
    let log_deriv = std::f64::consts::TAU.ln() - digamma(w)?;
    let value = r.scaled_factor * r.sin * z1;
    let deriv = r.scaled_factor * (log_deriv * r.sin * z1 + std::f64::consts::FRAC_PI_2 * r.cos * z1 - r.sin * dz1);
    Ok((value, deriv))
}

/// Modulus below which `ζ(s)` is treated as zero in a denominator.
pub const QUOTIENT_FLOOR: f64 = 1.0e-12;

/// `ζ(s-1)/ζ(s)`, the Dirichlet series of Euler's totient.
pub fn dirichlet_quotient(s: impl Into<ComplexPoint>) -> Result<Complex64> {
    let s = s.into().to_c64();
    if s.im == 0.0 && (s.re == 1.0 || s.re == 2.0) {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    let den = zeta(s)?;
    if den.norm() < QUOTIENT_FLOOR {
        return Err(Error::NearZeroDenominator {
            re: s.re,
            im: s.im,
            modulus: den.norm(),
        });
    }
    Ok(zeta(s - 1.0)? / den)
}
