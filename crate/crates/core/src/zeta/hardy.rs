//! Hardy's Z function and zero location on the critical line.

use num_complex::Complex64;

use super::{log_gamma, zeta, MAX_HEIGHT};
use crate::error::{Error, Result};

/// Grid spacing for sign-change detection.
pub const GRID_STEP: f64 = 0.05;
/// Bracket width at which bisection stops.
pub const REFINE_TOL: f64 = 1.0e-9;

const IMAG_RESIDUE_TOL: f64 = 1.0e-9;

/// Riemann–Siegel theta: `Im log Γ(1/4 + it/2) - (t/2) ln π`.
pub fn theta(t: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(0.25, 0.5 * t))?;
    Ok(lg.im - 0.5 * t * std::f64::consts::PI.ln())
}

/// `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real for real `t`.
///
/// The imaginary part of the computed product is checked against a
/// residue tolerance scaled by `|ζ|`; exceeding it signals lost accuracy.
pub fn hardy_z(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("hardy_z needs t > 0, got {t}")));
    }
    if t > MAX_HEIGHT {
        return Err(Error::AccuracyUnreachable { t, budget: MAX_HEIGHT });
    }
    let z = zeta(Complex64::new(0.5, t))?;
    let (s, c) = theta(t)?.sin_cos();
    let v = Complex64::new(c, s) * z;
    if v.im.abs() > IMAG_RESIDUE_TOL * z.norm().max(1.0) {
        return Err(Error::Precision {
            estimate: v.im.abs(),
            magnitude: v.re.abs(),
        });
    }
    Ok(v.re)
}

fn bisect(mut lo: f64, mut hi: f64, mut f_lo: f64, mut f_hi: f64) -> Result<f64> {
    while hi - lo > REFINE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = hardy_z(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    // Z is linear to O(1e-18) across the final bracket; one secant step
    // recovers the digits below the bisection tolerance.
    let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    Ok(if secant.is_finite() {
        secant.clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    })
}

/// Refine a sign change of `Z` inside `[lo, hi]` to within [`REFINE_TOL`].
/// Returns `None` when `Z` has the same sign at both ends.
pub fn refine_zero(lo: f64, hi: f64) -> Result<Option<f64>> {
    let f_lo = hardy_z(lo)?;
    let f_hi = hardy_z(hi)?;
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Ok(None);
    }
    bisect(lo, hi, f_lo, f_hi).map(Some)
}

/// Zeros of `Z` in `(t_min, t_max]` found as sign changes on a grid of
/// step [`GRID_STEP`], each refined by bisection.
///
/// Close pairs inside one grid cell cancel and are missed; below the height
/// budget the smallest zero gap is well above the grid step.
pub fn locate_zeros(t_min: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(t_min >= 0.0 && t_min < t_max && t_max <= MAX_HEIGHT) {
        return Err(Error::domain(format!(
            "locate_zeros needs 0 <= t_min < t_max <= {MAX_HEIGHT}, got ({t_min}, {t_max})"
        )));
    }
    // Z has no zeros below the first one near 14.13, so start the grid there
    // when possible; this also keeps clear of t = 0.
    let start = t_min.max(10.0);
    if start >= t_max {
        return Ok(Vec::new());
    }
    let steps = ((t_max - start) / GRID_STEP).ceil() as usize;
    let mut zeros = Vec::new();
    let mut prev_t = start;
    let mut prev_f = hardy_z(start)?;
    for i in 1..=steps {
        let t = (start + i as f64 * GRID_STEP).min(t_max);
        let f = hardy_z(t)?;
        if f == 0.0 {
            zeros.push(t);
        } else if prev_f != 0.0 && (f > 0.0) != (prev_f > 0.0) {
            zeros.push(bisect(prev_t, t, prev_f, f)?);
        }
        prev_t = t;
        prev_f = f;
    }
    zeros.dedup_by(|a, b| (*a - *b).abs() < REFINE_TOL);
    Ok(zeros)
}
