//! Residues of `ζ(s-1) x^s / (ζ(s) s^k)` at `s = 0` and at the trivial
//! zeros `s = -2m`.
//!
//! Everything takes `L = ln x` so that heights like `x = e^{10⁴}` never
//! materialize.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zeta;

/// Default circle radius for the residue at the origin.
pub const RESIDUE_RADIUS: f64 = 0.25;
/// Trapezoid nodes on the circle.
pub const RESIDUE_NODES: usize = 128;
/// Above this `r·L` the factor `e^{sL}` varies too much around the circle
/// and the Taylor route takes over.
const DIRECT_ROUTE_LIMIT: f64 = 8.0;
/// Radius for the Taylor coefficients of `g`; the nearest singularities
/// of `g(s) = ζ(s-1)/ζ(s)` are at `s = ±2`.
const TAYLOR_RADIUS: f64 = 0.5;
const TAYLOR_ORDER: usize = 8;
const MAX_TRIVIAL: u32 = 20;

/// Denominator of the trivial-zero terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrivialDenominator {
    /// `(-2m)^k`, the residue of `x^s/s^k` at a simple pole of `1/ζ`.
    #[default]
    PowerK,
    /// `(-2m)^2` regardless of `k`.
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionOptions {
    pub m: u32,
    pub denominator: TrivialDenominator,
    pub radius: f64,
}

impl Default for CorrectionOptions {
    fn default() -> Self {
        Self {
            m: 5,
            denominator: TrivialDenominator::PowerK,
            radius: RESIDUE_RADIUS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corrections {
    pub residue_at_zero: f64,
    pub trivial: f64,
    pub total: f64,
}

fn g(s: Complex64) -> Result<Complex64> {
    zeta::dirichlet_quotient(s)
}

/// `(1/2πi) ∮_{|s|=r} g(s) e^{sL} s^{-k} ds` by the trapezoid rule.
pub fn residue_at_zero_circle(k: u32, log_x: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::domain(format!(
            "residue radius must lie in (0, 1), got {radius}"
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..RESIDUE_NODES {
        let s = Complex64::from_polar(radius, TAU * j as f64 / RESIDUE_NODES as f64);
        // ds = i s dθ, so the integrand is g e^{sL} s^{1-k} / 2π
        acc += g(s)? * (s * log_x).exp() / s.powu(k - 1);
    }
    Ok(acc.re / RESIDUE_NODES as f64)
}

/// Taylor coefficients `g_n` of `g` at the origin, `n < 8`.
fn taylor_coefficients() -> Result<&'static [f64; TAYLOR_ORDER]> {
    static COEF: OnceLock<std::result::Result<[f64; TAYLOR_ORDER], String>> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut out = [0.0; TAYLOR_ORDER];
        let n_nodes = RESIDUE_NODES;
        let mut values = Vec::with_capacity(n_nodes);
        for j in 0..n_nodes {
            let theta = TAU * j as f64 / n_nodes as f64;
            let s = Complex64::from_polar(TAYLOR_RADIUS, theta);
            values.push((theta, g(s).map_err(|e| e.to_string())?));
        }
        for (n, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(theta, v) in &values {
                acc += v * Complex64::from_polar(1.0, -(n as f64) * theta);
            }
            // g is real on the real axis, so its coefficients are real
            *slot = acc.re / (n_nodes as f64 * TAYLOR_RADIUS.powi(n as i32));
        }
        Ok(out)
    })
    .as_ref()
    .map_err(|e| Error::domain(format!("Taylor coefficients of zeta(s-1)/zeta(s): {e}")))
}

/// `Σ_{j<k} g_{k-1-j} L^j / j!`: the same residue, valid for any `L`.
pub fn residue_at_zero_taylor(k: u32, log_x: f64) -> Result<f64> {
    if k as usize > TAYLOR_ORDER {
        return Err(Error::domain(format!("k = {k} exceeds the stored Taylor order")));
    }
    let coef = taylor_coefficients()?;
    let mut acc = 0.0;
    let mut power = 1.0;
    for j in 0..k as usize {
        acc += coef[k as usize - 1 - j] * power;
        power *= log_x / (j + 1) as f64;
    }
    Ok(acc)
}

pub fn residue_at_zero(k: u32, log_x: f64, radius: f64) -> Result<f64> {
    if radius * log_x.abs() <= DIRECT_ROUTE_LIMIT {
        residue_at_zero_circle(k, log_x, radius)
    } else {
        residue_at_zero_taylor(k, log_x)
    }
}

/// `ζ(-2m-1)/ζ'(-2m)` for `m = 1..=20`.
fn trivial_ratios() -> Result<&'static [f64]> {
    static RATIOS: OnceLock<std::result::Result<Vec<f64>, String>> = OnceLock::new();
    RATIOS
        .get_or_init(|| {
            (1..=MAX_TRIVIAL)
                .map(|m| {
                    let num = zeta::zeta(-(2.0 * m as f64) - 1.0)?;
                    let den = zeta::zeta_deriv(-(2.0 * m as f64))?;
                    Ok((num / den).re)
                })
                .collect::<Result<Vec<f64>>>()
                .map_err(|e| e.to_string())
        })
        .as_ref()
        .map(|v| v.as_slice())
        .map_err(|e| Error::domain(format!("trivial-zero ratios: {e}")))
}

/// `Σ_{m=1}^{M} ζ(-2m-1)/ζ'(-2m) · x^{-2m} / d_m` with `d_m` per `denominator`.
pub fn trivial_zero_sum(k: u32, log_x: f64, m: u32, denominator: TrivialDenominator) -> Result<f64> {
    if m > MAX_TRIVIAL {
        return Err(Error::domain(format!(
            "at most {MAX_TRIVIAL} trivial zeros are tabulated"
        )));
    }
    let ratios = trivial_ratios()?;
    let power = match denominator {
        TrivialDenominator::PowerK => k as i32,
        TrivialDenominator::Square => 2,
    };
    let mut acc = 0.0;
    for mm in 1..=m {
        let two_m = 2.0 * mm as f64;
        acc += ratios[mm as usize - 1] * (-two_m * log_x).exp() / (-two_m).powi(power);
    }
    Ok(acc)
}

/// Residue at the origin plus the first `M` trivial-zero terms.
pub fn corrections(k: u32, log_x: f64, opts: &CorrectionOptions) -> Result<Corrections> {
    crate::totient::check_k(k)?;
    if k < 2 {
        return Err(Error::domain("corrections are defined for k >= 2"));
    }
    if !(log_x >= std::f64::consts::LN_2 * (1.0 - 1e-15)) {
        return Err(Error::domain(format!("x must be >= 2, got ln x = {log_x}")));
    }
    let r0 = residue_at_zero(k, log_x, opts.radius)?;
    let trivial = trivial_zero_sum(k, log_x, opts.m, opts.denominator)?;
    Ok(Corrections {
        residue_at_zero: r0,
        trivial,
        total: r0 + trivial,
    })
}
