//! The truncated sum over nontrivial zeros approximating `R_{k-1}(x)`.

use num_complex::Complex64;
use serde::Serialize;

use super::corrections::{corrections, CorrectionOptions};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, DoubleDouble};
use crate::zeros::{ZeroRecord, ZeroTable};

/// Snapped heights keep at least this distance from every zero.
pub const MIN_HALF_GAP: f64 = 0.05;

/// Above this `x` the phase `γ ln x` is reduced in double-double.
pub(crate) const EXTENDED_PHASE_ABOVE: f64 = 1.0e6;

#[derive(Debug, Clone, Serialize)]
pub struct ZeroSumResult {
    pub k: u32,
    pub x: f64,
    /// Cutoff actually used: the snapped zero-gap midpoint.
    pub t: f64,
    /// `2 Σ_{0<γ<T} Re[c_ρ(k) x^ρ]`.
    pub value: f64,
    pub n_zeros_used: usize,
    pub envelope: f64,
    pub corrections: f64,
}

/// Largest midpoint `(γ_j + γ_{j+1})/2 ≤ t` whose half-gap is at least
/// [`MIN_HALF_GAP`]. Heights below the first zero are returned unchanged.
pub fn snap_height(table: &ZeroTable, t: f64) -> Result<f64> {
    let first = table.records.first().ok_or(Error::EmptyTable)?.gamma;
    if t < first {
        return Ok(t);
    }
    if t > table.max_gamma {
        return Err(Error::TableTooShort {
            requested: t,
            max_gamma: table.max_gamma,
        });
    }
    let above = table.count_up_to(t);
    // zeros γ_1..γ_above lie at or below t; walk the gaps downwards
    for j in (1..above.min(table.len() - 1) + 1).rev() {
        let (lo, hi) = (table.records[j - 1].gamma, table.records[j].gamma);
        let mid = 0.5 * (lo + hi);
        if mid <= t && 0.5 * (hi - lo) >= MIN_HALF_GAP {
            return Ok(mid);
        }
    }
    Err(Error::Snap { requested: t })
}

/// Envelope with unit constants:
/// `x/T^{k-1} + x^{9/4}/T^k + x^{5/8}/T^{k-7/4} + x^{3/2}/T^{k-7/8}
///  + (ln x)^{k-1} + T^{-(k-2)} (x ln T / T)^{1/2}`.
pub fn zero_sum_envelope(k: u32, x: f64, t: f64) -> f64 {
    let k = k as f64;
    x / t.powf(k - 1.0)
        + x.powf(2.25) / t.powf(k)
        + x.powf(0.625) / t.powf(k - 1.75)
        + x.powf(1.5) / t.powf(k - 0.875)
        + x.ln().powf(k - 1.0)
        + t.powf(-(k - 2.0)) * (x * t.ln() / t).sqrt()
}

/// `2 Σ Re[c_ρ(k) e^{iγ y}]` over `records`, i.e. the zero sum divided by
/// `x^{1/2}` with `y = ln x`. The phase `γy` is formed in double-double
/// when `extended` is set.
pub fn oscillatory_sum(records: &[ZeroRecord], k: u32, y: f64, extended: bool) -> Result<f64> {
    let y_dd = DoubleDouble::from_f64(y);
    oscillatory_sum_dd(records, k, y_dd, extended)
}

fn oscillatory_sum_dd(records: &[ZeroRecord], k: u32, y: DoubleDouble, extended: bool) -> Result<f64> {
    let terms = records
        .iter()
        .map(|r| Ok((r.gamma, r.coefficient(k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(oscillatory_terms(&terms, y, extended))
}

/// `2 Σ Re[c e^{iγy}]` over precomputed `(γ, c)` pairs.
pub(crate) fn oscillatory_terms(terms: &[(f64, Complex64)], y: DoubleDouble, extended: bool) -> f64 {
    let mut acc = CompensatedSum::new();
    for &(gamma, c) in terms {
        let phase = if extended {
            y.mul_f64(gamma).rem_tau()
        } else {
            gamma * y.to_f64()
        };
        let (s, co) = phase.sin_cos();
        acc.add(c.re * co - c.im * s);
    }
    2.0 * acc.value()
}

pub fn zero_sum(table: &ZeroTable, k: u32, x: f64, t: f64) -> Result<ZeroSumResult> {
    zero_sum_with(table, k, x, t, &CorrectionOptions::default())
}

pub fn zero_sum_with(table: &ZeroTable, k: u32, x: f64, t: f64, opts: &CorrectionOptions) -> Result<ZeroSumResult> {
    crate::totient::check_k(k)?;
    if k < 2 {
        return Err(Error::domain("the explicit formula needs k >= 2"));
    }
    if !(x >= 2.0 && t >= 2.0) {
        return Err(Error::domain(format!("need x >= 2 and T >= 2, got x = {x}, T = {t}")));
    }
    let snapped = snap_height(table, t)?;
    let records = table.enriched_below(snapped)?;
    let extended = x > EXTENDED_PHASE_ABOVE;
    let log_x = if extended {
        DoubleDouble::from_f64(x).ln()
    } else {
        DoubleDouble::from_f64(x.ln())
    };
    let value = x.sqrt() * oscillatory_sum_dd(records, k, log_x, extended)?;
    let corr = corrections(k, log_x.to_f64(), opts)?;
    Ok(ZeroSumResult {
        k,
        x,
        t: snapped,
        value,
        n_zeros_used: records.len(),
        envelope: zero_sum_envelope(k, x, snapped),
        corrections: corr.total,
    })
}
