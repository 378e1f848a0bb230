//! Direct error terms against zero sums over grids of `x` and `T`.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::zero_sum::{snap_height, zero_sum_with};
use super::CorrectionOptions;
use crate::error::Result;
use crate::numeric::{fmt17, linear_fit};
use crate::totient::ErrorTermValue;
use crate::zeros::ZeroTable;
use crate::zeta;

pub const RESIDUAL_CSV_HEADER: &str = "k,x,T,n_zeros,R_direct,zero_sum,corrections,residual,envelope,ratio";

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub k: u32,
    pub x: f64,
    pub t: f64,
    pub n_zeros: usize,
    pub r_direct: f64,
    pub zero_sum: f64,
    pub corrections: f64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
}

/// `max_{σ ∈ [-1/4, 2]} |ζ(σ-1+iT)/ζ(σ+iT)|` at one height.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientScanRow {
    pub t: f64,
    pub max_quotient: f64,
    pub argmax_sigma: f64,
    pub min_abs_zeta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub k: u32,
    pub rows: Vec<ResidualRow>,
    /// Slope of `ln residual` against `ln T`, one per `x` with at least two
    /// distinct heights.
    pub exponents: Vec<(f64, f64)>,
    /// Pooled slope of `ln residual` against `ln T` with a separate
    /// intercept per `x`; the envelope's leading term predicts `-(k-1)`.
    pub fitted_exponent: Option<f64>,
    pub quotient_scan: Vec<QuotientScanRow>,
}

const SCAN_STEP: f64 = 0.01;

pub fn quotient_scan(t: f64) -> Result<QuotientScanRow> {
    let mut best = QuotientScanRow {
        t,
        max_quotient: 0.0,
        argmax_sigma: -0.25,
        min_abs_zeta: f64::INFINITY,
    };
    let steps = (2.25 / SCAN_STEP).round() as usize;
    for i in 0..=steps {
        let sigma = -0.25 + i as f64 * SCAN_STEP;
        let den = zeta::zeta(Complex64::new(sigma, t))?;
        let num = zeta::zeta(Complex64::new(sigma - 1.0, t))?;
        let q = num.norm() / den.norm();
        best.min_abs_zeta = best.min_abs_zeta.min(den.norm());
        if q > best.max_quotient {
            best.max_quotient = q;
            best.argmax_sigma = sigma;
        }
    }
    Ok(best)
}

/// Compare `R_{k-1}(x)` from `direct` against the explicit formula at every
/// requested height. `direct` fixes the `x` grid.
pub fn residual_diagnostic(
    table: &ZeroTable,
    k: u32,
    direct: &[ErrorTermValue],
    heights: &[f64],
    opts: &CorrectionOptions,
) -> Result<ResidualReport> {
    let mut rows = Vec::with_capacity(direct.len() * heights.len());
    let mut exponents = Vec::new();
    // centred (ln T, ln residual) pairs for the pooled slope
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for d in direct {
        let mut log_t = Vec::new();
        let mut log_r = Vec::new();
        for &t in heights {
            let z = zero_sum_with(table, k, d.x, t, opts)?;
            let residual = (d.r_value - (z.value + z.corrections)).abs();
            if residual > 0.0 && !log_t.contains(&z.t.ln()) {
                log_t.push(z.t.ln());
                log_r.push(residual.ln());
            }
            rows.push(ResidualRow {
                k,
                x: d.x,
                t: z.t,
                n_zeros: z.n_zeros_used,
                r_direct: d.r_value,
                zero_sum: z.value,
                corrections: z.corrections,
                residual,
                envelope: z.envelope,
                ratio: residual / z.envelope,
            });
        }
        if let Some((slope, _)) = linear_fit(&log_t, &log_r) {
            exponents.push((d.x, slope));
            let n = log_t.len() as f64;
            let mt = log_t.iter().sum::<f64>() / n;
            let mr = log_r.iter().sum::<f64>() / n;
            for (a, b) in log_t.iter().zip(&log_r) {
                sxy += (a - mt) * (b - mr);
                sxx += (a - mt) * (a - mt);
            }
        }
    }
    let fitted_exponent = (sxx > 0.0).then(|| sxy / sxx);
    let mut snapped: Vec<f64> = heights
        .iter()
        .filter_map(|&t| snap_height(table, t).ok())
        .filter(|&t| t > table.records[0].gamma)
        .collect();
    snapped.sort_by(f64::total_cmp);
    snapped.dedup();
    let quotient_scan = snapped.into_iter().map(quotient_scan).collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport {
        k,
        rows,
        exponents,
        fitted_exponent,
        quotient_scan,
    })
}

pub fn write_residual_csv<W: Write>(rows: &[ResidualRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{RESIDUAL_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.k,
            fmt17(r.x),
            fmt17(r.t),
            r.n_zeros,
            fmt17(r.r_direct),
            fmt17(r.zero_sum),
            fmt17(r.corrections),
            fmt17(r.residual),
            fmt17(r.envelope),
            fmt17(r.ratio)
        )?;
    }
    Ok(())
}
