//! Values of `~R_{k-1}(y) = e^{-y/2} R_{k-1}(e^y)` over long ranges of `y`,
//! and what is built from them: histograms, characteristic functions
//! compared with Bessel products, and tail sums over the zeros.

mod bessel;
mod charfn;
mod histogram;
mod tail;

pub use bessel::{bessel_j, bessel_product, BesselProduct, BESSEL_SERIES_LIMIT};
pub use charfn::{compare_char_fn, empirical_char_fn, write_char_fn_csv, CharFnComparison, CHARFN_CSV_HEADER};
pub use histogram::{
    build_histogram, is_unimodal, moments, write_histogram_csv, HistogramSummary, Moments, HISTOGRAM_CSV_HEADER,
    VALLEY_Z,
};
pub use tail::{tail_diagnostic, TailReport, TailRow, TailSignature};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::explicit::{
    corrections, oscillatory_terms, snap_height, zero_sum_envelope, CorrectionOptions, EXTENDED_PHASE_ABOVE,
};
use crate::numeric::DoubleDouble;
use crate::totient::{error_term_from_mean, riesz_means_streaming, PrecisionMode};
use crate::zeros::ZeroTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    Direct,
    ZeroSum,
    Hybrid,
}

/// Points at which `~R_{k-1}` is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum YGrid {
    /// `y_min, y_min + step, ...` up to `y_max` inclusive.
    Uniform { min: f64, max: f64, step: f64 },
    /// `n` uniform draws from `[min, max]`, sorted.
    Random { min: f64, max: f64, n: usize, seed: u64 },
}

impl YGrid {
    pub fn uniform(min: f64, max: f64, step: f64) -> Self {
        YGrid::Uniform { min, max, step }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let ys = match *self {
            YGrid::Uniform { min, max, step } => {
                if !(step > 0.0 && step.is_finite()) {
                    return Err(Error::domain(format!("y step must be positive, got {step}")));
                }
                if !(max >= min) {
                    return Err(Error::domain(format!("empty y range [{min}, {max}]")));
                }
                let n = ((max - min) / step * (1.0 + 1e-12)).floor() as usize;
                (0..=n).map(|i| min + i as f64 * step).collect()
            }
            YGrid::Random { min, max, n, seed } => {
                if !(max > min) || n == 0 {
                    return Err(Error::domain(format!("empty y range [{min}, {max}] or n = 0")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut ys: Vec<f64> = (0..n).map(|_| rng.gen_range(min..=max)).collect();
                ys.sort_by(f64::total_cmp);
                ys.dedup();
                ys
            }
        };
        if let Some(&y0) = ys.first() {
            crate::totient::height_for_log(y0)?;
        }
        Ok(ys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleOptions {
    pub method: SampleMethod,
    /// Largest `n` the direct sums may reach.
    pub n_max: u64,
    pub include_corrections: bool,
    pub corrections: CorrectionOptions,
    pub precision: PrecisionMode,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            method: SampleMethod::ZeroSum,
            n_max: 1_000_000_000,
            include_corrections: true,
            corrections: CorrectionOptions::default(),
            precision: PrecisionMode::Compensated,
        }
    }
}

/// One point where both a direct and a zero-sum value exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapPoint {
    pub y: f64,
    pub direct: f64,
    pub zero_sum: f64,
    /// Explicit-formula envelope at `x = e^y`, times `e^{-y/2}`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridCheck {
    pub points: Vec<OverlapPoint>,
    pub max_discrepancy: f64,
    /// Largest `|direct - zero_sum| / bound`.
    pub max_ratio: f64,
}

impl HybridCheck {
    pub fn within_envelope(&self) -> bool {
        self.max_ratio <= 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSample {
    pub k: u32,
    pub y_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub method: SampleMethod,
    /// Snapped cutoff of the zero sum; `None` for purely direct samples.
    pub t_used: Option<f64>,
    pub n_zeros: usize,
    pub corrections_included: bool,
    pub hybrid: Option<HybridCheck>,
}

impl DistributionSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `e^{-y/2} R_{k-1}(e^y)` by direct summation for every `y`.
fn direct_values(k: u32, ys: &[f64], n_max: u64, precision: PrecisionMode) -> Result<Vec<f64>> {
    let xs = ys
        .iter()
        .map(|&y| crate::totient::height_for_log(y))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&x) = xs.iter().find(|&&x| x > n_max as f64) {
        return Err(Error::domain(format!(
            "direct evaluation at x = {x:e} exceeds n_max = {n_max}"
        )));
    }
    let means = riesz_means_streaming(&xs, k, precision)?;
    Ok(ys
        .iter()
        .zip(xs)
        .zip(means)
        .map(|((&y, x), mean)| (-y / 2.0).exp() * error_term_from_mean(k, x, mean).r_value)
        .collect())
}

/// `~R_{k-1}(y)` over `grid`.
///
/// The zero-sum value at `y` is `2 Σ_{0<γ<T} Re[c_ρ(k) e^{iγy}]` plus, when
/// enabled, `e^{-y/2}` times the residues at `0` and the trivial zeros. `T`
/// is snapped to a zero-gap midpoint first. In hybrid mode the points with
/// `e^y ≤ n_max` are also summed directly and compared.
pub fn sample_normalized(
    table: &ZeroTable,
    k: u32,
    grid: &YGrid,
    t: f64,
    opts: &SampleOptions,
) -> Result<DistributionSample> {
    crate::totient::check_k(k)?;
    if k < 2 {
        return Err(Error::domain("the normalized error term is sampled for k >= 2"));
    }
    let ys = grid.points()?;

    if opts.method == SampleMethod::Direct {
        let values = direct_values(k, &ys, opts.n_max, opts.precision)?;
        return Ok(DistributionSample {
            k,
            y_grid: ys,
            values,
            method: SampleMethod::Direct,
            t_used: None,
            n_zeros: 0,
            corrections_included: false,
            hybrid: None,
        });
    }

    if !(t > 0.0) {
        return Err(Error::domain(format!("T must be positive, got {t}")));
    }
    let t_used = snap_height(table, t)?;
    let terms = table
        .enriched_below(t_used)?
        .iter()
        .map(|r| Ok((r.gamma, r.coefficient(k)?)))
        .collect::<Result<Vec<(f64, Complex64)>>>()?;
    let extended_above = EXTENDED_PHASE_ABOVE.ln();
    let mut values = Vec::with_capacity(ys.len());
    for &y in &ys {
        let extended = y > extended_above;
        let mut v = oscillatory_terms(&terms, DoubleDouble::from_f64(y), extended);
        if opts.include_corrections {
            v += (-y / 2.0).exp() * corrections(k, y, &opts.corrections)?.total;
        }
        if !v.is_finite() {
            return Err(Error::domain(format!("non-finite sample value at y = {y}")));
        }
        values.push(v);
    }

    let hybrid = if opts.method == SampleMethod::Hybrid {
        let limit = (opts.n_max as f64).ln();
        let overlap: Vec<usize> = (0..ys.len()).filter(|&i| ys[i] <= limit).collect();
        let overlap_y: Vec<f64> = overlap.iter().map(|&i| ys[i]).collect();
        let direct = direct_values(k, &overlap_y, opts.n_max, opts.precision)?;
        let points: Vec<OverlapPoint> = overlap
            .iter()
            .zip(direct)
            .map(|(&i, d)| {
                let y = ys[i];
                OverlapPoint {
                    y,
                    direct: d,
                    zero_sum: values[i],
                    bound: zero_sum_envelope(k, y.exp(), t_used.max(2.0)) * (-y / 2.0).exp(),
                }
            })
            .collect();
        let max_discrepancy = points.iter().map(|p| (p.direct - p.zero_sum).abs()).fold(0.0, f64::max);
        let max_ratio = points
            .iter()
            .map(|p| (p.direct - p.zero_sum).abs() / p.bound)
            .fold(0.0, f64::max);
        Some(HybridCheck {
            points,
            max_discrepancy,
            max_ratio,
        })
    } else {
        None
    };

    Ok(DistributionSample {
        k,
        y_grid: ys,
        values,
        method: opts.method,
        t_used: Some(t_used),
        n_zeros: terms.len(),
        corrections_included: opts.include_corrections,
        hybrid,
    })
}
