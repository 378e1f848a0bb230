use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{fmt17, CompensatedSum};

pub const HISTOGRAM_CSV_HEADER: &str = "bin_left,bin_right,count";

/// Significance, in Poisson standard deviations, that a dip between two
/// higher bins must reach before it counts as a valley.
pub const VALLEY_Z: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub skewness: f64,
}

/// Mean, standard deviation and skewness in a single compensated pass.
///
/// Sums run over `v - v₀` with `v₀` the first value, which keeps the
/// second and third power sums from cancelling when the mean is large.
pub fn moments(values: &[f64]) -> Result<Moments> {
    let Some(&shift) = values.first() else {
        return Err(Error::domain("moments of an empty sample"));
    };
    let (mut s1, mut s2, mut s3) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for &v in values {
        let d = v - shift;
        s1.add(d);
        s2.add(d * d);
        s3.add(d * d * d);
    }
    let n = values.len() as f64;
    let (m1, m2, m3) = (s1.value() / n, s2.value() / n, s3.value() / n);
    let var = (m2 - m1 * m1).max(0.0);
    let central3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    let std = var.sqrt();
    Ok(Moments {
        n: values.len(),
        mean: shift + m1,
        std,
        skewness: if std > 0.0 { central3 / (var * std) } else { 0.0 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramSummary {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub n: usize,
}

impl HistogramSummary {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn is_unimodal(&self) -> bool {
        is_unimodal(&self.counts, VALLEY_Z)
    }
}

/// `n_bins` equal-width bins spanning `[min, max]`; the maximum lands in
/// the last bin.
pub fn build_histogram(values: &[f64], n_bins: usize) -> Result<HistogramSummary> {
    if n_bins < 10 {
        return Err(Error::domain(format!("need at least 10 bins, got {n_bins}")));
    }
    if values.is_empty() {
        return Err(Error::domain("histogram of an empty sample"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("non-finite sample value {v}")));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Err(Error::DegenerateRange { value: lo });
    }
    let width = (hi - lo) / n_bins as f64;
    let mut bin_edges: Vec<f64> = (0..n_bins).map(|i| lo + i as f64 * width).collect();
    bin_edges.push(hi);
    let mut counts = vec![0u64; n_bins];
    for &v in values {
        let i = (((v - lo) / width).floor() as usize).min(n_bins - 1);
        counts[i] += 1;
    }
    let m = moments(values)?;
    Ok(HistogramSummary {
        bin_edges,
        counts,
        mean: m.mean,
        std: m.std,
        skewness: m.skewness,
        n: values.len(),
    })
}

/// True when no bin sits significantly below a higher bin on each side.
///
/// Bin `j` is a valley when `h - c_j > z √(h + c_j)`, where `h` is the
/// smaller of the largest count to its left and the largest to its right.
pub fn is_unimodal(counts: &[u64], z: f64) -> bool {
    let n = counts.len();
    if n < 3 {
        return true;
    }
    let mut left_max = vec![0u64; n];
    let mut right_max = vec![0u64; n];
    for j in 1..n {
        left_max[j] = left_max[j - 1].max(counts[j - 1]);
    }
    for j in (0..n - 1).rev() {
        right_max[j] = right_max[j + 1].max(counts[j + 1]);
    }
    (1..n - 1).all(|j| {
        let h = left_max[j].min(right_max[j]) as f64;
        let c = counts[j] as f64;
        h - c <= z * (h + c).sqrt()
    })
}

pub fn write_histogram_csv<W: Write>(h: &HistogramSummary, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{HISTOGRAM_CSV_HEADER}")?;
    for (i, c) in h.counts.iter().enumerate() {
        writeln!(out, "{},{},{}", fmt17(h.bin_edges[i]), fmt17(h.bin_edges[i + 1]), c)?;
    }
    Ok(())
}
