//! Browser bindings. Each exported function returns a JSON string; the
//! zero table is compiled in and enriched on first use.

use std::sync::OnceLock;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ztl::distribution::{build_histogram, compare_char_fn, sample_normalized, SampleOptions, YGrid};
use ztl::zeros::{parse_zero_table, ZeroTable};

const ZEROS: &str = include_str!("../../../data/zeros_2100.txt");

/// Orders offered by the page.
pub const ORDERS: [u32; 4] = [2, 3, 4, 5];

/// Enough zeros for every cutoff the page offers while keeping the first
/// load short.
const ZERO_LIMIT: usize = 800;

fn zeros() -> ztl::Result<&'static ZeroTable> {
    static TABLE: OnceLock<ZeroTable> = OnceLock::new();
    if let Some(t) = TABLE.get() {
        return Ok(t);
    }
    let table = parse_zero_table(ZEROS, "zeros_2100.txt", Some(ZERO_LIMIT))?.enrich(&ORDERS)?;
    Ok(TABLE.get_or_init(|| table))
}

fn check_order(k: u32) -> ztl::Result<()> {
    if !ORDERS.contains(&k) {
        return Err(ztl::Error::Domain(format!("k must be one of {ORDERS:?}, got {k}")));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub k: u32,
    pub t_used: Option<f64>,
    pub n_zeros: usize,
    pub y: Vec<f64>,
    pub value: Vec<f64>,
}

/// `e^{-y/2} R_{k-1}(e^y)` from the zeros below `t` at `n` points of `[y_min, y_max]`.
pub fn error_curve_data(k: u32, t: f64, y_min: f64, y_max: f64, n: usize) -> ztl::Result<Curve> {
    check_order(k)?;
    if !(2..=20_000).contains(&n) {
        return Err(ztl::Error::Domain(format!("n must be in [2, 20000], got {n}")));
    }
    let step = (y_max - y_min) / (n - 1) as f64;
    let s = sample_normalized(
        zeros()?,
        k,
        &YGrid::uniform(y_min, y_max, step),
        t,
        &SampleOptions::default(),
    )?;
    Ok(Curve {
        k,
        t_used: s.t_used,
        n_zeros: s.n_zeros,
        y: s.y_grid,
        value: s.values,
    })
}

#[derive(Debug, Serialize)]
pub struct Histogram {
    pub k: u32,
    pub t_used: Option<f64>,
    pub n_zeros: usize,
    pub n: usize,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub unimodal: bool,
}

/// Histogram of the curve sampled at `y = 1, 2, ..., y_max`.
pub fn histogram_data(k: u32, t: f64, y_max: f64, bins: usize) -> ztl::Result<Histogram> {
    check_order(k)?;
    let s = sample_normalized(
        zeros()?,
        k,
        &YGrid::uniform(1.0, y_max, 1.0),
        t,
        &SampleOptions::default(),
    )?;
    let h = build_histogram(&s.values, bins)?;
    Ok(Histogram {
        k,
        t_used: s.t_used,
        n_zeros: s.n_zeros,
        n: h.n,
        unimodal: h.is_unimodal(),
        bin_edges: h.bin_edges,
        counts: h.counts,
        mean: h.mean,
        std: h.std,
        skewness: h.skewness,
    })
}

#[derive(Debug, Serialize)]
pub struct CharFn {
    pub k: u32,
    pub n_zeros: usize,
    pub t: Vec<f64>,
    pub empirical_re: Vec<f64>,
    pub empirical_im: Vec<f64>,
    pub bessel_modulus: Vec<f64>,
    pub bessel_as_written_re: Vec<f64>,
    pub max_gap_modulus: f64,
    pub max_gap_as_written: f64,
}

/// Empirical characteristic function of the sample at `y = 1..=y_max`
/// against both Bessel products, on `n_freq` points of `[0, freq_max]`.
pub fn char_fn_data(k: u32, t: f64, y_max: f64, freq_max: f64, n_freq: usize) -> ztl::Result<CharFn> {
    check_order(k)?;
    if !(2..=2000).contains(&n_freq) || !(freq_max > 0.0) {
        return Err(ztl::Error::Domain(
            "need 2..=2000 frequencies on [0, freq_max > 0]".into(),
        ));
    }
    let table = zeros()?;
    let s = sample_normalized(table, k, &YGrid::uniform(1.0, y_max, 1.0), t, &SampleOptions::default())?;
    let freqs: Vec<f64> = (0..n_freq).map(|i| freq_max * i as f64 / (n_freq - 1) as f64).collect();
    let c = compare_char_fn(&s.values, table, k, &freqs, s.n_zeros)?;
    Ok(CharFn {
        k,
        n_zeros: c.n_zeros,
        empirical_re: c.empirical.iter().map(|z| z.re).collect(),
        empirical_im: c.empirical.iter().map(|z| z.im).collect(),
        bessel_modulus: c.bessel_modulus_variant,
        bessel_as_written_re: c.bessel_as_written.iter().map(|z| z.re).collect(),
        t: c.t_grid,
        max_gap_modulus: c.max_gap_modulus,
        max_gap_as_written: c.max_gap_as_written,
    })
}

fn to_js<T: Serialize>(r: ztl::Result<T>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Largest zero height available to the page.
#[wasm_bindgen]
pub fn max_height() -> Result<f64, JsError> {
    zeros().map(|t| t.max_gamma).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn error_curve(k: u32, t: f64, y_min: f64, y_max: f64, n: usize) -> Result<String, JsError> {
    to_js(error_curve_data(k, t, y_min, y_max, n))
}

#[wasm_bindgen]
pub fn histogram(k: u32, t: f64, y_max: f64, bins: usize) -> Result<String, JsError> {
    to_js(histogram_data(k, t, y_max, bins))
}

#[wasm_bindgen]
pub fn char_fn(k: u32, t: f64, y_max: f64, freq_max: f64, n_freq: usize) -> Result<String, JsError> {
    to_js(char_fn_data(k, t, y_max, freq_max, n_freq))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_has_requested_points() {
        let c = error_curve_data(2, 200.0, 5.0, 50.0, 91).unwrap();
        assert_eq!(c.y.len(), 91);
        assert_eq!(c.value.len(), 91);
        assert!((c.y[90] - 50.0).abs() < 1e-9);
        assert_eq!(c.n_zeros, zeros().unwrap().count_below(c.t_used.unwrap()));
        assert!(c.value.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn histogram_is_normalised_sample() {
        let h = histogram_data(3, 300.0, 5000.0, 40).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 5000);
        assert_eq!(h.bin_edges.len(), 41);
    }

    #[test]
    fn char_fn_starts_at_one() {
        let c = char_fn_data(3, 300.0, 2000.0, 40.0, 21).unwrap();
        assert_eq!(c.empirical_re[0], 1.0);
        assert_eq!(c.bessel_modulus[0], 1.0);
        assert!(c.max_gap_modulus < 0.05, "{}", c.max_gap_modulus);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(error_curve_data(1, 100.0, 1.0, 2.0, 10).is_err());
        assert!(histogram_data(7, 100.0, 100.0, 20).is_err());
        assert!(error_curve_data(2, 100.0, 1.0, 2.0, 1).is_err());
    }
}
