use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::bessel::{bessel_product, BesselProduct};
use crate::error::{Error, Result};
use crate::numeric::{fmt17, CompensatedSum};
use crate::zeros::ZeroTable;

pub const CHARFN_CSV_HEADER: &str = "t,re_emp,im_emp,re_bessel_written,im_bessel_written,bessel_modulus,tail_est";

/// Samples shorter than this give time averages too noisy to compare.
const MIN_SAMPLE: usize = 1000;

/// `(1/n) Σ_j e^{i t v_j}` at every `t`.
pub fn empirical_char_fn(values: &[f64], t_grid: &[f64]) -> Result<Vec<Complex64>> {
    if values.len() < MIN_SAMPLE {
        return Err(Error::domain(format!(
            "empirical characteristic function needs at least {MIN_SAMPLE} values, got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    Ok(t_grid
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Complex64::new(1.0, 0.0);
            }
            let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
            for &v in values {
                let (s, c) = (t * v).sin_cos();
                re.add(c);
                im.add(s);
            }
            Complex64::new(re.value() / n, im.value() / n)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharFnComparison {
    pub t_grid: Vec<f64>,
    pub empirical: Vec<Complex64>,
    pub bessel_as_written: Vec<Complex64>,
    pub bessel_modulus_variant: Vec<f64>,
    pub tail_est: Vec<f64>,
    pub n_zeros: usize,
    /// `max_t |empirical - Π J₀(2|c_ρ|t)|`.
    pub max_gap_modulus: f64,
    /// `max_t |empirical - Π J₀(2 c_ρ t)|`.
    pub max_gap_as_written: f64,
}

pub fn compare_char_fn(
    values: &[f64],
    table: &ZeroTable,
    k: u32,
    t_grid: &[f64],
    n_zeros: usize,
) -> Result<CharFnComparison> {
    let empirical = empirical_char_fn(values, t_grid)?;
    let BesselProduct {
        as_written,
        modulus,
        tail_est,
        ..
    } = bessel_product(table, k, t_grid, n_zeros)?;
    let max_gap_modulus = empirical
        .iter()
        .zip(&modulus)
        .map(|(e, &m)| (e - m).norm())
        .fold(0.0, f64::max);
    let max_gap_as_written = empirical
        .iter()
        .zip(&as_written)
        .map(|(e, w)| (e - w).norm())
        .fold(0.0, f64::max);
    Ok(CharFnComparison {
        t_grid: t_grid.to_vec(),
        empirical,
        bessel_as_written: as_written,
        bessel_modulus_variant: modulus,
        tail_est,
        n_zeros,
        max_gap_modulus,
        max_gap_as_written,
    })
}

pub fn write_char_fn_csv<W: Write>(c: &CharFnComparison, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CHARFN_CSV_HEADER}")?;
    for i in 0..c.t_grid.len() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt17(c.t_grid[i]),
            fmt17(c.empirical[i].re),
            fmt17(c.empirical[i].im),
            fmt17(c.bessel_as_written[i].re),
            fmt17(c.bessel_as_written[i].im),
            fmt17(c.bessel_modulus_variant[i]),
            fmt17(c.tail_est[i])
        )?;
    }
    Ok(())
}
