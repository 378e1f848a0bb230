use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ComplexDD, DoubleDouble};
use crate::zeros::ZeroTable;

/// Largest `|z|` accepted by the power series.
pub const BESSEL_SERIES_LIMIT: f64 = 30.0;

const TERM_FLOOR: f64 = 1e-16;

/// `J₀(z) = Σ_r (-1)^r (z/2)^{2r} / (r!)²` for complex `z`.
///
/// Terms peak near `r ≈ |z|/2` at up to `~1e11` when `|z| = 30`, so the
/// recurrence and the running sum are kept in double-double.
pub fn bessel_j(z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if !(modulus <= BESSEL_SERIES_LIMIT) {
        return Err(Error::Range { modulus });
    }
    let half = ComplexDD::from_c64(z).scale(DoubleDouble::from_f64(0.5));
    let w = half * half;
    let minus_w = ComplexDD::new(-w.re, -w.im);
    let mut term = ComplexDD::ONE;
    let mut sum = ComplexDD::ONE;
    let mut r = 0u32;
    loop {
        r += 1;
        let rr = (r as f64) * (r as f64);
        term = (term * minus_w).scale(DoubleDouble::ONE / DoubleDouble::from_f64(rr));
        sum = sum + term;
        if r as f64 > modulus / 2.0 && term.norm_f64() < TERM_FLOOR {
            break;
        }
    }
    Ok(sum.to_c64())
}

/// Bessel products over the first `n_zeros` zeros at each `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselProduct {
    pub k: u32,
    pub n_zeros: usize,
    pub t_grid: Vec<f64>,
    /// `Π J₀(2 c_ρ(k) t)` with the complex coefficient as the argument.
    pub as_written: Vec<Complex64>,
    /// `Π J₀(2 |c_ρ(k)| t)`.
    pub modulus: Vec<f64>,
    /// `t² Σ |c_ρ(k)|²` over the enriched zeros left out of the product.
    pub tail_est: Vec<f64>,
}

pub fn bessel_product(table: &ZeroTable, k: u32, t_grid: &[f64], n_zeros: usize) -> Result<BesselProduct> {
    let enriched = table.records.iter().take_while(|r| r.is_enriched()).count();
    if n_zeros > enriched {
        return Err(Error::domain(format!(
            "{n_zeros} zeros requested, only {enriched} are enriched"
        )));
    }
    let coeffs = table.records[..enriched]
        .iter()
        .map(|r| r.coefficient(k))
        .collect::<Result<Vec<_>>>()?;
    let excluded: f64 = coeffs[n_zeros..].iter().map(|c| c.norm_sqr()).sum();
    let mut as_written = Vec::with_capacity(t_grid.len());
    let mut modulus = Vec::with_capacity(t_grid.len());
    let mut tail_est = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut pw = Complex64::new(1.0, 0.0);
        let mut pm = 1.0;
        for c in &coeffs[..n_zeros] {
            pw *= bessel_j(2.0 * c * t)?;
            pm *= bessel_j(Complex64::new(2.0 * c.norm() * t, 0.0))?.re;
        }
        as_written.push(pw);
        modulus.push(pm);
        tail_est.push(excluded * t * t);
    }
    Ok(BesselProduct {
        k,
        n_zeros,
        t_grid: t_grid.to_vec(),
        as_written,
        modulus,
        tail_est,
    })
}
