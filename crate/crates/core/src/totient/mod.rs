//! Euler totients, their summatory function `F(x)`, the Riesz means
//! `F_{k-1}(x) = (1/(k-1)!) Σ_{n≤x} φ(n) log(x/n)^{k-1}` and the smoothed
//! error terms `R_{k-1}(x) = F_{k-1}(x) - 3x²/(2^{k-1}π²)`.
//!
//! The main term is of size `x²` while the signal in `R_{k-1}` is of size
//! `√x`, so every mean carries an estimate of its accumulated rounding error.

mod cache;
mod segmented;

pub use cache::{read_sieve_cache, write_sieve_cache};
pub use segmented::riesz_means_streaming;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, DoubleDouble, ExtendedSum, NaiveSum};

/// Largest sieve the table type accepts.
pub const MAX_SIEVE: u64 = 1 << 31;

/// Default memory budget for [`sieve_totients`]: 2 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Bytes per entry: a `u32` totient plus a `u64` prefix sum.
const BYTES_PER_ENTRY: u64 = 12;

/// Smoothing orders the toolkit supports.
pub const K_RANGE: std::ops::RangeInclusive<u32> = 1..=8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    /// Plain left-to-right f64 summation.
    Standard,
    /// Neumaier-compensated f64 summation.
    #[default]
    Compensated,
    /// Double-double logarithms, terms, and accumulation.
    Extended,
}

impl std::str::FromStr for PrecisionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "compensated" => Ok(Self::Compensated),
            "extended" => Ok(Self::Extended),
            other => Err(Error::domain(format!("unknown precision mode `{other}`"))),
        }
    }
}

/// Sieved `φ(1..=n_max)` with exact prefix sums `F(n)`.
#[derive(Clone, Debug)]
pub struct TotientTable {
    n_max: u64,
    // index 0 is a placeholder so that phi[n] = φ(n)
    phi: Vec<u32>,
    prefix: Vec<u64>,
}

impl TotientTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `φ(n)` for `1 <= n <= n_max`.
    pub fn phi(&self, n: u64) -> u32 {
        self.phi[n as usize]
    }

    /// `φ(1..=n_max)`.
    pub fn values(&self) -> &[u32] {
        &self.phi[1..]
    }

    /// `F(n) = Σ_{m≤n} φ(m)`, with `F(0) = 0`.
    pub fn prefix(&self, n: u64) -> u64 {
        self.prefix[n as usize]
    }

    pub(crate) fn from_phi(phi: Vec<u32>) -> Self {
        let n_max = (phi.len() - 1) as u64;
        let mut prefix = Vec::with_capacity(phi.len());
        prefix.push(0u64);
        let mut acc = 0u64;
        for &p in &phi[1..] {
            acc += p as u64;
            prefix.push(acc);
        }
        Self { n_max, phi, prefix }
    }
}

/// Linear sieve with the default memory budget.
pub fn sieve_totients(n_max: u64) -> Result<TotientTable> {
    sieve_totients_with_budget(n_max, DEFAULT_MEMORY_BUDGET)
}

/// Linear (Euler) sieve: every composite is crossed out exactly once, by its
/// smallest prime factor, and φ is filled in through multiplicativity in the
/// same pass.
pub fn sieve_totients_with_budget(n_max: u64, budget_bytes: u64) -> Result<TotientTable> {
    if n_max == 0 || n_max > MAX_SIEVE {
        return Err(Error::domain(format!("sieve size must lie in [1, 2^31], got {n_max}")));
    }
    let bytes = (n_max + 1) * BYTES_PER_ENTRY;
    if bytes > budget_bytes {
        return Err(Error::Capacity {
            requested: n_max,
            bytes,
            budget: budget_bytes,
        });
    }
    let n = n_max as usize;
    let mut phi = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    phi[1] = 1;
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u32;
            primes.push(i as u32);
        }
        let phi_i = phi[i];
        for &p in &primes {
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            if i % p as usize == 0 {
                phi[ip] = phi_i * p;
                break;
            }
            phi[ip] = phi_i * (p - 1);
        }
    }
    Ok(TotientTable::from_phi(phi))
}

fn check_x(table: &TotientTable, x: f64) -> Result<u64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("x must be >= 1, got {x}")));
    }
    if x > table.n_max as f64 {
        return Err(Error::domain(format!(
            "x = {x} exceeds the sieve limit {}",
            table.n_max
        )));
    }
    Ok(x.floor() as u64)
}

pub(crate) fn check_k(k: u32) -> Result<()> {
    if K_RANGE.contains(&k) {
        Ok(())
    } else {
        Err(Error::domain(format!("k must lie in [1, 8], got {k}")))
    }
}

/// `F(x)`, exact.
pub fn summatory_totient(table: &TotientTable, x: f64) -> Result<u64> {
    Ok(table.prefix(check_x(table, x)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszMeanRequest {
    /// The mean has order `k - 1`.
    pub k: u32,
    pub x: f64,
    pub precision: PrecisionMode,
}

impl RieszMeanRequest {
    pub fn new(k: u32, x: f64) -> Self {
        Self {
            k,
            x,
            precision: PrecisionMode::default(),
        }
    }

    pub fn with_precision(mut self, precision: PrecisionMode) -> Self {
        self.precision = precision;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieszMean {
    /// `F_{k-1}(x)` rounded to f64.
    pub value: f64,
    /// Full double-double value; equal to `value` outside extended mode.
    pub value_dd: DoubleDouble,
    /// Upper estimate of the accumulated rounding error.
    pub est_rounding: f64,
    /// Set when `est_rounding > √x`, the scale of the signal in `R_{k-1}`.
    pub cancellation_warning: bool,
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Per-term contributions `φ(n) L^{k-1} / (k-1)!` and their rounding
/// estimate, for `L = log(x/n)` rounded to f64.
#[inline]
pub(crate) fn term_f64(phi: f64, log_ratio: f64, k: u32, inv_fact: f64) -> (f64, f64) {
    let eps = f64::EPSILON / 2.0;
    let m = k - 1;
    if m == 0 {
        return (phi, 0.0);
    }
    let lp = log_ratio.powi(m as i32);
    let term = phi * lp * inv_fact;
    // log(x/n): the quotient and the logarithm each round once.
    let d_log = eps * (1.0 + log_ratio.abs());
    let d_term =
        phi * inv_fact * (m as f64 * log_ratio.abs().powi(m as i32 - 1) * d_log + (m as f64 + 2.0) * eps * lp.abs());
    (term, d_term)
}

#[inline]
pub(crate) fn term_dd(phi: u32, log_ratio: DoubleDouble, k: u32, inv_fact: DoubleDouble) -> DoubleDouble {
    let m = k - 1;
    if m == 0 {
        return DoubleDouble::from_f64(phi as f64);
    }
    log_ratio.powi(m).mul_f64(phi as f64) * inv_fact
}

/// Unit roundoff of the double-double logarithm used per term.
pub(crate) const DD_TERM_REL: f64 = 1e-30;

/// `F_{k-1}(x)` by direct summation over `n <= x` in ascending order.
pub fn riesz_mean(table: &TotientTable, req: RieszMeanRequest) -> Result<RieszMean> {
    check_k(req.k)?;
    let n_top = check_x(table, req.x)?;
    if req.k == 1 {
        let f = table.prefix(n_top);
        let dd = DoubleDouble::from_u128(f as u128);
        return Ok(RieszMean {
            value: dd.to_f64(),
            value_dd: dd,
            est_rounding: 0.0,
            cancellation_warning: false,
        });
    }
    let inv_fact = 1.0 / factorial(req.k - 1);
    let mean = match req.precision {
        PrecisionMode::Standard => {
            let mut acc = NaiveSum::default();
            let mut term_err = 0.0;
            for n in 1..=n_top {
                let (t, e) = term_f64(table.phi(n) as f64, (req.x / n as f64).ln(), req.k, inv_fact);
                acc.add(t);
                term_err += e;
            }
            let est = acc.rounding_bound() + term_err * (1.0 + 1e-10);
            (DoubleDouble::from_f64(acc.value()), est)
        }
        PrecisionMode::Compensated => {
            let mut acc = CompensatedSum::new();
            let mut term_err = 0.0;
            for n in 1..=n_top {
                let (t, e) = term_f64(table.phi(n) as f64, (req.x / n as f64).ln(), req.k, inv_fact);
                acc.add(t);
                term_err += e;
            }
            let est = acc.rounding_bound() + term_err * (1.0 + 1e-10);
            (DoubleDouble::from_f64(acc.value()), est)
        }
        PrecisionMode::Extended => {
            let inv_fact = DoubleDouble::ONE / DoubleDouble::from_f64(factorial(req.k - 1));
            let log_x = DoubleDouble::from_f64(req.x).ln();
            let mut acc = ExtendedSum::default();
            for n in 1..=n_top {
                let log_ratio = log_x - DoubleDouble::from_f64(n as f64).ln();
                acc.add(term_dd(table.phi(n), log_ratio, req.k, inv_fact));
            }
            let est = acc.rounding_bound() + DD_TERM_REL * (req.k as f64) * acc.abs_sum();
            (acc.value(), est)
        }
    };
    Ok(finish_mean(mean.0, mean.1, req.x))
}

pub(crate) fn finish_mean(value_dd: DoubleDouble, est: f64, x: f64) -> RieszMean {
    RieszMean {
        value: value_dd.to_f64(),
        value_dd,
        est_rounding: est,
        cancellation_warning: est > x.sqrt(),
    }
}

/// `3x²/(2^{k-1}π²)` in double-double.
pub fn main_term_dd(k: u32, x: f64) -> DoubleDouble {
    let x = DoubleDouble::from_f64(x);
    let pi2 = DoubleDouble::PI.sqr();
    (x.sqr().mul_f64(3.0) / pi2).mul_f64(0.5f64.powi(k as i32 - 1))
}

pub fn main_term(k: u32, x: f64) -> f64 {
    main_term_dd(k, x).to_f64()
}

/// `R_{k-1}(x)` together with its ingredients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorTermValue {
    pub x: f64,
    pub k: u32,
    pub f_value: f64,
    pub main_term: f64,
    pub r_value: f64,
    pub est_rounding: f64,
}

impl ErrorTermValue {
    /// The value carries signal only when the rounding estimate is below it.
    pub fn is_admissible(&self) -> bool {
        self.est_rounding < self.r_value.abs()
    }
}

/// `F_{k-1}(x)` minus the main term, subtracted in double-double.
pub fn error_term_from_mean(k: u32, x: f64, mean: RieszMean) -> ErrorTermValue {
    let main = main_term_dd(k, x);
    let r = (mean.value_dd - main).to_f64();
    // main term is good to ~1e-31 relative; the final rounding of r adds ulp/2
    let est = mean.est_rounding + 1e-30 * main.to_f64() + r.abs() * f64::EPSILON / 2.0;
    ErrorTermValue {
        x,
        k,
        f_value: mean.value,
        main_term: main.to_f64(),
        r_value: r,
        est_rounding: est,
    }
}

fn require_admissible(value: ErrorTermValue) -> Result<ErrorTermValue> {
    let (r, est) = (value.r_value, value.est_rounding);
    if !value.is_admissible() && r != 0.0 {
        return Err(Error::Precision {
            estimate: est,
            magnitude: r.abs(),
        });
    }
    Ok(value)
}

/// `R_{k-1}(x) = F_{k-1}(x) - 3x²/(2^{k-1}π²)` for `2 <= x <= n_max`.
pub fn smoothed_error(table: &TotientTable, k: u32, x: f64, precision: PrecisionMode) -> Result<ErrorTermValue> {
    if k < 2 {
        return Err(Error::domain("smoothed error terms need k >= 2"));
    }
    if !(x >= 2.0) {
        return Err(Error::domain(format!("x must be >= 2, got {x}")));
    }
    let mean = riesz_mean(table, RieszMeanRequest { k, x, precision })?;
    require_admissible(error_term_from_mean(k, x, mean))
}

/// Height `e^y` for a normalized evaluation, accepting `y = log 2` despite
/// rounding in `exp`.
pub(crate) fn height_for_log(y: f64) -> Result<f64> {
    if !(y >= std::f64::consts::LN_2 * (1.0 - 1e-15)) {
        return Err(Error::domain(format!(
            "y = {y} gives e^y < 2; the explicit formula needs x >= 2"
        )));
    }
    Ok(y.exp().max(2.0))
}

/// `e^{-y/2} R_{k-1}(e^y)` by direct summation.
pub fn normalized_error_direct(table: &TotientTable, k: u32, y: f64, precision: PrecisionMode) -> Result<f64> {
    let x = height_for_log(y)?;
    let r = smoothed_error(table, k, x, precision)?;
    Ok((-y / 2.0).exp() * r.r_value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    /// φ(n) = n Π_{p|n} (1 - 1/p), by trial division.
    fn phi_product_formula(n: u64) -> u64 {
        let mut m = n;
        let mut result = n;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                while m.is_multiple_of(p) {
                    m /= p;
                }
                result -= result / p;
            }
            p += 1;
        }
        if m > 1 {
            result -= result / m;
        }
        result
    }

    #[test]
    fn first_twelve_totients() {
        let t = sieve_totients(12).unwrap();
        let expected: Vec<u32> = (1..=12).map(|n| phi_product_formula(n) as u32).collect();
        assert_eq!(expected, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
        assert_eq!(t.values(), expected.as_slice());
    }

    #[test]
    fn trivial_table() {
        let t = sieve_totients(1).unwrap();
        assert_eq!(t.values(), &[1]);
        assert_eq!(summatory_totient(&t, 1.0).unwrap(), 1);
    }

    #[test]
    fn summatory_examples() {
        let t = sieve_totients(12).unwrap();
        let direct: u64 = (1..=10).map(phi_product_formula).sum();
        assert_eq!(direct, 32);
        assert_eq!(summatory_totient(&t, 10.0).unwrap(), 32);
        assert_eq!(summatory_totient(&t, 10.9).unwrap(), 32);
        assert_eq!(summatory_totient(&t, 1.0).unwrap(), 1);
        assert!(summatory_totient(&t, 12.5).is_err());
        assert!(summatory_totient(&t, 0.5).is_err());
    }

    #[test]
    fn table_invariants_against_gcd_count() {
        let t = sieve_totients(1000).unwrap();
        for n in 1..=1000u64 {
            let count = (1..=n).filter(|&m| gcd(m, n) == 1).count() as u32;
            assert_eq!(t.phi(n), count, "n = {n}");
            assert_eq!(t.prefix(n) - t.prefix(n - 1), t.phi(n) as u64);
        }
        for m in 1..=31u64 {
            for n in 1..=(1000 / m) {
                if gcd(m, n) == 1 {
                    assert_eq!(t.phi(m * n), t.phi(m) * t.phi(n));
                }
            }
        }
    }

    #[test]
    fn capacity_and_domain_errors() {
        assert!(matches!(
            sieve_totients_with_budget(1_000_000, 1_000),
            Err(Error::Capacity { .. })
        ));
        assert!(sieve_totients(0).is_err());
        assert!(sieve_totients(MAX_SIEVE + 1).is_err());
    }

    #[test]
    fn riesz_mean_k1_is_summatory() {
        let t = sieve_totients(100).unwrap();
        for mode in [
            PrecisionMode::Standard,
            PrecisionMode::Compensated,
            PrecisionMode::Extended,
        ] {
            let m = riesz_mean(&t, RieszMeanRequest::new(1, 10.0).with_precision(mode)).unwrap();
            assert_eq!(m.value, 32.0);
        }
    }

    #[test]
    fn riesz_mean_two_term_example() {
        let t = sieve_totients(10).unwrap();
        for mode in [
            PrecisionMode::Standard,
            PrecisionMode::Compensated,
            PrecisionMode::Extended,
        ] {
            let m = riesz_mean(&t, RieszMeanRequest::new(2, 2.0).with_precision(mode)).unwrap();
            assert!((m.value - std::f64::consts::LN_2).abs() < 1e-15);
        }
    }

    #[test]
    fn riesz_mean_matches_delta_operator_oracle() {
        // δ(F)(x) = ∫_1^x F(t)/t dt = Σ_{n≤x} φ(n) log(x/n): integrate the
        // step function F exactly between consecutive integers.
        let t = sieve_totients(200).unwrap();
        let x = 100.0f64;
        let mut oracle = 0.0;
        for n in 1..100u64 {
            oracle += t.prefix(n) as f64 * ((n + 1) as f64 / n as f64).ln();
        }
        let m = riesz_mean(&t, RieszMeanRequest::new(2, x)).unwrap();
        assert!(((m.value - oracle) / oracle).abs() < 1e-10);
    }

    #[test]
    fn smoothed_error_examples() {
        let t = sieve_totients(100).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        let r = smoothed_error(&t, 2, 2.0, PrecisionMode::Compensated).unwrap();
        assert!((r.r_value - (std::f64::consts::LN_2 - 12.0 / (2.0 * pi2))).abs() < 1e-15);
        assert!((r.r_value - 0.085_220).abs() < 1e-6);

        let r3 = smoothed_error(&t, 3, 2.0, PrecisionMode::Compensated).unwrap();
        let expect3 = std::f64::consts::LN_2.powi(2) / 2.0 - 12.0 / (4.0 * pi2);
        assert!((r3.r_value - expect3).abs() < 1e-15);

        // Hand-expanded ten-term sum.
        let phis = [1.0, 1.0, 2.0, 2.0, 4.0, 2.0, 6.0, 4.0, 6.0, 4.0];
        let f1: f64 = phis
            .iter()
            .enumerate()
            .map(|(i, p)| p * (10.0 / (i as f64 + 1.0)).ln())
            .sum();
        let r10 = smoothed_error(&t, 2, 10.0, PrecisionMode::Compensated).unwrap();
        assert!((r10.r_value - (f1 - 300.0 / (2.0 * pi2))).abs() < 1e-12);
    }

    #[test]
    fn normalized_direct_examples() {
        let t = sieve_totients(100).unwrap();
        let v = normalized_error_direct(&t, 2, std::f64::consts::LN_2, PrecisionMode::Compensated).unwrap();
        assert!((v - 0.060_260).abs() < 1e-6, "{v}");
        assert!(normalized_error_direct(&t, 2, 0.0, PrecisionMode::Compensated).is_err());
        assert!(normalized_error_direct(&t, 2, 5.0, PrecisionMode::Compensated).is_err());
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        let t = sieve_totients(10).unwrap();
        assert!(riesz_mean(&t, RieszMeanRequest::new(0, 5.0)).is_err());
        assert!(riesz_mean(&t, RieszMeanRequest::new(9, 5.0)).is_err());
        assert!(smoothed_error(&t, 1, 5.0, PrecisionMode::Compensated).is_err());
    }
}
