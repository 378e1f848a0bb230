//! Truncated Perron integrals `(1/2πi) ∫_{c-iT}^{c+iT} α(s) x^s / s^k ds`
//! for Dirichlet series `α(s) = Σ a_n n^{-s}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{integrate_panels, PanelSpec};
use crate::zeta;

/// A Dirichlet series with nonnegative-growth coefficients, as needed by
/// the truncated Perron formula.
pub trait DirichletSeries {
    fn name(&self) -> &'static str;
    fn coeff(&self, n: u64) -> f64;
    /// Abscissa of absolute convergence.
    fn sigma_a(&self) -> f64;
    /// Nondecreasing majorant `Φ` with `|a_n| ≤ Φ(n)`.
    fn phi_bound(&self, y: f64) -> f64;
    /// `α(s)` for `Re s > sigma_a`.
    fn eval(&self, s: Complex64) -> Result<Complex64>;
    /// `Σ |a_n| n^{-c}` for `c > sigma_a`.
    fn abs_sum(&self, c: f64) -> Result<f64>;

    /// `(1/(k-1)!) Σ_{n ≤ x} a_n (ln(x/n))^{k-1}` by direct summation.
    fn riesz_mean(&self, k: u32, x: f64) -> f64 {
        let inv = 1.0 / crate::totient::factorial(k - 1);
        let mut acc = crate::numeric::CompensatedSum::new();
        for n in 1..=(x.floor() as u64) {
            acc.add(self.coeff(n) * (x / n as f64).ln().powi(k as i32 - 1) * inv);
        }
        acc.value()
    }
}

/// `ζ(s) = Σ n^{-s}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZetaSeries;

impl DirichletSeries for ZetaSeries {
    fn name(&self) -> &'static str {
        "zeta"
    }
    fn coeff(&self, _n: u64) -> f64 {
        1.0
    }
    fn sigma_a(&self) -> f64 {
        1.0
    }
    fn phi_bound(&self, _y: f64) -> f64 {
        1.0
    }
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        zeta::zeta(s)
    }
    fn abs_sum(&self, c: f64) -> Result<f64> {
        check_abscissa(c, self.sigma_a())?;
        Ok(zeta::zeta(c)?.re)
    }
}

/// `ζ(s-1)/ζ(s) = Σ φ(n) n^{-s}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TotientSeries;

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl DirichletSeries for TotientSeries {
    fn name(&self) -> &'static str {
        "totient"
    }
    fn coeff(&self, n: u64) -> f64 {
        totient(n) as f64
    }
    fn sigma_a(&self) -> f64 {
        2.0
    }
    fn phi_bound(&self, y: f64) -> f64 {
        y
    }
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        zeta::dirichlet_quotient(s)
    }
    fn abs_sum(&self, c: f64) -> Result<f64> {
        check_abscissa(c, self.sigma_a())?;
        Ok(zeta::dirichlet_quotient(c)?.re)
    }
}

fn check_abscissa(c: f64, sigma_a: f64) -> Result<()> {
    let floor = sigma_a.max(0.0);
    if !(c > floor) {
        return Err(Error::Divergence { c, sigma_a: floor });
    }
    Ok(())
}

/// Vertical segment `[c - iT, c + iT]` closed on the left at `-(2M+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub c: f64,
    pub t: f64,
    pub m: u32,
    pub panels: PanelSpec,
}

impl ContourSpec {
    pub const DEFAULT_C: f64 = 2.25;

    /// Abscissa 9/4, panels resolving `x^{it}`.
    pub fn new(t: f64, x: f64) -> Self {
        Self {
            c: Self::DEFAULT_C,
            t,
            m: 5,
            panels: PanelSpec::for_frequency(x.ln()),
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.t > 0.0) {
            return Err(Error::domain(format!(
                "contour needs c > 0 and T > 0, got c = {}, T = {}",
                self.c, self.t
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PerronResult {
    pub series: &'static str,
    pub k: u32,
    pub x: f64,
    pub c: f64,
    pub t: f64,
    pub value: f64,
    pub direct: f64,
    pub residual: f64,
    pub envelope: f64,
}

/// Truncation envelope with unit constants:
/// `Φ(x+1)/T^{k-1} + 2^c c Φ(x+1)/T^k + (x^c/T^k) Σ|a_n|n^{-c} + 2^c x ln x Φ(2x)/T^k`.
pub fn perron_envelope<S: DirichletSeries + ?Sized>(series: &S, k: u32, x: f64, c: f64, t: f64) -> Result<f64> {
    let tk = t.powi(k as i32);
    let two_c = 2f64.powf(c);
    let phi1 = series.phi_bound(x + 1.0);
    Ok(phi1 / t.powi(k as i32 - 1)
        + two_c * c * phi1 / tk
        + x.powf(c) / tk * series.abs_sum(c)?
        + two_c * x * x.ln() * series.phi_bound(2.0 * x) / tk)
}

/// `(1/2πi) ∫ α(s) x^s / s^k ds` over the segment, as a real number:
/// the integrand at `c - it` is the conjugate of that at `c + it`.
pub fn perron_line_integral<S: DirichletSeries + ?Sized>(
    series: &S,
    k: u32,
    x: f64,
    contour: &ContourSpec,
) -> Result<f64> {
    crate::totient::check_k(k)?;
    if k < 2 {
        return Err(Error::domain("the truncated formula needs k >= 2"));
    }
    if !(x >= 2.0) {
        return Err(Error::domain(format!("x must be >= 2, got {x}")));
    }
    contour.validate()?;
    check_abscissa(contour.c, series.sigma_a())?;
    let log_x = x.ln();
    let c = contour.c;
    let integrand = |u: f64| {
        let s = Complex64::new(c, u);
        Ok(series.eval(s)? * (s * log_x).exp() / s.powu(k))
    };
    // The series' real-axis singularity at sigma_a sits c - sigma_a from the
    // line; near t = 0 the panels shrink in proportion to that distance.
    let near = contour.t.min(1.0);
    let near_panels = PanelSpec {
        max_len: contour.panels.max_len.min((c - series.sigma_a()) / 4.0),
        ..contour.panels
    };
    let v = integrate_panels(0.0, near, near_panels, integrand)?
        + integrate_panels(near, contour.t, contour.panels, integrand)?;
    Ok(v.re / std::f64::consts::PI)
}

/// Line integral, direct Riesz mean, and the envelope in one report.
pub fn perron_check<S: DirichletSeries + ?Sized>(
    series: &S,
    k: u32,
    x: f64,
    contour: &ContourSpec,
) -> Result<PerronResult> {
    let value = perron_line_integral(series, k, x, contour)?;
    let direct = series.riesz_mean(k, x);
    Ok(PerronResult {
        series: series.name(),
        k,
        x,
        c: contour.c,
        t: contour.t,
        value,
        direct,
        residual: (value - direct).abs(),
        envelope: perron_envelope(series, k, x, contour.c, contour.t)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_by_trial_division() {
        let expect = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (n, &e) in (1..=12).zip(&expect) {
            assert_eq!(totient(n), e);
        }
    }

    #[test]
    fn zeta_series_at_ten_and_a_half() {
        let x = 10.5;
        let contour = ContourSpec::new(200.0, x).with_c(2.0);
        let r = perron_check(&ZetaSeries, 2, x, &contour).unwrap();
        let hand: f64 = (1..=10).map(|n| (x / n as f64).ln()).sum();
        assert!((r.direct - hand).abs() < 1e-12);
        assert!(r.residual <= r.envelope, "{r:?}");
    }

    #[test]
    fn totient_series_at_ten() {
        let contour = ContourSpec::new(200.0, 10.0);
        let r = perron_check(&TotientSeries, 2, 10.0, &contour).unwrap();
        assert!(r.residual <= r.envelope, "{r:?}");
        let table = crate::totient::sieve_totients(10).unwrap();
        let oracle = crate::totient::riesz_mean(&table, crate::totient::RieszMeanRequest::new(2, 10.0)).unwrap();
        assert!((r.direct - oracle.value).abs() < 1e-12);
    }

    #[test]
    fn divergent_abscissa_is_rejected() {
        let contour = ContourSpec::new(50.0, 10.0).with_c(1.5);
        assert!(matches!(
            perron_line_integral(&TotientSeries, 2, 10.0, &contour),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn halving_panels_changes_little() {
        let contour = ContourSpec::new(200.0, 10.0);
        let a = perron_line_integral(&TotientSeries, 2, 10.0, &contour).unwrap();
        let fine = ContourSpec {
            panels: contour.panels.halved(),
            ..contour
        };
        let b = perron_line_integral(&TotientSeries, 2, 10.0, &fine).unwrap();
        assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }
}
