//! Floating-point plumbing: double-double arithmetic, compensated sums,
//! Gauss–Legendre panels, and fixed 17-digit output formatting.

pub mod dd;
pub mod quadrature;
pub mod sum;

pub use dd::{ComplexDD, DoubleDouble};
pub use quadrature::{integrate_panels, GaussLegendre, PanelSpec};
pub use sum::{CompensatedSum, ExtendedSum, NaiveSum};

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Ordinary least squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
