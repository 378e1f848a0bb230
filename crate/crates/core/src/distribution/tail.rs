//! Partial sums over zeros that separate bounded (`k ≥ 3`) from unbounded
//! (`k = 2`) normalized error terms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::zeros::ZeroTable;

/// Relative increment from `T` to `2T` below which `S_k` counts as settled.
const CONVERGENCE_RATIO: f64 = 0.25;
/// Growth factor from `T` to `2T` that `D` must exceed.
const DIVERGENCE_FACTOR: f64 = 1.02;

#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub t: f64,
    pub n_zeros: usize,
    /// `S_k(T) = Σ_{γ<T} |c_ρ(k)|`.
    pub s_k: f64,
    /// `D(T) = Σ_{γ<T} 1/(|ζ'(ρ)| γ)`.
    pub d: f64,
    /// `Σ_{γ<T} γ^{-2}`.
    pub inv_gamma_sq: f64,
    /// `Σ_{γ<T} |ζ'(ρ)|^{-2}`.
    pub j_minus_one: f64,
    /// `Σ_{γ<T} |ζ'(ρ)|^{-2} γ^{-2(k-2)}` summed term by term.
    pub weighted_direct: f64,
    /// The same sum rebuilt from `J_{-1}` by partial summation.
    pub weighted_partial_summation: f64,
}

/// Behaviour of the relevant partial sum between `T` and `2T`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailSignature {
    /// `k ≥ 3`: `(S_k(2T) - S_k(T)) / S_k(T)`, expected small.
    Convergence {
        t: f64,
        ratio: f64,
        threshold: f64,
        pass: bool,
    },
    /// `k = 2`: `D(2T) / D(T)`, expected to keep growing.
    Divergence {
        t: f64,
        ratio: f64,
        threshold: f64,
        pass: bool,
    },
}

impl TailSignature {
    pub fn pass(&self) -> bool {
        match self {
            TailSignature::Convergence { pass, .. } | TailSignature::Divergence { pass, .. } => *pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub k: u32,
    pub rows: Vec<TailRow>,
    /// One entry per `T` in the grid with `2T` inside the table.
    pub signatures: Vec<TailSignature>,
}

fn tail_row(table: &ZeroTable, k: u32, t: f64) -> Result<TailRow> {
    if t > table.max_gamma {
        return Err(Error::TableTooShort {
            requested: t,
            max_gamma: table.max_gamma,
        });
    }
    let records = table.enriched_below(t)?;
    let power = 2 * (k as i32 - 2);
    let (mut s_k, mut d, mut g2, mut j, mut w) = (
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
    );
    // J_{-1} is a step function; integrate J(u) u^{3-2k} exactly between zeros
    let mut integral = CompensatedSum::new();
    let exponent = 4 - 2 * k as i32;
    for (i, r) in records.iter().enumerate() {
        let zp2 = r.zeta_prime()?.norm_sqr();
        s_k.add(r.coefficient(k)?.norm());
        d.add(1.0 / (zp2.sqrt() * r.gamma));
        g2.add(r.gamma.powi(-2));
        j.add(1.0 / zp2);
        w.add(1.0 / (zp2 * r.gamma.powi(power)));
        if exponent != 0 {
            let upper = records.get(i + 1).map_or(t, |next| next.gamma);
            let span = (upper.powi(exponent) - r.gamma.powi(exponent)) / exponent as f64;
            integral.add(j.value() * span);
        }
    }
    let j_value = j.value();
    let partial = j_value / t.powi(power) + (2 * k as i32 - 4) as f64 * integral.value();
    Ok(TailRow {
        t,
        n_zeros: records.len(),
        s_k: s_k.value(),
        d: d.value(),
        inv_gamma_sq: g2.value(),
        j_minus_one: j_value,
        weighted_direct: w.value(),
        weighted_partial_summation: partial,
    })
}

/// Tail sums at every `T` in `t_grid`, plus the convergence (`k ≥ 3`) or
/// divergence (`k = 2`) signature between `T` and `2T` where the table
/// reaches that far.
pub fn tail_diagnostic(table: &ZeroTable, k: u32, t_grid: &[f64]) -> Result<TailReport> {
    crate::totient::check_k(k)?;
    if k < 2 {
        return Err(Error::domain("tail diagnostics need k >= 2"));
    }
    let rows = t_grid
        .iter()
        .map(|&t| tail_row(table, k, t))
        .collect::<Result<Vec<_>>>()?;
    let mut signatures = Vec::new();
    for row in &rows {
        if 2.0 * row.t > table.max_gamma || row.n_zeros == 0 {
            continue;
        }
        let doubled = tail_row(table, k, 2.0 * row.t)?;
        signatures.push(if k >= 3 {
            let ratio = (doubled.s_k - row.s_k) / row.s_k;
            TailSignature::Convergence {
                t: row.t,
                ratio,
                threshold: CONVERGENCE_RATIO,
                pass: ratio <= CONVERGENCE_RATIO,
            }
        } else {
            let ratio = doubled.d / row.d;
            TailSignature::Divergence {
                t: row.t,
                ratio,
                threshold: DIVERGENCE_FACTOR,
                pass: ratio >= DIVERGENCE_FACTOR,
            }
        });
    }
    Ok(TailReport { k, rows, signatures })
}
