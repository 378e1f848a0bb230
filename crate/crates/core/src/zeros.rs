//! Tables of nontrivial zero heights, their enrichment with ζ'(ρ) and
//! ζ(ρ - 1), and count and moment diagnostics over them.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{fmt17, linear_fit, CompensatedSum};
use crate::zeta::{self, refine_zero, MAX_HEIGHT};

/// Certificate threshold on `|ζ(1/2 + iγ)|` after refinement.
pub const ZERO_CERTIFICATE: f64 = 1.0e-6;
/// Below this `|ζ'(ρ)|` a zero is treated as multiple.
pub const SIMPLICITY_FLOOR: f64 = 1.0e-8;

/// First refinement bracket half-width, widened tenfold up to the maximum.
const BRACKET_START: f64 = 1.0e-5;
const BRACKET_MAX: f64 = 1.0e-3;

pub const CACHE_HEADER: &str = "index,gamma,re_zp,im_zp,re_zm1,im_zm1";

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroRecord {
    /// 1-based rank.
    pub index: usize,
    pub gamma: f64,
    pub zeta_prime_rho: Option<Complex64>,
    pub zeta_rho_minus_one: Option<Complex64>,
    /// `c_ρ(k) = ζ(ρ-1) / (ζ'(ρ) ρ^k)` for the precomputed `k`.
    pub coeff: BTreeMap<u32, Complex64>,
}

impl ZeroRecord {
    pub fn new(index: usize, gamma: f64) -> Self {
        Self {
            index,
            gamma,
            zeta_prime_rho: None,
            zeta_rho_minus_one: None,
            coeff: BTreeMap::new(),
        }
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.gamma)
    }

    pub fn is_enriched(&self) -> bool {
        self.zeta_prime_rho.is_some() && self.zeta_rho_minus_one.is_some()
    }

    fn unenriched(&self) -> Error {
        Error::Unenriched {
            index: self.index,
            gamma: self.gamma,
        }
    }

    pub fn zeta_prime(&self) -> Result<Complex64> {
        self.zeta_prime_rho.ok_or_else(|| self.unenriched())
    }

    /// `c_ρ(k)`, from the precomputed map when present.
    pub fn coefficient(&self, k: u32) -> Result<Complex64> {
        if let Some(c) = self.coeff.get(&k) {
            return Ok(*c);
        }
        let zp = self.zeta_prime()?;
        let zm1 = self.zeta_rho_minus_one.ok_or_else(|| self.unenriched())?;
        Ok(coefficient_from(zp, zm1, self.rho(), k))
    }
}

fn coefficient_from(zp: Complex64, zm1: Complex64, rho: Complex64, k: u32) -> Complex64 {
    zm1 / (zp * rho.powu(k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    pub records: Vec<ZeroRecord>,
    pub source: String,
    pub max_gamma: f64,
}

impl ZeroTable {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.gamma)
    }

    /// Number of zeros with `0 < γ ≤ t`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.records.partition_point(|r| r.gamma <= t)
    }

    /// Number of zeros with `0 < γ < t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.records.partition_point(|r| r.gamma < t)
    }

    pub fn is_enriched(&self) -> bool {
        self.records.iter().all(ZeroRecord::is_enriched)
    }

    /// Records with `γ < t`, all of which must be enriched.
    pub fn enriched_below(&self, t: f64) -> Result<&[ZeroRecord]> {
        let n = self.count_below(t);
        let slice = &self.records[..n];
        if let Some(r) = slice.iter().find(|r| !r.is_enriched()) {
            return Err(r.unenriched());
        }
        Ok(slice)
    }

    /// Keep only the first `n` records.
    pub fn truncated(&self, n: usize) -> ZeroTable {
        let records: Vec<ZeroRecord> = self.records.iter().take(n).cloned().collect();
        let max_gamma = records.last().map_or(0.0, |r| r.gamma);
        ZeroTable {
            records,
            source: self.source.clone(),
            max_gamma,
        }
    }

    /// Refine and enrich every record. Either every record succeeds or the
    /// first failure is returned and nothing is produced.
    pub fn enrich(&self, k_set: &[u32]) -> Result<ZeroTable> {
        let records = self
            .records
            .iter()
            .map(|r| enrich_zero(r, k_set))
            .collect::<Result<Vec<_>>>()?;
        for w in records.windows(2) {
            if w[1].gamma <= w[0].gamma {
                return Err(Error::Monotonicity {
                    line: w[1].index,
                    value: w[1].gamma,
                    previous: w[0].gamma,
                });
            }
        }
        let max_gamma = records.last().map_or(0.0, |r| r.gamma);
        Ok(ZeroTable {
            records,
            source: self.source.clone(),
            max_gamma,
        })
    }
}

/// Parse a zero table from text: one height per line, `#` comments, LF or
/// CRLF line endings. Blank lines are skipped.
pub fn parse_zero_table(text: &str, source: &str, limit: Option<usize>) -> Result<ZeroTable> {
    let mut records = Vec::new();
    let mut previous: Option<f64> = None;
    for (i, raw) in text.lines().enumerate() {
        if limit.is_some_and(|l| records.len() >= l) {
            break;
        }
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let gamma: f64 = line.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("not a decimal height: {line:?}"),
        })?;
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("height must be positive and finite, got {line}"),
            });
        }
        if let Some(prev) = previous {
            if gamma <= prev {
                return Err(Error::Monotonicity {
                    line: line_no,
                    value: gamma,
                    previous: prev,
                });
            }
        }
        previous = Some(gamma);
        records.push(ZeroRecord::new(records.len() + 1, gamma));
    }
    if records.is_empty() {
        return Err(Error::EmptyTable);
    }
    let max_gamma = records.last().unwrap().gamma;
    Ok(ZeroTable {
        records,
        source: source.to_string(),
        max_gamma,
    })
}

pub fn ingest_zero_table(path: impl AsRef<Path>, limit: Option<usize>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_zero_table(&text, &path.display().to_string(), limit)
}

/// Move an approximate height onto the nearest sign change of Z.
fn refine_height(gamma: f64) -> Result<f64> {
    let mut half = BRACKET_START;
    while half <= BRACKET_MAX * (1.0 + 1e-12) {
        if let Some(t) = refine_zero(gamma - half, gamma + half)? {
            return Ok(t);
        }
        half *= 10.0;
    }
    let modulus = zeta::zeta(Complex64::new(0.5, gamma))?.norm();
    Err(Error::NotAZero { gamma, modulus })
}

/// Refine the height of `record`, certify it as a zero, and attach
/// ζ'(ρ), ζ(ρ-1) and `c_ρ(k)` for each `k` in `k_set`.
pub fn enrich_zero(record: &ZeroRecord, k_set: &[u32]) -> Result<ZeroRecord> {
    if record.gamma > MAX_HEIGHT {
        return Err(Error::AccuracyUnreachable {
            t: record.gamma,
            budget: MAX_HEIGHT,
        });
    }
    let gamma = refine_height(record.gamma)?;
    let rho = Complex64::new(0.5, gamma);
    let (value, zp) = zeta::zeta_and_deriv(rho)?;
    if value.norm() > ZERO_CERTIFICATE {
        return Err(Error::NotAZero {
            gamma,
            modulus: value.norm(),
        });
    }
    if zp.norm() < SIMPLICITY_FLOOR {
        return Err(Error::Simplicity {
            gamma,
            modulus: zp.norm(),
        });
    }
    let zm1 = zeta::zeta(rho - 1.0)?;
    Ok(with_values(record.index, gamma, zp, zm1, k_set))
}

fn with_values(index: usize, gamma: f64, zp: Complex64, zm1: Complex64, k_set: &[u32]) -> ZeroRecord {
    let rho = Complex64::new(0.5, gamma);
    let coeff = k_set.iter().map(|&k| (k, coefficient_from(zp, zm1, rho, k))).collect();
    ZeroRecord {
        index,
        gamma,
        zeta_prime_rho: Some(zp),
        zeta_rho_minus_one: Some(zm1),
        coeff,
    }
}

pub fn write_cache(table: &ZeroTable, path: impl AsRef<Path>) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{CACHE_HEADER}")?;
    for r in &table.records {
        let zp = r.zeta_prime()?;
        let zm1 = r.zeta_rho_minus_one.ok_or_else(|| r.unenriched())?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.index,
            fmt17(r.gamma),
            fmt17(zp.re),
            fmt17(zp.im),
            fmt17(zm1.re),
            fmt17(zm1.im)
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Load an enriched cache; coefficients for `k_set` are recomputed.
pub fn read_cache(path: impl AsRef<Path>, k_set: &[u32]) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end_matches('\r') == CACHE_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {CACHE_HEADER}"),
            })
        }
    }
    let mut records: Vec<ZeroRecord> = Vec::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(bad(format!("expected 6 fields, got {}", fields.len())));
        }
        let index: usize = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad index {:?}", fields[0])))?;
        let mut v = [0.0f64; 5];
        for (slot, f) in v.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| bad(format!("bad number {f:?}")))?;
        }
        if let Some(prev) = records.last() {
            if v[0] <= prev.gamma {
                return Err(Error::Monotonicity {
                    line: line_no,
                    value: v[0],
                    previous: prev.gamma,
                });
            }
        }
        records.push(with_values(
            index,
            v[0],
            Complex64::new(v[1], v[2]),
            Complex64::new(v[3], v[4]),
            k_set,
        ));
    }
    if records.is_empty() {
        return Err(Error::EmptyTable);
    }
    let max_gamma = records.last().unwrap().gamma;
    Ok(ZeroTable {
        records,
        source: path.display().to_string(),
        max_gamma,
    })
}

/// Main term of the zero-counting function, `(T/2π) ln(T/2πe)`.
pub fn count_main_term(t: f64) -> f64 {
    use std::f64::consts::{E, TAU};
    t / TAU * (t / (TAU * E)).ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroCountReport {
    pub t: f64,
    pub observed: usize,
    pub main_term: f64,
    pub residual: f64,
    /// `2 ln T + 5`.
    pub bound: f64,
    pub within_bound: bool,
}

pub fn zero_count_check(table: &ZeroTable, t: f64) -> Result<ZeroCountReport> {
    if t > table.max_gamma {
        return Err(Error::domain(format!(
            "T = {t} is beyond the table's last height {}",
            table.max_gamma
        )));
    }
    let observed = table.count_up_to(t);
    let main_term = count_main_term(t);
    let residual = observed as f64 - main_term;
    let bound = 2.0 * t.ln() + 5.0;
    Ok(ZeroCountReport {
        t,
        observed,
        main_term,
        residual,
        bound,
        within_bound: residual.abs() <= bound,
    })
}

/// `J_{-1}(T) = Σ_{0<γ≤T} |ζ'(ρ)|^{-2}`.
pub fn j_minus_one(table: &ZeroTable, t: f64) -> Result<f64> {
    let mut sum = CompensatedSum::new();
    for r in &table.records[..table.count_up_to(t)] {
        sum.add(1.0 / r.zeta_prime()?.norm_sqr());
    }
    Ok(sum.value())
}

#[derive(Debug, Clone, Serialize)]
pub struct JScanRow {
    pub t: f64,
    pub j_minus_one: f64,
    pub ratio: f64,
}

pub fn j_minus_one_scan(table: &ZeroTable, ts: &[f64]) -> Result<Vec<JScanRow>> {
    ts.iter()
        .map(|&t| {
            let j = j_minus_one(table, t)?;
            Ok(JScanRow {
                t,
                j_minus_one: j,
                ratio: j / t,
            })
        })
        .collect()
}

/// Scan of `1/(|ζ'(ρ)| γ^θ)` over the enriched zeros.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeScan {
    pub n_zeros: usize,
    /// Largest `1/(|ζ'(ρ)| γ^{0.4})` and where it occurs.
    pub max_ratio_040: f64,
    pub argmax_gamma_040: f64,
    /// Least-squares slope of `ln(1/(|ζ'(ρ)| γ^{1/2}))` against `ln γ`.
    pub trend_slope_050: f64,
    /// `exp` of the mean of `ln(1/(|ζ'(ρ)| γ^{1/2}))`.
    pub fitted_constant_050: f64,
    /// Fraction of zeros whose `1/(|ζ'(ρ)| γ^{1/2})` exceeds the fitted
    /// constant, in the lower and upper halves of the table.
    pub exceed_fraction_lower: f64,
    pub exceed_fraction_upper: f64,
}

pub fn derivative_scan(table: &ZeroTable) -> Result<DerivativeScan> {
    let n = table.len();
    if n == 0 {
        return Err(Error::EmptyTable);
    }
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax = 0.0;
    let mut log_g = Vec::with_capacity(n);
    let mut log_y = Vec::with_capacity(n);
    for r in &table.records {
        let zp = r.zeta_prime()?.norm();
        let v = 1.0 / (zp * r.gamma.powf(0.4));
        if v > max_ratio {
            max_ratio = v;
            argmax = r.gamma;
        }
        log_g.push(r.gamma.ln());
        log_y.push(-(zp.ln() + 0.5 * r.gamma.ln()));
    }
    let slope = linear_fit(&log_g, &log_y).map_or(0.0, |(s, _)| s);
    let mean_log: f64 = log_y.iter().sum::<f64>() / n as f64;
    let half = n / 2;
    let frac = |ys: &[f64]| {
        if ys.is_empty() {
            0.0
        } else {
            ys.iter().filter(|&&y| y > mean_log).count() as f64 / ys.len() as f64
        }
    };
    Ok(DerivativeScan {
        n_zeros: n,
        max_ratio_040: max_ratio,
        argmax_gamma_040: argmax,
        trend_slope_050: slope,
        fitted_constant_050: mean_log.exp(),
        exceed_fraction_lower: frac(&log_y[..half]),
        exceed_fraction_upper: frac(&log_y[half..]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST_THREE: &str = "14.134725142\n21.022039639\n25.010857580";

    #[test]
    fn parse_examples() {
        let t = parse_zero_table(FIRST_THREE, "inline", None).unwrap();
        assert_eq!(t.len(), 3);
        assert!((t.max_gamma - 25.01).abs() < 0.01);
        assert_eq!(parse_zero_table(FIRST_THREE, "inline", Some(1)).unwrap().len(), 1);

        match parse_zero_table("21.0\n14.1", "inline", None) {
            Err(Error::Monotonicity { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_zero_table("# only\n\n", "x", None),
            Err(Error::EmptyTable)
        ));
        match parse_zero_table("# h\r\n14.13\r\nabc\r\n", "x", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let crlf = parse_zero_table("# header\r\n14.134725\r\n21.022040\r\n", "x", None).unwrap();
        assert_eq!(crlf.len(), 2);
    }

    #[test]
    fn enrichment_of_first_zero() {
        let t = parse_zero_table(FIRST_THREE, "inline", None).unwrap();
        let e = t.enrich(&[2, 3, 4]).unwrap();
        let r = &e.records[0];
        assert!(r.gamma > 14.13 && r.gamma < 14.14);
        assert!(zeta::zeta(r.rho()).unwrap().norm() < 1e-12);
        let c2 = r.coefficient(2).unwrap();
        let c3 = r.coefficient(3).unwrap();
        assert!((c3 * r.rho() - c2).norm() <= 1e-12 * c2.norm());
        let zp = r.zeta_prime_rho.unwrap();
        let zm1 = r.zeta_rho_minus_one.unwrap();
        let expect = zm1.norm() / (zp.norm() * r.rho().norm_sqr());
        assert!((c2.norm() - expect).abs() <= 1e-14 * expect);
        // lazily computed coefficient equals a stored one
        let mut bare = r.clone();
        bare.coeff.clear();
        assert_eq!(bare.coefficient(3).unwrap(), c3);
    }

    #[test]
    fn non_zero_height_is_rejected() {
        let t = parse_zero_table("14.2", "inline", None).unwrap();
        match t.enrich(&[2]) {
            Err(Error::NotAZero { modulus, .. }) => assert!(modulus > 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unenriched_records_are_reported() {
        let t = parse_zero_table(FIRST_THREE, "inline", None).unwrap();
        assert!(matches!(j_minus_one(&t, 30.0), Err(Error::Unenriched { index: 1, .. })));
        assert_eq!(j_minus_one(&t, 14.0).unwrap(), 0.0);
    }

    #[test]
    fn cache_round_trip_is_bit_identical() {
        let t = parse_zero_table(FIRST_THREE, "inline", None).unwrap();
        let e = t.enrich(&[2, 3]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeros.csv");
        write_cache(&e, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(CACHE_HEADER));
        let back = read_cache(&path, &[2, 3]).unwrap();
        assert_eq!(back.records, e.records);
    }

    #[test]
    fn count_report() {
        let t = parse_zero_table(FIRST_THREE, "inline", None).unwrap();
        let r = zero_count_check(&t, 14.0).unwrap();
        assert_eq!(r.observed, 0);
        let r = zero_count_check(&t, t.max_gamma).unwrap();
        assert_eq!(r.observed, 3);
        assert!(zero_count_check(&t, 30.0).is_err());
        assert!((count_main_term(100.0) - 28.127).abs() < 1e-3);
    }
}
