use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use ztl::distribution::{
    build_histogram, compare_char_fn, sample_normalized, tail_diagnostic, write_char_fn_csv, write_histogram_csv,
    DistributionSample, SampleMethod, SampleOptions, TailReport, YGrid,
};
use ztl::explicit::{
    perron_check, residual_diagnostic, write_residual_csv, ContourSpec, CorrectionOptions, PerronResult, TotientSeries,
    TrivialDenominator, ZetaSeries,
};
use ztl::numeric::fmt17;
use ztl::totient::{
    error_term_from_mean, read_sieve_cache, riesz_means_streaming, sieve_totients, smoothed_error, write_sieve_cache,
    ErrorTermValue, PrecisionMode, TotientTable,
};
use ztl::zeros::{
    derivative_scan, ingest_zero_table, j_minus_one_scan, read_cache, write_cache, zero_count_check, DerivativeScan,
    JScanRow, ZeroCountReport, ZeroTable,
};

use crate::{Command, Common, CorrectionArgs, Denominator, SampleArgs, Series};

/// A command line that parsed but asks for something unusable.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(common: &Common, command: Command) -> Result<()> {
    match command {
        Command::Sieve { n_max, k, x, out } => sieve(common, n_max, &k, x, out.as_deref()),
        Command::Zeros { k, out } => zeros(common, &k, &out),
        Command::Compare {
            k,
            x,
            t,
            corrections,
            out,
        } => compare(common, &k, &x, &t, &corrections, out.as_deref()),
        Command::PerronCheck {
            k,
            x,
            t,
            c,
            series,
            out,
        } => perron(&k, &x, &t, c, series, out.as_deref()),
        Command::Histogram { sample, bins, out } => histogram(common, &sample, bins as usize, &out),
        Command::Charfn {
            sample,
            freq,
            n_zeros,
            out,
        } => charfn(common, &sample, &freq, n_zeros, out.as_deref()),
        Command::Diagnostics { k, t, out } => diagnostics(common, &k, &t, out.as_deref()),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .map_err(ztl::Error::from)
                .with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn correction_options(args: &CorrectionArgs) -> CorrectionOptions {
    CorrectionOptions {
        m: args.trivial_terms,
        denominator: match args.trivial_denominator {
            Denominator::PowerK => TrivialDenominator::PowerK,
            Denominator::Square => TrivialDenominator::Square,
        },
        ..CorrectionOptions::default()
    }
}

/// Enriched zeros for `ks`: from `--cache` when it exists, otherwise from
/// `--zeros`, writing the cache afterwards when one was named.
fn load_zeros(common: &Common, ks: &[u32]) -> Result<ZeroTable> {
    if let Some(cache) = common.cache.as_deref().filter(|p| p.exists()) {
        eprintln!("reading enriched zeros from {}", cache.display());
        return read_cache(cache, ks).with_context(|| format!("reading {}", cache.display()));
    }
    let path = common
        .zeros
        .as_deref()
        .ok_or_else(|| usage("no zero table: pass --zeros or set ZTL_ZEROS_PATH"))?;
    let raw = ingest_zero_table(path, common.zeros_limit).with_context(|| format!("reading {}", path.display()))?;
    eprintln!("enriching {} zeros up to height {}", raw.len(), raw.max_gamma);
    let table = raw.enrich(ks)?;
    if let Some(cache) = common.cache.as_deref() {
        write_cache(&table, cache)?;
        eprintln!("wrote enriched cache {}", cache.display());
    }
    Ok(table)
}

fn load_sieve(common: &Common, n_max: u64) -> Result<TotientTable> {
    if let Some(path) = common.sieve_cache.as_deref().filter(|p| p.exists()) {
        let table = read_sieve_cache(path).with_context(|| format!("reading {}", path.display()))?;
        if table.n_max() >= n_max {
            eprintln!("reading sieve cache {} (n_max = {})", path.display(), table.n_max());
            return Ok(table);
        }
        eprintln!("sieve cache {} stops at {}, re-sieving", path.display(), table.n_max());
    }
    let table = sieve_totients(n_max)?;
    if let Some(path) = common.sieve_cache.as_deref() {
        write_sieve_cache(&table, path)?;
        eprintln!("wrote sieve cache {}", path.display());
    }
    Ok(table)
}

fn sieve(common: &Common, n_max: u64, ks: &[u32], xs: Option<Vec<f64>>, out: Option<&Path>) -> Result<()> {
    let table = load_sieve(common, n_max)?;
    let xs = xs.unwrap_or_else(|| {
        std::iter::successors(Some(10.0), |x| Some(x * 10.0))
            .take_while(|&x| x <= n_max as f64)
            .collect()
    });
    let precision = PrecisionMode::from(common.precision);
    let mut values = Vec::with_capacity(ks.len() * xs.len());
    for &k in ks {
        for &x in &xs {
            values.push(smoothed_error(&table, k, x, precision)?);
        }
    }
    let mut w = output(out)?;
    writeln!(w, "k,x,F,main_term,R,est_rounding")?;
    for v in values {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            v.k,
            fmt17(v.x),
            fmt17(v.f_value),
            fmt17(v.main_term),
            fmt17(v.r_value),
            fmt17(v.est_rounding)
        )?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ZerosSummary<'a> {
    source: &'a str,
    n_zeros: usize,
    max_gamma: f64,
    k: &'a [u32],
    cache: String,
}

fn zeros(common: &Common, ks: &[u32], out: &Path) -> Result<()> {
    let common = Common {
        cache: None,
        ..common.clone()
    };
    let table = load_zeros(&common, ks)?;
    write_cache(&table, out)?;
    write_json(
        None,
        &ZerosSummary {
            source: &table.source,
            n_zeros: table.len(),
            max_gamma: table.max_gamma,
            k: ks,
            cache: out.display().to_string(),
        },
    )
}

/// `R_{k-1}(x)` for each `x` by one streaming pass, so no table of size
/// `max x` is held.
fn direct_error_terms(k: u32, xs: &[f64], precision: PrecisionMode) -> Result<Vec<ErrorTermValue>> {
    if let Some(&x) = xs.iter().find(|&&x| !(x >= 2.0)) {
        return Err(ztl::Error::Domain(format!("x must be >= 2, got {x}")).into());
    }
    let means = riesz_means_streaming(xs, k, precision)?;
    let mut values = Vec::with_capacity(xs.len());
    for (&x, mean) in xs.iter().zip(means) {
        let v = error_term_from_mean(k, x, mean);
        if !v.is_admissible() && v.r_value != 0.0 {
            return Err(ztl::Error::Precision {
                estimate: v.est_rounding,
                magnitude: v.r_value.abs(),
            }
            .into());
        }
        values.push(v);
    }
    Ok(values)
}

#[derive(Serialize)]
struct CompareSummary {
    k: u32,
    exponents: Vec<(f64, f64)>,
    fitted_exponent: Option<f64>,
    max_ratio: f64,
}

fn compare(
    common: &Common,
    ks: &[u32],
    xs: &[f64],
    ts: &[f64],
    corrections: &CorrectionArgs,
    out: Option<&Path>,
) -> Result<()> {
    let table = load_zeros(common, ks)?;
    let opts = correction_options(corrections);
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &k in ks {
        let direct = direct_error_terms(k, xs, common.precision.into())?;
        let report = residual_diagnostic(&table, k, &direct, ts, &opts)?;
        summaries.push(CompareSummary {
            k,
            exponents: report.exponents.clone(),
            fitted_exponent: report.fitted_exponent,
            max_ratio: report.rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
        });
        rows.extend(report.rows);
    }
    let mut w = output(out)?;
    write_residual_csv(&rows, &mut w)?;
    w.flush()?;
    drop(w);
    if out.is_some() {
        write_json(None, &summaries)?;
    }
    Ok(())
}

fn perron(ks: &[u32], xs: &[f64], ts: &[f64], c: f64, series: Series, out: Option<&Path>) -> Result<()> {
    let mut results: Vec<PerronResult> = Vec::new();
    for &k in ks {
        for &x in xs {
            for &t in ts {
                let spec = ContourSpec::new(t, x).with_c(c);
                results.push(match series {
                    Series::Totient => perron_check(&TotientSeries, k, x, &spec)?,
                    Series::Zeta => perron_check(&ZetaSeries, k, x, &spec)?,
                });
            }
        }
    }
    let mut w = output(out)?;
    writeln!(w, "series,k,x,c,T,value,direct,residual,envelope")?;
    for r in results {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.series,
            r.k,
            fmt17(r.x),
            fmt17(r.c),
            fmt17(r.t),
            fmt17(r.value),
            fmt17(r.direct),
            fmt17(r.residual),
            fmt17(r.envelope)
        )?;
    }
    w.flush()?;
    Ok(())
}

fn sample(common: &Common, args: &SampleArgs) -> Result<(DistributionSample, Option<ZeroTable>)> {
    let (min, max, step) = args.y;
    let grid = match args.random {
        Some(n) => YGrid::Random {
            min,
            max,
            n,
            seed: args.seed,
        },
        None => YGrid::uniform(min, max, step),
    };
    let method = if args.direct {
        SampleMethod::Direct
    } else if args.hybrid {
        SampleMethod::Hybrid
    } else {
        SampleMethod::ZeroSum
    };
    let opts = SampleOptions {
        method,
        n_max: args.n_max,
        include_corrections: !args.no_corrections,
        corrections: correction_options(&args.corrections),
        precision: common.precision.into(),
    };
    let table = match method {
        SampleMethod::Direct => None,
        _ => Some(load_zeros(common, &[args.k])?),
    };
    let placeholder;
    let zeros = match &table {
        Some(t) => t,
        None => {
            placeholder = ZeroTable {
                records: Vec::new(),
                source: String::new(),
                max_gamma: 0.0,
            };
            &placeholder
        }
    };
    let s = sample_normalized(zeros, args.k, &grid, args.t, &opts)?;
    eprintln!(
        "sampled {} points (k = {}, T used = {:?}, {} zeros)",
        s.len(),
        s.k,
        s.t_used,
        s.n_zeros
    );
    if let Some(h) = &s.hybrid {
        eprintln!(
            "hybrid overlap: {} points, max |direct - zero sum| = {:e}, max ratio to envelope = {:e}",
            h.points.len(),
            h.max_discrepancy,
            h.max_ratio
        );
    }
    Ok((s, table))
}

#[derive(Serialize)]
struct HybridSummary {
    points: usize,
    max_discrepancy: f64,
    max_ratio: f64,
    within_envelope: bool,
}

#[derive(Serialize)]
struct HistogramSidecar {
    k: u32,
    t_requested: f64,
    t_used: Option<f64>,
    n_zeros: usize,
    method: SampleMethod,
    y_min: f64,
    y_max: f64,
    y_step: Option<f64>,
    random_seed: Option<u64>,
    corrections_included: bool,
    n: usize,
    bins: usize,
    mean: f64,
    std: f64,
    skewness: f64,
    unimodal: bool,
    hybrid: Option<HybridSummary>,
    histogram_csv: String,
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        let mut name = out.as_os_str().to_owned();
        name.push(".meta.json");
        PathBuf::from(name)
    } else {
        out.with_extension("json")
    }
}

fn histogram(common: &Common, args: &SampleArgs, bins: usize, out: &Path) -> Result<()> {
    let (s, _) = sample(common, args)?;
    let h = build_histogram(&s.values, bins)?;
    let mut w = output(Some(out))?;
    write_histogram_csv(&h, &mut w)?;
    w.flush()?;
    let sidecar = HistogramSidecar {
        k: s.k,
        t_requested: args.t,
        t_used: s.t_used,
        n_zeros: s.n_zeros,
        method: s.method,
        y_min: args.y.0,
        y_max: args.y.1,
        y_step: args.random.is_none().then_some(args.y.2),
        random_seed: args.random.map(|_| args.seed),
        corrections_included: s.corrections_included,
        n: h.n,
        bins: h.n_bins(),
        mean: h.mean,
        std: h.std,
        skewness: h.skewness,
        unimodal: h.is_unimodal(),
        hybrid: s.hybrid.as_ref().map(|c| HybridSummary {
            points: c.points.len(),
            max_discrepancy: c.max_discrepancy,
            max_ratio: c.max_ratio,
            within_envelope: c.within_envelope(),
        }),
        histogram_csv: out.display().to_string(),
    };
    write_json(Some(&sidecar_path(out)), &sidecar)?;
    write_json(None, &sidecar)
}

#[derive(Serialize)]
struct CharFnSummary {
    k: u32,
    n_values: usize,
    n_zeros: usize,
    max_gap_modulus: f64,
    max_gap_as_written: f64,
    max_tail_est: f64,
}

fn charfn(common: &Common, args: &SampleArgs, freq: &[f64], n_zeros: Option<usize>, out: Option<&Path>) -> Result<()> {
    if args.direct {
        return Err(usage(
            "charfn compares against Bessel products over zeros; --direct is not available",
        ));
    }
    let (s, table) = sample(common, args)?;
    let table = table.expect("zero-sum samples load a zero table");
    let n = n_zeros.unwrap_or(s.n_zeros);
    let c = compare_char_fn(&s.values, &table, s.k, freq, n)?;
    let mut w = output(out)?;
    write_char_fn_csv(&c, &mut w)?;
    w.flush()?;
    drop(w);
    let summary = CharFnSummary {
        k: s.k,
        n_values: s.len(),
        n_zeros: c.n_zeros,
        max_gap_modulus: c.max_gap_modulus,
        max_gap_as_written: c.max_gap_as_written,
        max_tail_est: c.tail_est.iter().copied().fold(0.0, f64::max),
    };
    if out.is_some() {
        write_json(None, &summary)
    } else {
        eprintln!(
            "max gap: modulus variant {:e}, as written {:e}",
            summary.max_gap_modulus, summary.max_gap_as_written
        );
        Ok(())
    }
}

#[derive(Serialize)]
struct Diagnostics {
    source: String,
    n_zeros: usize,
    max_gamma: f64,
    zero_counts: Vec<ZeroCountReport>,
    j_minus_one: Vec<JScanRow>,
    derivative_scan: DerivativeScan,
    tail: Vec<TailReport>,
}

fn diagnostics(common: &Common, ks: &[u32], ts: &[f64], out: Option<&Path>) -> Result<()> {
    let table = load_zeros(common, ks)?;
    let report = Diagnostics {
        source: table.source.clone(),
        n_zeros: table.len(),
        max_gamma: table.max_gamma,
        zero_counts: ts
            .iter()
            .map(|&t| zero_count_check(&table, t))
            .collect::<Result<_, _>>()?,
        j_minus_one: j_minus_one_scan(&table, ts)?,
        derivative_scan: derivative_scan(&table)?,
        tail: ks
            .iter()
            .map(|&k| tail_diagnostic(&table, k, ts))
            .collect::<Result<_, _>>()?,
    };
    write_json(out, &report)
}
