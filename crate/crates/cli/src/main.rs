mod commands;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grid::{parse_grid, parse_orders, parse_range};

/// Exit status for malformed command lines.
const EXIT_USAGE: u8 = 64;
const EXIT_PRECISION: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ztl",
    version,
    about = "Smoothed totient error terms, zeta-zero explicit formulas, and their distributions"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Zero table (one height per line, `#` comments).
    #[arg(long, global = true, env = "ZTL_ZEROS_PATH")]
    zeros: Option<PathBuf>,
    /// Read only the first N heights of the zero table.
    #[arg(long, global = true)]
    zeros_limit: Option<usize>,
    /// Enriched-zero cache: loaded when present, written otherwise.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Binary sieve cache: loaded when large enough, written otherwise.
    #[arg(long, global = true)]
    sieve_cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Precision::Compensated)]
    precision: Precision,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Precision {
    Standard,
    Compensated,
    Extended,
}

impl From<Precision> for ztl::totient::PrecisionMode {
    fn from(p: Precision) -> Self {
        match p {
            Precision::Standard => Self::Standard,
            Precision::Compensated => Self::Compensated,
            Precision::Extended => Self::Extended,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Denominator {
    /// `(-2m)^k`.
    PowerK,
    /// `(-2m)^2`.
    Square,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Series {
    Totient,
    Zeta,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sieve φ up to n_max and print F_{k-1}(x) and R_{k-1}(x).
    Sieve {
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value = "2", value_parser = parse_orders)]
        k: ::std::vec::Vec<u32>,
        #[arg(long, value_parser = parse_grid)]
        x: Option<::std::vec::Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refine and enrich the zero table and write the enriched cache.
    Zeros {
        #[arg(long, default_value = "2,3", value_parser = parse_orders)]
        k: ::std::vec::Vec<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Direct R_{k-1}(x) against the truncated explicit formula.
    Compare {
        #[arg(long, value_parser = parse_orders)]
        k: ::std::vec::Vec<u32>,
        #[arg(long, value_parser = parse_grid)]
        x: ::std::vec::Vec<f64>,
        #[arg(long = "T", value_parser = parse_grid)]
        t: ::std::vec::Vec<f64>,
        #[command(flatten)]
        corrections: CorrectionArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated Perron integral against the direct Riesz mean.
    PerronCheck {
        #[arg(long, value_parser = parse_orders)]
        k: ::std::vec::Vec<u32>,
        #[arg(long, value_parser = parse_grid)]
        x: ::std::vec::Vec<f64>,
        #[arg(long = "T", value_parser = parse_grid)]
        t: ::std::vec::Vec<f64>,
        #[arg(long, default_value_t = 2.25)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Series::Totient)]
        series: Series,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of e^{-y/2} R_{k-1}(e^y) with a JSON sidecar of moments.
    Histogram {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(10..))]
        bins: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical characteristic function against Bessel products.
    Charfn {
        #[command(flatten)]
        sample: SampleArgs,
        /// Frequencies at which to compare.
        #[arg(long = "t", value_parser = parse_grid, default_value = "0:2:0.1")]
        freq: ::std::vec::Vec<f64>,
        /// Zeros in the Bessel products; defaults to all used by the sample.
        #[arg(long)]
        n_zeros: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero counts, J_{-1} scan, derivative scan and tail sums as JSON.
    Diagnostics {
        #[arg(long, default_value = "2,3", value_parser = parse_orders)]
        k: ::std::vec::Vec<u32>,
        #[arg(long = "T", value_parser = parse_grid, default_value = "50,100,250,500")]
        t: ::std::vec::Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct CorrectionArgs {
    /// Denominator of the trivial-zero terms.
    #[arg(long, value_enum, default_value_t = Denominator::PowerK)]
    trivial_denominator: Denominator,
    /// Number of trivial zeros included.
    #[arg(long, default_value_t = 5)]
    trivial_terms: u32,
}

#[derive(Args, Debug, Clone)]
struct SampleArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=8))]
    k: u32,
    /// y range as min:max:step; with --random only min and max are used.
    #[arg(long, value_parser = parse_range, default_value = "1:10000:1")]
    y: (f64, f64, f64),
    #[arg(long = "T")]
    t: f64,
    /// Draw this many uniform y values from [min y, max y] instead.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also sum directly where e^y <= --n-max and report the discrepancy.
    #[arg(long, conflicts_with = "direct")]
    hybrid: bool,
    /// Sum directly everywhere instead of over zeros.
    #[arg(long)]
    direct: bool,
    #[arg(long, default_value_t = 1_000_000_000)]
    n_max: u64,
    /// Leave out the residue and trivial-zero corrections.
    #[arg(long)]
    no_corrections: bool,
    #[command(flatten)]
    corrections: CorrectionArgs,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<ztl::Error>() {
        if matches!(e, ztl::Error::Precision { .. }) {
            return EXIT_PRECISION;
        }
        if e.is_data_error() {
            return EXIT_DATA;
        }
        if matches!(e, ztl::Error::Domain(_)) {
            return EXIT_USAGE;
        }
        return 1;
    }
    if err.downcast_ref::<commands::UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_DATA;
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match commands::run(&cli.common, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
