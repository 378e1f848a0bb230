use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("sieve of size {requested} needs {bytes} bytes, over the {budget}-byte budget")]
    Capacity { requested: u64, bytes: u64, budget: u64 },

    /// The accumulated rounding estimate swamps the quantity being computed.
    #[error("precision lost: rounding estimate {estimate:e} vs magnitude {magnitude:e}")]
    Precision { estimate: f64, magnitude: f64 },

    #[error("pole at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("height |t| = {t} exceeds the evaluation budget {budget}")]
    AccuracyUnreachable { t: f64, budget: f64 },

    #[error("near-zero denominator |zeta(s)| = {modulus:e} at s = {re} + {im}i")]
    NearZeroDenominator { re: f64, im: f64, modulus: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: height {value} does not exceed the previous height {previous}")]
    Monotonicity { line: usize, value: f64, previous: f64 },

    #[error("zero table is empty")]
    EmptyTable,

    #[error("zero #{index} (gamma = {gamma}) has not been enriched")]
    Unenriched { index: usize, gamma: f64 },

    #[error("zero table only reaches height {max_gamma}, {requested} requested")]
    TableTooShort { requested: f64, max_gamma: f64 },

    #[error("|zeta'(rho)| = {modulus:e} at gamma = {gamma}: zero is not simple")]
    Simplicity { gamma: f64, modulus: f64 },

    #[error("height {gamma} is not a zero: |zeta(1/2 + i gamma)| = {modulus:e}")]
    NotAZero { gamma: f64, modulus: f64 },

    #[error("quadrature needs {panels} panels, over the budget of {budget}")]
    Quadrature { panels: usize, budget: usize },

    #[error("abscissa c = {c} does not exceed max(sigma_a, 0) = {sigma_a}")]
    Divergence { c: f64, sigma_a: f64 },

    #[error("no zero-gap midpoint at or below T = {requested} lies above the first zero")]
    Snap { requested: f64 },

    #[error("sample range is degenerate (min = max = {value})")]
    DegenerateRange { value: f64 },

    #[error("series Bessel evaluation needs |z| <= 30, got {modulus}")]
    Range { modulus: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures caused by input data (tables, caches, files)
    /// rather than by the numerics.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Monotonicity { .. }
                | Error::EmptyTable
                | Error::Unenriched { .. }
                | Error::TableTooShort { .. }
                | Error::NotAZero { .. }
                | Error::Simplicity { .. }
                | Error::Io(_)
        )
    }
}
