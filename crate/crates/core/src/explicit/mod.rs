//! The explicit formula for `R_{k-1}(x)`: kernel and Perron integrals on
//! vertical lines, the sum over nontrivial zeros, the residues left over
//! when the contour is shifted, and residual diagnostics against direct
//! summation.

mod corrections;
mod diagnostic;
mod kernel;
mod perron;
mod zero_sum;

pub(crate) use zero_sum::{oscillatory_terms, EXTENDED_PHASE_ABOVE};

pub use corrections::{
    corrections, residue_at_zero, residue_at_zero_circle, residue_at_zero_taylor, trivial_zero_sum, CorrectionOptions,
    Corrections, TrivialDenominator, RESIDUE_NODES, RESIDUE_RADIUS,
};
pub use diagnostic::{
    quotient_scan, residual_diagnostic, write_residual_csv, QuotientScanRow, ResidualReport, ResidualRow,
    RESIDUAL_CSV_HEADER,
};
pub use kernel::{
    kernel_closed_form, kernel_envelope, kernel_integral, kernel_integral_with, KernelMode, KernelResult,
};
pub use perron::{
    perron_check, perron_envelope, perron_line_integral, ContourSpec, DirichletSeries, PerronResult, TotientSeries,
    ZetaSeries,
};
pub use zero_sum::{
    oscillatory_sum, snap_height, zero_sum, zero_sum_envelope, zero_sum_with, ZeroSumResult, MIN_HALF_GAP,
};
