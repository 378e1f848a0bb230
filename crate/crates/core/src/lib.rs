//! Smoothed error terms of the summatory totient, explicit formulas over the
//! nontrivial zeros of ζ, and the limiting distributions they produce.

pub mod distribution;
pub mod error;
pub mod explicit;
pub mod numeric;
pub mod totient;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
