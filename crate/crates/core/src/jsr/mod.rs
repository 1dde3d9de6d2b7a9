//! Joint spectral radius bounds by enumeration, plus norm-growth
//! diagnostics along a given sequence.

mod bounds;
mod growth;
mod screen;

pub use bounds::{
    jsr_bounds, kron_jsr_check, JsrBounds, JsrConfig, JsrSummary, KronCheck, MAX_CERTIFIED, RATE_SCREEN_TOL,
    SCREEN_TOL,
};
pub use growth::{
    extremality_diagnostic, growth_report, Extremality, GrowthRecord, GrowthReport, Verdict, RATE_TOL,
    RENORM_EVERY, STRONG_DROP,
};

use thiserror::Error;

use crate::families::FamiliesError;
use crate::linalg::LinalgError;
use crate::words::WordsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JsrError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Families(#[from] FamiliesError),
    #[error("enumeration depth must be at least 1")]
    ZeroDepth,
    #[error("growth length must be at least 1")]
    ZeroLength,
    #[error("reference rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("sequence symbol {symbol} has no matrix in a family of {family}")]
    SymbolOutOfRange { symbol: u32, family: usize },
}
