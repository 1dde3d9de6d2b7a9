//! Dense matrices over exact polynomials and high-precision reals.

mod exact;
mod family;
mod matrix;
mod numeric;
mod text;

pub use exact::{factor, parse_decimal_rational, Exact, Factored, Monomial, Valuation};
pub use family::{product_along, MatrixFamily};
pub use matrix::{Entry, Matrix};
pub use numeric::{frobenius, gram, max_abs_entry, op_norm, spectral_radius};
pub use text::{format_exact, format_numeric, parse_matrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("{method} did not converge (residual {residual:e})")]
    NonConvergence { method: &'static str, residual: f64 },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error("no value for named constant {0:?}")]
    MissingSymbol(String),
    #[error("symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },
    #[error("family has no members")]
    EmptyFamily,
}
