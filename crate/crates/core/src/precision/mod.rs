//! High-precision reals and the two explicit rotation-number constants.

mod bigreal;
mod constants;
mod recursion;

pub use bigreal::{bits_to_digits, digits_to_bits, format_fixed, BigReal};
pub use constants::{
    alpha_double_star, alpha_star, literal_ratio_estimate, product_partial, ratio_estimate,
    Constant, ConstantValue,
};
pub use recursion::{recursion_term, RecursionKind, RecursionState};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrecisionError {
    #[error("index {n} is below the base index {base} of {kind}")]
    BelowBase { kind: &'static str, n: i64, base: i64 },
    #[error("cannot parse number {0}")]
    Parse(String),
    #[error("target digits must be at least 1")]
    NoDigits,
    #[error(
        "working precision exhausted at {bits} bits: last difference {last_diff}, radius {radius}"
    )]
    Exhausted { bits: u32, last_diff: String, radius: String },
    #[error("ratio and product forms disagree: {ratio} vs {product}")]
    CrossCheck { ratio: String, product: String },
}
