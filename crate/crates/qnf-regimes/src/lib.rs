//! Closed-form bound evaluators in exact arithmetic and the natural
//! fixed-point encoding of quantized network configurations.

mod bounds;
mod encoding;

pub use bounds::{
    log2_bracket_u64, lower_bound_combined, memory_redundancy, natural_encoding_bits, precision_lower_bound,
    regime_sweep, upper_bound_regime, LowerBound, LowerTerm, Regime, RegimeConstants, RegimeRow, UpperBound,
    LOG_FRAC_BITS,
};
pub use encoding::{decode_natural, encode_natural, natural_bit_length, EncodedNetwork};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegimeError {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("inconsistent constants: {0}")]
    Constants(String),
    #[error("configuration outside the encoded class: {0}")]
    Encoding(String),
    #[error(transparent)]
    Parse(#[from] qnf_core::ParseError),
}
