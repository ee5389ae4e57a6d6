//! Ternary codes over the reduced alphabet {0, 1} and the decoder networks
//! `g`, `G_{N,L}` and `F_{N,L}` that read their digits back out.

mod decoder;
mod ternary;

pub use decoder::{build_extractor, build_g, build_g_power, build_indicator, extract, verify_exhaustive, VerifyRow};
pub use ternary::{ternary_encode, ternary_value, TernaryCode};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BitxError {
    #[error("digit {digit} at position {index} is outside {{0, 1}}")]
    Digit { index: usize, digit: u8 },
    #[error("argument error: {0}")]
    Argument(String),
    #[error("construction bug: extractor output {0} is not the expected integer")]
    Construction(String),
}
