//! Network transformations that trade depth for weight precision or for
//! weight magnitude while keeping the realization exactly equal.

mod certify;
mod horner;
mod magnitude;
mod precision;
mod weights;

pub use certify::{certify_equivalence, EquivRow};
pub use horner::{decompose_affine, horner_chain, ChainLayer};
pub use magnitude::{amplification_block, depth_weight_factor, depth_weight_transform};
pub use precision::{depth_precision_transform, split_digits, DigitSplit};
pub use weights::WeightSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TradeoffError {
    #[error("entry {value} at ({row}, {col}) has no greedy expansion over the base set with w = {w}, k = {k}")]
    Decomposition { row: usize, col: String, value: String, w: String, k: usize },
    #[error("weight {value} in layer {layer} lies outside Q_{{{b}}}^{{{a}}}")]
    OutsideSet { layer: usize, value: String, a: u64, b: u64 },
    #[error("infeasible tradeoff: K = {0} < 1")]
    Infeasible(String),
    #[error("argument error: {0}")]
    Argument(String),
}
