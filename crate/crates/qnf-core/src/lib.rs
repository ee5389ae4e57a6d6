//! Exact ReLU network configurations.
//!
//! A [`NetworkConfig`] is a sequence of affine layers `(A_i, b_i)` over exact
//! rationals. Its realization alternates the affine maps with the entrywise
//! ReLU `ρ(x) = max{x, 0}`, omitting ρ after the last layer.

mod dyadic;
mod error;
mod eval;
mod json;
mod matrix;
mod network;
pub mod par;
pub mod rational;
pub mod sample;

pub use dyadic::DyadicSet;
pub use error::{NetError, Violation};
pub use eval::CompiledNetwork;
pub use json::{config_from_json, config_to_json, parse_json, JsonRational, ParseError};
pub use matrix::Matrix;
pub use network::{Layer, NetworkConfig, NetworkMetrics};
pub use rational::Rational;
