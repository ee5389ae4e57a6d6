use std::fmt;

use thiserror::Error;

/// A single structural defect found by [`crate::NetworkConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Layer (1-based) has a matrix with zero rows.
    EmptyLayer { layer: usize },
    /// Columns of `A_layer` differ from the output dimension of the previous layer.
    Chaining { layer: usize, expected: usize, found: usize },
    /// Bias length differs from the row count of `A_layer`.
    BiasLength { layer: usize, expected: usize, found: usize },
    /// The configuration has no layers.
    NoLayers,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyLayer { layer } => write!(f, "layer {layer}: empty layer"),
            Violation::Chaining { layer, expected, found } => write!(
                f,
                "layer {layer}: matrix has {found} columns, expected {expected}"
            ),
            Violation::BiasLength { layer, expected, found } => write!(
                f,
                "layer {layer}: bias has length {found}, expected {expected}"
            ),
            Violation::NoLayers => write!(f, "configuration has no layers"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("invalid configuration: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("input has length {found}, network expects {expected}")]
    InputDim { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("argument error: {0}")]
    Argument(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
