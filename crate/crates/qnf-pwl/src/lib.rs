//! Bounded piecewise-linear functions on the real line with breakpoints in
//! `[0, 1]` and constant tails, and their ReLU network realizations.
//!
//! * [`realize_shallow`]: one hidden layer of width `M`.
//! * [`realize_deep`]: width `≤ 20u`, depth `≤ 30v` for any `u²v ≥ M`, built
//!   from a hat-basis split into two-hidden-layer pieces and a deep block
//!   network that accumulates them.
//! * [`realize_deep_scaled`]: the same architecture with weight magnitude at
//!   most `2w`, obtained by normalizing and rescaling layer by layer.

mod deep;
mod function;
mod shallow;

pub use deep::{
    block_sum_network, deep_magnitude_bound, plan_deep, realize_deep, realize_deep_scaled,
    two_layer_parts, DeepPlan, PartTriple,
};
pub use function::{hat_basis, mesh_stats, MeshStats, PiecewiseLinear, PwlError, ReluExpansion};
pub use shallow::{realize_shallow, shallow_coefficients};
