//! A three-stage construction that approximates a 1-Lipschitz function on
//! `[0, 1]` to within `3/(m²ℓ²n)` by a ReLU network of width
//! `600m + 2^{n+7}`, depth `101ℓ` and weights at most `max{8mn, 3^{n+2}}`.
//!
//! Stage `f₁` fits the samples on the grid `i/G`, `G = m²ℓ²n`, by a coarse
//! plateau function plus bit-extracted increments. Stage `f₂ = f₁ ∘ u` snaps
//! each plateau `[i/G, (i+1)/G − Δ]` onto its left grid point. Stage `f` takes
//! the median of three shifted copies of `f₂` to cover the gaps.

mod median;
mod params;
mod report;
mod samples;
mod steps;

pub use median::build_median;
pub use params::{params_from_budget, ApproxParams};
pub use report::{approx_error_report, ErrorReport, ErrorRow, Tabulation};
pub use samples::{LipschitzFn, LipschitzSamples};
pub use steps::{
    build_all, build_step1, build_step2, build_step3, plateau_points, shift_relu, step1_parts, step2_u, Stage,
    StageReport, Step1Parts,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LipschitzError {
    #[error("budget below D_a = 2000: {0}")]
    Capacity(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("sample {index} has magnitude above 1")]
    SampleRange { index: usize },
    #[error("Lipschitz check fails between samples {index} and {}", .index + 1)]
    NotLipschitz { index: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("reference grid: {0}")]
    Reference(String),
    #[error(transparent)]
    Parse(#[from] qnf_core::ParseError),
}

impl From<qnf_core::NetError> for LipschitzError {
    fn from(e: qnf_core::NetError) -> Self {
        LipschitzError::Construction(e.to_string())
    }
}

impl From<qnf_pwl::PwlError> for LipschitzError {
    fn from(e: qnf_pwl::PwlError) -> Self {
        LipschitzError::Construction(e.to_string())
    }
}

impl From<qnf_bitx::BitxError> for LipschitzError {
    fn from(e: qnf_bitx::BitxError) -> Self {
        LipschitzError::Construction(e.to_string())
    }
}
