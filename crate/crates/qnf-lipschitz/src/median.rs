use num_traits::Zero;
use qnf_core::rational::int;
use qnf_core::{Layer, Matrix, NetworkConfig, Rational};

fn rows(entries: &[&[i64]]) -> Matrix {
    let cols = entries[0].len();
    Matrix::from_dense(entries.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(), cols)
}

/// Middle order statistic of three inputs as a depth-3 network with weights in `{0, ±1}`.
///
/// Uses `median = Σx − max − min` with `max = x₁ + ρ(x₂ + ρ(x₃ − x₂) − x₁)`,
/// `min = x₁ − ρ(x₁ − x₂ + ρ(x₂ − x₃))` and `x = ρ(x) − ρ(−x)`.
pub fn build_median() -> NetworkConfig {
    // ρ(Σ), ρ(−Σ), ρ(x₁), ρ(−x₁), ρ(x₂), ρ(−x₂), ρ(x₃ − x₂), ρ(x₂ − x₃)
    let first = rows(&[
        &[1, 1, 1],
        &[-1, -1, -1],
        &[1, 0, 0],
        &[-1, 0, 0],
        &[0, 1, 0],
        &[0, -1, 0],
        &[0, -1, 1],
        &[0, 1, -1],
    ]);
    // ρ(Σ), ρ(−Σ), ρ(x₁) twice, ρ(−x₁) twice, the max and min correction terms
    let second = rows(&[
        &[1, 0, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0, 0],
        &[0, 0, -1, 1, 1, -1, 1, 0],
        &[0, 0, 1, -1, -1, 1, 0, 1],
    ]);
    let third = rows(&[&[1, -1, -1, -1, 1, 1, -1, 1]]);
    let zeros = |d: usize| vec![Rational::zero(); d];
    NetworkConfig::new_unchecked(
        3,
        vec![Layer::new(first, zeros(8)), Layer::new(second, zeros(8)), Layer::new(third, zeros(1))],
    )
}
