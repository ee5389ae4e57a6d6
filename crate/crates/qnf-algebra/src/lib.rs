//! Combinators on network configurations that preserve realizations exactly:
//! depth extension, scalar multiplication, parallelization, composition and
//! summation, each with the width/depth/magnitude growth of the underlying
//! constructions.

use num_traits::{One, Zero};
use qnf_core::{Layer, Matrix, NetError, NetworkConfig, Rational};

/// Pads `config` to exactly `target_depth` layers without changing its realization.
///
/// The last layer is split into `±(A x + b)`, carried through identity layers
/// on `R^{2d'}`, and merged again by `[I, -I]`. Width grows to at most
/// `max{W, 2d'}`; padding weights are 0 or ±1.
pub fn extend_depth(config: &NetworkConfig, target_depth: usize) -> Result<NetworkConfig, NetError> {
    let depth = config.depth();
    if target_depth < depth {
        return Err(NetError::Argument(format!(
            "target depth {target_depth} is below current depth {depth}"
        )));
    }
    if target_depth == depth {
        return Ok(config.clone());
    }
    let d_out = config.output_dim();
    let mut layers = config.layers().to_vec();
    let last = layers.pop().expect("validated config has layers");
    layers.push(split(&last));
    for _ in depth + 1..target_depth {
        layers.push(Layer::linear(Matrix::identity(2 * d_out)));
    }
    layers.push(Layer::linear(merge(d_out)));
    Ok(NetworkConfig::new_unchecked(config.input_dim(), layers))
}

/// `[A; -A]`, `[b; -b]`.
fn split(l: &Layer) -> Layer {
    let mut b = l.b.clone();
    b.extend(l.b.iter().map(|v| -v));
    Layer::new(l.a.vstack(&l.a.neg()), b)
}

/// `[I_d, -I_d]`.
fn merge(d: usize) -> Matrix {
    Matrix::identity(d).hstack(&Matrix::scaled_identity(d, &-Rational::one()))
}

/// `a · R(config)`, changing only the final layer.
pub fn scalar_mul(a: &Rational, config: &NetworkConfig) -> NetworkConfig {
    if a.is_one() {
        return config.clone();
    }
    let mut layers = config.layers().to_vec();
    let last = layers.pop().expect("validated config has layers");
    layers.push(last.scale(a));
    NetworkConfig::new_unchecked(config.input_dim(), layers)
}

/// `x ↦ (R(f1)(x), R(f2)(x))` on a shared input. The shallower operand is
/// depth-extended first; equal depths extend neither.
pub fn parallelize(f1: &NetworkConfig, f2: &NetworkConfig) -> Result<NetworkConfig, NetError> {
    if f1.input_dim() != f2.input_dim() {
        return Err(NetError::Dimension(format!(
            "parallelization of input dimensions {} and {}",
            f1.input_dim(),
            f2.input_dim()
        )));
    }
    let depth = f1.depth().max(f2.depth());
    let g1 = extend_depth(f1, depth)?;
    let g2 = extend_depth(f2, depth)?;
    let layers = g1
        .layers()
        .iter()
        .zip(g2.layers())
        .enumerate()
        .map(|(i, (l1, l2))| {
            let a = if i == 0 { l1.a.vstack(&l2.a) } else { l1.a.block_diag(&l2.a) };
            let mut b = l1.b.clone();
            b.extend(l2.b.iter().cloned());
            Layer::new(a, b)
        })
        .collect();
    Ok(NetworkConfig::new_unchecked(f1.input_dim(), layers))
}

/// Parallelization of any number of networks on a shared input, folded left.
pub fn parallelize_all(fs: &[&NetworkConfig]) -> Result<NetworkConfig, NetError> {
    let (first, rest) = fs
        .split_first()
        .ok_or_else(|| NetError::Argument("nothing to parallelize".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, f| parallelize(&acc, f))
}

/// `R(outer) ∘ R(inner)` with depth `L_inner + L_outer`.
///
/// The junction passes `±(A x + b)` of the inner output layer through one
/// ReLU and recombines it inside the first outer layer as `[A', -A']`.
pub fn compose(outer: &NetworkConfig, inner: &NetworkConfig) -> Result<NetworkConfig, NetError> {
    if inner.output_dim() != outer.input_dim() {
        return Err(NetError::Dimension(format!(
            "composition of inner output dimension {} with outer input dimension {}",
            inner.output_dim(),
            outer.input_dim()
        )));
    }
    let mut layers = inner.layers().to_vec();
    let last = layers.pop().expect("validated config has layers");
    layers.push(split(&last));
    let (first, rest) = outer.layers().split_first().expect("validated config has layers");
    layers.push(Layer::new(first.a.hstack(&first.a.neg()), first.b.clone()));
    layers.extend(rest.iter().cloned());
    Ok(NetworkConfig::new_unchecked(inner.input_dim(), layers))
}

/// `c^L · R(config)` for `c > 0`: layer `ℓ` becomes `(c A_ℓ, c^ℓ b_ℓ)`.
pub fn homogeneous_scale(config: &NetworkConfig, c: &Rational) -> Result<NetworkConfig, NetError> {
    if *c <= Rational::zero() {
        return Err(NetError::Argument(format!("scale {c} must be positive")));
    }
    let mut acc = Rational::one();
    let layers = config
        .layers()
        .iter()
        .map(|l| {
            acc *= c;
            Layer::new(l.a.scale(c), l.b.iter().map(|v| v * &acc).collect())
        })
        .collect();
    Ok(NetworkConfig::new_unchecked(config.input_dim(), layers))
}

/// `R(f1) + R(f4)` with depth `max{L_1, L_4} + 1`.
pub fn add(f1: &NetworkConfig, f4: &NetworkConfig) -> Result<NetworkConfig, NetError> {
    if f1.output_dim() != f4.output_dim() {
        return Err(NetError::Dimension(format!(
            "sum of output dimensions {} and {}",
            f1.output_dim(),
            f4.output_dim()
        )));
    }
    let d = f1.output_dim();
    let sum = NetworkConfig::affine(
        Matrix::identity(d).hstack(&Matrix::identity(d)),
        vec![Rational::zero(); d],
    );
    compose(&sum, &parallelize(f1, f4)?)
}
