use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::dyadic::DyadicSet;
use crate::error::{NetError, Violation};
use crate::eval::CompiledNetwork;
use crate::matrix::Matrix;
use crate::rational::Rational;

/// One affine map `x ↦ A x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    pub a: Matrix,
    pub b: Vec<Rational>,
}

impl Layer {
    pub fn new(a: Matrix, b: Vec<Rational>) -> Self {
        Layer { a, b }
    }

    /// `A x + 0`.
    pub fn linear(a: Matrix) -> Self {
        let n = a.rows();
        Layer { a, b: vec![Rational::zero(); n] }
    }

    pub fn out_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn in_dim(&self) -> usize {
        self.a.cols()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Layer { a: self.a.scale(s), b: self.b.iter().map(|v| v * s).collect() }
    }

    /// Every weight including implicit zeros, as (value, multiplicity > 0) pairs.
    fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.a.entries().map(|(_, _, v)| v).chain(self.b.iter())
    }

    fn has_implicit_zero(&self) -> bool {
        self.a.nnz() < self.a.rows() * self.a.cols() || self.b.iter().any(Zero::is_zero)
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.a.apply(x).into_iter().zip(&self.b).map(|(y, c)| y + c).collect()
    }
}

/// A ReLU network configuration `Φ = ((A_1,b_1),…,(A_L,b_L))` with explicit input dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkConfig {
    input_dim: usize,
    layers: Vec<Layer>,
}

/// Architecture and weight statistics of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkMetrics {
    pub width: usize,
    pub depth: usize,
    pub weight_magnitude: Rational,
    pub weight_set: BTreeSet<Rational>,
    pub input_dim: usize,
    pub output_dim: usize,
}

impl NetworkConfig {
    /// Builds without checking; see [`NetworkConfig::new`].
    pub fn new_unchecked(input_dim: usize, layers: Vec<Layer>) -> Self {
        NetworkConfig { input_dim, layers }
    }

    /// Builds and validates.
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self, NetError> {
        let c = NetworkConfig { input_dim, layers };
        c.validate().map_err(NetError::Invalid)?;
        Ok(c)
    }

    /// A single affine layer `S(A, b)`.
    pub fn affine(a: Matrix, b: Vec<Rational>) -> Self {
        let d = a.cols();
        NetworkConfig::new(d, vec![Layer::new(a, b)]).expect("invalid affine layer")
    }

    /// The identity on `R^d` as a depth-one network.
    pub fn identity(d: usize) -> Self {
        Self::affine(Matrix::identity(d), vec![Rational::zero(); d])
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, Layer::out_dim)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Layer> {
        self.layers
    }

    /// Every chaining violation and every empty layer (layers are 1-based).
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.layers.is_empty() {
            out.push(Violation::NoLayers);
        }
        let mut prev = self.input_dim;
        for (i, l) in self.layers.iter().enumerate() {
            let layer = i + 1;
            if l.a.rows() == 0 {
                out.push(Violation::EmptyLayer { layer });
            }
            if l.a.cols() != prev {
                out.push(Violation::Chaining { layer, expected: prev, found: l.a.cols() });
            }
            if l.b.len() != l.a.rows() {
                out.push(Violation::BiasLength { layer, expected: l.a.rows(), found: l.b.len() });
            }
            prev = l.a.rows();
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn width(&self) -> usize {
        self.layers.iter().map(Layer::out_dim).fold(self.input_dim, usize::max)
    }

    pub fn weight_magnitude(&self) -> Rational {
        self.layers
            .iter()
            .flat_map(Layer::weights)
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn metrics(&self) -> NetworkMetrics {
        let mut weight_set: BTreeSet<Rational> =
            self.layers.iter().flat_map(Layer::weights).cloned().collect();
        if self.layers.iter().any(Layer::has_implicit_zero) {
            weight_set.insert(Rational::zero());
        }
        NetworkMetrics {
            width: self.width(),
            depth: self.depth(),
            weight_magnitude: self.weight_magnitude(),
            weight_set,
            input_dim: self.input_dim,
            output_dim: self.output_dim(),
        }
    }

    /// Whether every weight lies in `Q_b^a`.
    pub fn weights_in(&self, set: &DyadicSet) -> bool {
        self.layers.iter().flat_map(Layer::weights).all(|w| set.contains(w))
    }

    /// Applies `f` to every weight and bias.
    pub fn map_weights(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let layers = self
            .layers
            .iter()
            .map(|l| Layer { a: l.a.map(&f), b: l.b.iter().map(&f).collect() })
            .collect();
        NetworkConfig { input_dim: self.input_dim, layers }
    }

    /// Integer-form evaluator for repeated exact evaluation.
    pub fn compile(&self) -> CompiledNetwork {
        CompiledNetwork::new(self)
    }

    /// Exact realization `R(Φ)(x)`.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Vec<Rational>, NetError> {
        self.validate().map_err(NetError::Invalid)?;
        self.compile().eval(x)
    }

    /// Realization of a scalar network at a scalar input.
    pub fn eval_scalar(&self, x: &Rational) -> Result<Rational, NetError> {
        if self.output_dim() != 1 {
            return Err(NetError::Dimension(format!(
                "scalar evaluation of a network with output dimension {}",
                self.output_dim()
            )));
        }
        Ok(self.evaluate(std::slice::from_ref(x))?.pop().expect("one output"))
    }
}
