use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::NetError;
use crate::network::NetworkConfig;
use crate::rational::{common_denominator, Rational};

/// A layer rescaled to integers: `A = A_int / den`, `b = b_int / den`.
#[derive(Debug, Clone)]
struct IntLayer {
    den: BigInt,
    rows: Vec<Vec<(u32, BigInt)>>,
    bias: Vec<BigInt>,
}

/// Integer form of a configuration for fast exact evaluation.
///
/// The activation vector is carried as integers over one shared denominator,
/// so each layer costs integer multiply-adds plus a single gcd sweep.
#[derive(Debug, Clone)]
pub struct CompiledNetwork {
    input_dim: usize,
    layers: Vec<IntLayer>,
}

impl CompiledNetwork {
    pub fn new(config: &NetworkConfig) -> Self {
        let layers = config
            .layers()
            .iter()
            .map(|l| {
                let den = common_denominator(
                    l.a.entries().map(|(_, _, v)| v).chain(l.b.iter()),
                );
                let to_int = |v: &Rational| v.numer() * (&den / v.denom());
                let rows = (0..l.a.rows())
                    .map(|i| {
                        l.a.row_entries(i).iter().map(|(j, v)| (*j as u32, to_int(v))).collect()
                    })
                    .collect();
                let bias = l.b.iter().map(to_int).collect();
                IntLayer { den, rows, bias }
            })
            .collect();
        CompiledNetwork { input_dim: config.input_dim(), layers }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>, NetError> {
        if x.len() != self.input_dim {
            return Err(NetError::InputDim { expected: self.input_dim, found: x.len() });
        }
        let mut den = common_denominator(x.iter());
        let mut v: Vec<BigInt> = x.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        let last = self.layers.len().saturating_sub(1);
        for (k, layer) in self.layers.iter().enumerate() {
            let mut out: Vec<BigInt> = layer
                .rows
                .iter()
                .zip(&layer.bias)
                .map(|(row, c)| {
                    let mut acc = if c.is_zero() { BigInt::zero() } else { c * &den };
                    for (j, a) in row {
                        let xj = &v[*j as usize];
                        if !xj.is_zero() {
                            acc += a * xj;
                        }
                    }
                    acc
                })
                .collect();
            den *= &layer.den;
            if k != last {
                for y in out.iter_mut() {
                    if y.is_negative() {
                        *y = BigInt::zero();
                    }
                }
            }
            let mut g = den.clone();
            for y in &out {
                if g.is_one() {
                    break;
                }
                if !y.is_zero() {
                    g = g.gcd(y);
                }
            }
            if !g.is_one() {
                den /= &g;
                for y in out.iter_mut() {
                    if !y.is_zero() {
                        *y /= &g;
                    }
                }
            }
            v = out;
        }
        Ok(v.into_iter().map(|y| Rational::new(y, den.clone())).collect())
    }

    /// Scalar input, scalar output.
    pub fn eval_scalar(&self, x: &Rational) -> Result<Rational, NetError> {
        let mut y = self.eval(std::slice::from_ref(x))?;
        if y.len() != 1 {
            return Err(NetError::Dimension(format!("expected one output, got {}", y.len())));
        }
        Ok(y.pop().expect("one output"))
    }

    /// Evaluates a batch of inputs, in parallel when the `parallel` feature is on.
    pub fn eval_many(&self, xs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, NetError> {
        crate::par::map(xs, |x| self.eval(x)).into_iter().collect()
    }

    /// Scalar batch evaluation.
    pub fn eval_scalar_many(&self, xs: &[Rational]) -> Result<Vec<Rational>, NetError> {
        crate::par::map(xs, |x| self.eval_scalar(x)).into_iter().collect()
    }
}
