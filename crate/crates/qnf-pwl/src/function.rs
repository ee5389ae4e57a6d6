use num_traits::{One, Signed, Zero};
use qnf_core::{parse_json, JsonRational, ParseError, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PwlError {
    #[error("need at least 3 breakpoints, got {0}")]
    TooFewPoints(usize),
    #[error("breakpoints not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("breakpoint {0} outside [0, 1]")]
    OutOfRange(usize),
    #[error("{x} breakpoints but {y} values")]
    LengthMismatch { x: usize, y: usize },
    #[error("basis index {index} out of range for {len} breakpoints")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("capacity: u²v = {capacity} is below M = {m}")]
    Capacity { capacity: u64, m: usize },
    #[error("weight condition w^(30v) ≥ M^6 R_m^4 E fails")]
    WeightCondition,
    #[error("argument error: {0}")]
    Argument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `f ∈ Σ(X, E)`: linear interpolation of `(x_i, y_i)` with constant tails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    x: Vec<Rational>,
    y: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PwlDoc {
    x: Vec<JsonRational>,
    y: Vec<JsonRational>,
}

fn check_mesh(x: &[Rational]) -> Result<(), PwlError> {
    if x.len() < 2 {
        return Err(PwlError::TooFewPoints(x.len()));
    }
    for i in 1..x.len() {
        if x[i] <= x[i - 1] {
            return Err(PwlError::NotIncreasing(i));
        }
    }
    Ok(())
}

impl PiecewiseLinear {
    /// Requires `M ≥ 3` strictly increasing breakpoints in `[0, 1]`.
    pub fn new(x: Vec<Rational>, y: Vec<Rational>) -> Result<Self, PwlError> {
        if x.len() != y.len() {
            return Err(PwlError::LengthMismatch { x: x.len(), y: y.len() });
        }
        if x.len() < 3 {
            return Err(PwlError::TooFewPoints(x.len()));
        }
        check_mesh(&x)?;
        if let Some(i) = x.iter().position(|v| v.is_negative() || *v > Rational::one()) {
            return Err(PwlError::OutOfRange(i));
        }
        Ok(PiecewiseLinear { x, y })
    }

    /// Samples `g` at the breakpoints.
    pub fn from_fn(x: Vec<Rational>, g: impl Fn(&Rational) -> Rational) -> Result<Self, PwlError> {
        let y = x.iter().map(g).collect();
        Self::new(x, y)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.x
    }

    pub fn values(&self) -> &[Rational] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        interpolate(&self.x, &self.y, t)
    }

    /// `E(f) = max_i |y_i|`.
    pub fn sup_norm(&self) -> Rational {
        self.y.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// `c · f`.
    pub fn scale(&self, c: &Rational) -> Self {
        PiecewiseLinear { x: self.x.clone(), y: self.y.iter().map(|v| v * c).collect() }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, PwlError> {
        let doc: PwlDoc = parse_json(bytes)?;
        Self::new(doc.x.into_iter().map(|v| v.0).collect(), doc.y.into_iter().map(|v| v.0).collect())
    }

    pub fn to_json(&self) -> String {
        let doc = PwlDoc {
            x: self.x.iter().cloned().map(JsonRational).collect(),
            y: self.y.iter().cloned().map(JsonRational).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }
}

/// Linear interpolation through `(xs, ys)` with constant extension beyond the ends.
pub(crate) fn interpolate(xs: &[Rational], ys: &[Rational], t: &Rational) -> Rational {
    debug_assert!(!xs.is_empty() && xs.len() == ys.len());
    if *t <= xs[0] {
        return ys[0].clone();
    }
    let last = xs.len() - 1;
    if *t >= xs[last] {
        return ys[last].clone();
    }
    let i = xs.partition_point(|v| v <= t);
    let (x0, x1) = (&xs[i - 1], &xs[i]);
    let (y0, y1) = (&ys[i - 1], &ys[i]);
    y0 + (y1 - y0) * (t - x0) / (x1 - x0)
}

/// `R_m(X)`, the largest reciprocal gap, and `R_c(X)`, the largest-to-smallest gap ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshStats {
    pub r_m: Rational,
    pub r_c: Rational,
}

pub fn mesh_stats(x: &[Rational]) -> Result<MeshStats, PwlError> {
    check_mesh(x)?;
    let gaps: Vec<Rational> = x.windows(2).map(|w| &w[1] - &w[0]).collect();
    let min = gaps.iter().min().expect("at least one gap").clone();
    let max = gaps.iter().max().expect("at least one gap").clone();
    Ok(MeshStats { r_m: min.recip(), r_c: max / min })
}

/// The hat function `γ_i` on `X`: one at `x_i`, zero at every other breakpoint;
/// `γ_0` is one on the left tail and `γ_{M-1}` on the right tail.
pub fn hat_basis(x: &[Rational], i: usize) -> Result<PiecewiseLinear, PwlError> {
    if i >= x.len() {
        return Err(PwlError::IndexOutOfRange { index: i, len: x.len() });
    }
    let y = (0..x.len()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect();
    PiecewiseLinear::new(x.to_vec(), y)
}

/// `b + Σ_i a_i ρ(x - z_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReluExpansion {
    pub z: Vec<Rational>,
    pub b: Rational,
    pub a: Vec<Rational>,
}

impl ReluExpansion {
    /// Expansion of the function interpolating `values` at the knots `z`
    /// with constant tails.
    pub fn from_values(z: &[Rational], values: &[Rational]) -> Self {
        assert_eq!(z.len(), values.len());
        let n = z.len();
        let slope = |i: usize| (&values[i + 1] - &values[i]) / (&z[i + 1] - &z[i]);
        let slopes: Vec<Rational> = (0..n.saturating_sub(1)).map(slope).collect();
        let mut a = Vec::with_capacity(n);
        for i in 0..n {
            let right = slopes.get(i).cloned().unwrap_or_else(Rational::zero);
            let left = if i == 0 { Rational::zero() } else { slopes[i - 1].clone() };
            a.push(right - left);
        }
        ReluExpansion { z: z.to_vec(), b: values[0].clone(), a }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.z.iter().zip(&self.a).fold(self.b.clone(), |acc, (zi, ai)| {
            let d = t - zi;
            if d.is_positive() {
                acc + ai * d
            } else {
                acc
            }
        })
    }

    /// Largest coefficient magnitude among `b` and `a_i`.
    pub fn magnitude(&self) -> Rational {
        self.a.iter().chain(std::iter::once(&self.b)).map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}
