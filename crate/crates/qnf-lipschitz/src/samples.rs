use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use qnf_core::rational::{floor_int, frac, int};
use qnf_core::{parse_json, JsonRational, Rational};
use serde::{Deserialize, Serialize};

use crate::LipschitzError;

/// Exact samples `g_i = g(i/G)`, `i = 0, …, G−1`, of a 1-Lipschitz `g` with `|g| ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzSamples {
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SamplesDoc {
    values: Vec<JsonRational>,
}

impl LipschitzSamples {
    /// Checks `|g_i| ≤ 1` and `|g_{i+1} − g_i| ≤ 1/G` with `G = values.len()`.
    pub fn new(values: Vec<Rational>) -> Result<Self, LipschitzError> {
        if values.is_empty() {
            return Err(LipschitzError::SampleCount { expected: 1, got: 0 });
        }
        if let Some(index) = values.iter().position(|v| v.abs() > Rational::one()) {
            return Err(LipschitzError::SampleRange { index });
        }
        let step = frac(1, values.len() as i64);
        if let Some(index) = values.windows(2).position(|w| (&w[1] - &w[0]).abs() > step) {
            return Err(LipschitzError::NotLipschitz { index });
        }
        Ok(LipschitzSamples { values })
    }

    /// Samples `g` on `i/grid`.
    pub fn from_fn(grid: usize, g: impl Fn(&Rational) -> Rational) -> Result<Self, LipschitzError> {
        Self::new((0..grid).map(|i| g(&frac(i as i64, grid as i64))).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `{"values": ["p/q", …]}`.
    pub fn from_json(bytes: &[u8]) -> Result<Self, LipschitzError> {
        let doc: SamplesDoc = parse_json(bytes)?;
        Self::new(doc.values.into_iter().map(|v| v.0).collect())
    }

    pub fn to_json(&self) -> String {
        let doc = SamplesDoc { values: self.values.iter().cloned().map(JsonRational).collect() };
        serde_json::to_string(&doc).expect("samples serialize")
    }
}

/// Built-in 1-Lipschitz test functions with rational values on rational inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzFn {
    /// `0`.
    Zero,
    /// `x`.
    Identity,
    /// `|x − 1/2| − 1/4`.
    Vee,
    /// Distance to `(1/5)ℤ`, clamped at `1/16`.
    Sawtooth,
}

impl LipschitzFn {
    pub const ALL: [LipschitzFn; 4] = [LipschitzFn::Zero, LipschitzFn::Identity, LipschitzFn::Vee, LipschitzFn::Sawtooth];

    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            LipschitzFn::Zero => Rational::zero(),
            LipschitzFn::Identity => x.clone(),
            LipschitzFn::Vee => (x - frac(1, 2)).abs() - frac(1, 4),
            LipschitzFn::Sawtooth => {
                let nearest = Rational::from_integer(floor_int(&(x * int(5) + frac(1, 2)))) / int(5);
                (x - nearest).abs().min(frac(1, 16))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LipschitzFn::Zero => "zero",
            LipschitzFn::Identity => "identity",
            LipschitzFn::Vee => "vee",
            LipschitzFn::Sawtooth => "sawtooth",
        }
    }
}

impl fmt::Display for LipschitzFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LipschitzFn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        LipschitzFn::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown function {s:?}; expected zero, identity, vee or sawtooth"))
    }
}
