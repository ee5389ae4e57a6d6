use num_bigint::BigInt;
use num_traits::Signed;

use crate::rational::{is_integer, pow2, Rational};

/// The quantized alphabet `Q_b^a`: dyadic rationals with `b` fractional
/// binary digits and magnitude below `2^(a+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicSet {
    pub a: u32,
    pub b: u32,
}

impl DyadicSet {
    pub fn new(a: u32, b: u32) -> Self {
        DyadicSet { a, b }
    }

    pub fn contains(&self, r: &Rational) -> bool {
        is_integer(&(r * pow2(self.b as i64))) && r.abs() < pow2(self.a as i64 + 1)
    }

    /// Number of elements, `2^(a+b+2) - 1`.
    pub fn cardinality(&self) -> BigInt {
        (BigInt::from(1) << (self.a + self.b + 2)) - 1
    }

    /// Bits of the natural fixed-point encoding of one element: sign plus `a+1+b` digits.
    pub fn bits_per_weight(&self) -> u64 {
        self.a as u64 + self.b as u64 + 2
    }

    /// The set with every parameter multiplied by `k`.
    pub fn scaled(&self, k: u32) -> Self {
        DyadicSet { a: self.a * k, b: self.b * k }
    }
}
