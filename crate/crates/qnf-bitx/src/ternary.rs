use num_traits::Zero;
use qnf_core::rational::{int, pow};
use qnf_core::Rational;

use crate::BitxError;

/// A finite digit string over {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryCode {
    digits: Vec<u8>,
}

impl TernaryCode {
    pub fn new(digits: Vec<u8>) -> Result<Self, BitxError> {
        if let Some((index, &digit)) = digits.iter().enumerate().find(|(_, &d)| d > 1) {
            return Err(BitxError::Digit { index, digit });
        }
        Ok(TernaryCode { digits })
    }

    /// Parses a string such as `"1011"`.
    pub fn parse(s: &str) -> Result<Self, BitxError> {
        let digits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c.to_digit(10) {
                Some(d) => Ok(d as u8),
                None => Err(BitxError::Argument(format!("character {c:?} at position {i} is not a digit"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(digits)
    }

    /// All codes of length `s`, in lexicographic order.
    pub fn all(s: usize) -> Vec<TernaryCode> {
        (0..1u64 << s)
            .map(|m| TernaryCode { digits: (0..s).map(|i| ((m >> (s - 1 - i)) & 1) as u8).collect() })
            .collect()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `Σ_{i ≤ min{n, len}} θ_i`.
    pub fn partial_sum(&self, n: usize) -> u64 {
        self.digits.iter().take(n).map(|&d| d as u64).sum()
    }

    pub fn value(&self) -> Rational {
        ternary_value(&self.digits)
    }
}

impl std::fmt::Display for TernaryCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("()");
        }
        self.digits.iter().try_for_each(|d| write!(f, "{d}"))
    }
}

/// `T(θ) = Σ θ_i 3^{-i}` for digits in {0, 1}.
pub fn ternary_encode(digits: &[u8]) -> Result<Rational, BitxError> {
    Ok(TernaryCode::new(digits.to_vec())?.value())
}

/// `Σ θ_i 3^{-i}` for any digits, including the gadget offsets that use 2.
pub fn ternary_value(digits: &[u8]) -> Rational {
    let s = digits.len();
    let num = digits.iter().fold(Rational::zero(), |acc, &d| acc * int(3) + int(d as i64));
    num / pow(&int(3), s as u32)
}
