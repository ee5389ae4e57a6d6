use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use qnf_core::rational::{floor_int, pow2};
use qnf_core::{DyadicSet, Rational};

/// A base weight set `𝔸` for the 𝒯₂ expansion.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSet {
    Dyadic(DyadicSet),
    Finite(BTreeSet<Rational>),
}

impl WeightSet {
    pub fn finite(values: impl IntoIterator<Item = Rational>) -> Self {
        WeightSet::Finite(values.into_iter().collect())
    }

    pub fn contains(&self, r: &Rational) -> bool {
        match self {
            WeightSet::Dyadic(q) => q.contains(r),
            WeightSet::Finite(s) => s.contains(r),
        }
    }

    /// Whether `{0, 1} ⊆ 𝔸`.
    pub fn has_zero_one(&self) -> bool {
        self.contains(&Rational::zero()) && self.contains(&Rational::one())
    }

    /// Largest non-negative member not exceeding `r`, if any.
    pub fn largest_nonneg_at_most(&self, r: &Rational) -> Option<Rational> {
        if r.is_negative() {
            return None;
        }
        match self {
            WeightSet::Dyadic(q) => {
                let s = pow2(q.b as i64);
                let top = pow2(q.a as i64 + 1) - pow2(-(q.b as i64));
                Some((Rational::from_integer(floor_int(&(r * &s))) / s).min(top))
            }
            WeightSet::Finite(set) => set.range(..=r.clone()).next_back().filter(|v| !v.is_negative()).cloned(),
        }
    }
}
