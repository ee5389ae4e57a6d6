use qnf_core::rational::{frac, int, pow};
use qnf_core::Rational;

use crate::LipschitzError;

/// Construction parameters `(m, n, ℓ)` with `Δ = 1/(10 m²ℓ²n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxParams {
    pub m: usize,
    pub n: usize,
    pub l: usize,
}

impl ApproxParams {
    /// Small-parameter mode: any `m, n, ℓ ≥ 2`.
    pub fn new(m: usize, n: usize, l: usize) -> Result<Self, LipschitzError> {
        if m < 2 || n < 2 || l < 2 {
            return Err(LipschitzError::Params(format!("(m, n, ℓ) = ({m}, {n}, {l}) needs every entry ≥ 2")));
        }
        if n > 20 {
            return Err(LipschitzError::Params(format!("n = {n} exceeds the decoder limit 20")));
        }
        Ok(ApproxParams { m, n, l })
    }

    /// `G = m²ℓ²n`.
    pub fn grid(&self) -> usize {
        self.m * self.m * self.l * self.l * self.n
    }

    /// Number of coarse cells `m²ℓ`.
    pub fn cells(&self) -> usize {
        self.m * self.m * self.l
    }

    /// Grid points per coarse cell `nℓ`.
    pub fn per_cell(&self) -> usize {
        self.n * self.l
    }

    pub fn delta(&self) -> Rational {
        frac(1, 10 * self.grid() as i64)
    }

    /// `1/G`.
    pub fn step(&self) -> Rational {
        frac(1, self.grid() as i64)
    }

    /// `max{8mn, 3^{n+2}}`.
    pub fn magnitude_bound(&self) -> Rational {
        int(8 * (self.m * self.n) as i64).max(pow(&int(3), self.n as u32 + 2))
    }

    /// `2^{n+5}`.
    pub fn decoder_width(&self) -> usize {
        1 << (self.n + 5)
    }

    /// Weight used for the plateau-grid realizations, `4mn`.
    pub fn carrier_weight(&self) -> Rational {
        int(4 * (self.m * self.n) as i64)
    }
}

/// `m = ⌊W/1000⌋`, `n = ⌊log₂(2W/5)⌋ − 7`, `ℓ = ⌊L/101⌋` for `W, L ≥ 2000`.
pub fn params_from_budget(w: u64, l: u64) -> Result<ApproxParams, LipschitzError> {
    if w < 2000 || l < 2000 {
        return Err(LipschitzError::Capacity(format!("(W, L) = ({w}, {l})")));
    }
    let m = (w / 1000) as usize;
    // ⌊log₂(2W/5)⌋ is the largest k with 5·2^k ≤ 2W.
    let mut k = 0u32;
    while 5u128 << (k + 1) <= 2 * w as u128 {
        k += 1;
    }
    let n = k as usize - 7;
    let ell = (l / 101) as usize;
    assert!(m > 1 && n > 1 && ell > 10, "budget-derived parameters ({m}, {n}, {ell})");
    ApproxParams::new(m, n, ell)
}
