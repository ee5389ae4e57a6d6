use std::fmt;

use num_traits::{One, Signed};
use qnf_core::rational::{int, log2_bracket, pow, pow2};
use qnf_core::{parse_json, JsonRational, Rational};
use serde::Deserialize;

use crate::RegimeError;

/// Fractional bits of the dyadic `log₂` brackets.
pub const LOG_FRAC_BITS: u32 = 32;

/// `(lo, hi)` with `lo ≤ log₂ n ≤ hi`; exact for powers of two.
pub fn log2_bracket_u64(n: u64) -> (Rational, Rational) {
    log2_bracket(&int(n as i64), LOG_FRAC_BITS)
}

/// `10 W² L (a + b)`.
pub fn natural_encoding_bits(w: u64, l: u64, a: u64, b: u64) -> Result<u64, RegimeError> {
    if w == 0 || l == 0 || a == 0 || b == 0 {
        return Err(RegimeError::Argument(format!("(W, L, a, b) = ({w}, {l}, {a}, {b}) needs every entry ≥ 1")));
    }
    Ok(10 * w * w * l * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerTerm {
    /// `(W² L b)⁻¹`.
    Memory,
    /// `(W² L² (log₂W + log₂L))⁻¹`.
    Vc,
    /// `2^{−Lb}`.
    Precision,
}

impl LowerTerm {
    pub fn name(&self) -> &'static str {
        match self {
            LowerTerm::Memory => "memory",
            LowerTerm::Vc => "vc",
            LowerTerm::Precision => "precision",
        }
    }
}

impl fmt::Display for LowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `c_ℓ · max{…}` evaluated with the upper `log₂` bracket (`value`) and the lower one (`value_hi`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Rational,
    pub value_hi: Rational,
    pub label: LowerTerm,
}

/// `c_ℓ · max{(W²Lb)⁻¹, (W²L²(log₂W + log₂L))⁻¹, 2^{−Lb}}`; ties go to the earlier term.
pub fn lower_bound_combined(w: u64, l: u64, b: u64, c_l: &Rational) -> Result<LowerBound, RegimeError> {
    if l < 2 {
        return Err(RegimeError::Argument(format!("L = {l} must be at least 2")));
    }
    if w == 0 || b == 0 || !c_l.is_positive() {
        return Err(RegimeError::Argument(format!("W = {w}, b = {b}, c_ℓ = {c_l} must be positive")));
    }
    let (wl_lo, wl_hi) = log2_bracket_u64(w);
    let (ll_lo, ll_hi) = log2_bracket_u64(l);
    let w2 = int((w * w) as i64);
    let memory = (&w2 * int(l as i64) * int(b as i64)).recip();
    let vc = |log: Rational| (&w2 * int((l * l) as i64) * log).recip();
    let precision = pow2(-((l * b) as i64));
    let terms = |vc: Rational| {
        let mut best = (memory.clone(), LowerTerm::Memory);
        for (v, t) in [(vc, LowerTerm::Vc), (precision.clone(), LowerTerm::Precision)] {
            if v > best.0 {
                best = (v, t);
            }
        }
        best
    };
    let (value, label) = terms(vc(wl_hi + ll_hi));
    let (value_hi, _) = terms(vc(wl_lo + ll_lo));
    Ok(LowerBound { value: c_l * value, value_hi: c_l * value_hi, label })
}

/// `(1/2) · 2^{−Lb}`.
pub fn precision_lower_bound(l: u64, b: u64) -> Result<Rational, RegimeError> {
    if l == 0 || b == 0 {
        return Err(RegimeError::Argument(format!("(L, b) = ({l}, {b}) needs both ≥ 1")));
    }
    Ok(pow2(-((l * b) as i64) - 1))
}

/// `⌈log|C|⌉ / (1 + ℓ)`.
pub fn memory_redundancy(log_cardinality: u64, code_length: u64) -> Rational {
    Rational::new((log_cardinality as i64).into(), (1 + code_length as i64).into())
}

/// User-supplied absolute constants. Defaults are illustrative, not normative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeConstants {
    pub c_l: Rational,
    pub c1: Rational,
    pub d1: Rational,
    pub e1: Rational,
    pub c2: Rational,
    pub d2: u64,
    pub e21: Rational,
    pub e22: Rational,
    pub alpha: Rational,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConstantsDoc {
    c_l: Option<JsonRational>,
    c1: Option<JsonRational>,
    d1: Option<JsonRational>,
    e1: Option<JsonRational>,
    c2: Option<JsonRational>,
    d2: Option<u64>,
    e21: Option<JsonRational>,
    e22: Option<JsonRational>,
    alpha: Option<JsonRational>,
}

/// `2^{2/E₂₂}` when the exponent is an integer.
fn exact_alpha(e22: &Rational) -> Option<Rational> {
    let e = int(2) / e22;
    if !e.is_integer() {
        return None;
    }
    Some(pow2(e.to_integer().try_into().ok()?))
}

impl Default for RegimeConstants {
    /// `c_ℓ = C₁ = C₂ = 1`, `D₁ = 1`, `D₂ = 2`, `E₁ = 12`, `E₂₁ = max{E₁, 1}`, `E₂₂ = 2`, `α = 2^{2/E₂₂}`.
    fn default() -> Self {
        let e1 = int(12);
        let e22 = int(2);
        RegimeConstants {
            c_l: Rational::one(),
            c1: Rational::one(),
            d1: Rational::one(),
            e21: e1.clone().max(Rational::one()),
            e1,
            c2: Rational::one(),
            d2: 2,
            alpha: exact_alpha(&e22).expect("2^{2/2} is exact"),
            e22,
        }
    }
}

impl RegimeConstants {
    pub fn validate(&self) -> Result<(), RegimeError> {
        if self.alpha <= Rational::one() {
            return Err(RegimeError::Constants(format!("α = {} must exceed 1", self.alpha)));
        }
        if !self.e21.is_positive() || !self.e22.is_positive() {
            return Err(RegimeError::Constants("E₂₁ and E₂₂ must be positive".into()));
        }
        if !self.c_l.is_positive() || !self.c2.is_positive() {
            return Err(RegimeError::Constants("c_ℓ and C₂ must be positive".into()));
        }
        if self.d2 < 2 {
            return Err(RegimeError::Constants(format!("D₂ = {} must be at least 2", self.d2)));
        }
        Ok(())
    }

    /// Missing fields take their defaults; `E₂₁` defaults to `max{E₁, 1}` and
    /// `α` to `2^{2/E₂₂}`, which must then be exact.
    pub fn from_json(bytes: &[u8]) -> Result<Self, RegimeError> {
        let doc: ConstantsDoc = parse_json(bytes)?;
        let d = RegimeConstants::default();
        let get = |v: Option<JsonRational>, dflt: &Rational| v.map_or_else(|| dflt.clone(), |j| j.0);
        let e1 = get(doc.e1, &d.e1);
        let e21 = doc.e21.map_or_else(|| e1.clone().max(Rational::one()), |j| j.0);
        let e22 = get(doc.e22, &d.e22);
        if !e22.is_positive() {
            return Err(RegimeError::Constants(format!("E₂₂ = {e22} must be positive")));
        }
        let alpha = match doc.alpha {
            Some(a) => a.0,
            None => exact_alpha(&e22)
                .ok_or_else(|| RegimeError::Constants(format!("2^(2/{e22}) is irrational; supply alpha")))?,
        };
        let c = RegimeConstants {
            c_l: get(doc.c_l, &d.c_l),
            c1: get(doc.c1, &d.c1),
            d1: get(doc.d1, &d.d1),
            e1,
            c2: get(doc.c2, &d.c2),
            d2: doc.d2.unwrap_or(d.d2),
            e21,
            e22,
            alpha,
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    Under,
    Proper,
    Over,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Under => "under",
            Regime::Proper => "proper",
            Regime::Over => "over",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Regime label with the bound evaluated at the lower (`bound`) and upper (`bound_lo`) `log₂ W` bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub regime: Regime,
    pub bound: Rational,
    pub bound_lo: Rational,
    /// `E₂₂ log₂W / L` and `E₂₁ L log₂W` at the lower `log₂ W` bracket.
    pub boundaries: (Rational, Rational),
}

/// Classifies `b` into `[1, E₂₂ log W / L)`, `[E₂₂ log W / L, E₂₁ L log W)`,
/// `[E₂₁ L log W, ∞)` and returns `C₂ α^{−Lb}`, `C₂ (W²Lb)⁻¹` or `C₂ (W²L² log W)⁻¹`.
pub fn upper_bound_regime(w: u64, l: u64, b: u64, k: &RegimeConstants) -> Result<UpperBound, RegimeError> {
    k.validate()?;
    if w < k.d2 || l < k.d2 {
        return Err(RegimeError::Argument(format!("(W, L) = ({w}, {l}) below D₂ = {}", k.d2)));
    }
    if b == 0 {
        return Err(RegimeError::Argument("b must be at least 1".into()));
    }
    let ll = int(l as i64);
    if k.e22 >= &k.e21 * &ll * &ll {
        return Err(RegimeError::Constants(format!(
            "E₂₂ log W / L ≥ E₂₁ L log W for L = {l}: the regime boundaries are inverted"
        )));
    }
    let (log_lo, log_hi) = log2_bracket_u64(w);
    let lower = &k.e22 * &log_lo / &ll;
    let upper = &k.e21 * &ll * &log_lo;
    let bb = int(b as i64);
    let w2 = int((w * w) as i64);
    let regime = if bb < lower {
        Regime::Under
    } else if bb < upper {
        Regime::Proper
    } else {
        Regime::Over
    };
    let (bound, bound_lo) = match regime {
        Regime::Under => {
            let v = &k.c2 / pow(&k.alpha, (l * b) as u32);
            (v.clone(), v)
        }
        Regime::Proper => {
            let v = &k.c2 / (&w2 * &ll * &bb);
            (v.clone(), v)
        }
        Regime::Over => {
            let base = &w2 * &ll * &ll;
            (&k.c2 / (&base * &log_lo), &k.c2 / (&base * &log_hi))
        }
    };
    Ok(UpperBound { regime, bound, bound_lo, boundaries: (lower, upper) })
}

/// One row of `b,regime,lower,upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeRow {
    pub b: u64,
    pub regime: Regime,
    pub lower: LowerBound,
    pub upper: UpperBound,
}

/// Rows for `b = 1, …, b_max`.
pub fn regime_sweep(w: u64, l: u64, b_max: u64, k: &RegimeConstants) -> Result<Vec<RegimeRow>, RegimeError> {
    (1..=b_max)
        .map(|b| {
            let upper = upper_bound_regime(w, l, b, k)?;
            let lower = lower_bound_combined(w, l, b, &k.c_l)?;
            Ok(RegimeRow { b, regime: upper.regime, lower, upper })
        })
        .collect()
}

