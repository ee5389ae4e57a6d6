use num_traits::{Signed, Zero};
use qnf_core::rational::frac;
use qnf_core::{NetworkConfig, Rational};

use crate::LipschitzError;

/// Values `g(i/N)`, `i = 0, …, N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulation {
    pub denominator: usize,
    pub values: Vec<Rational>,
}

impl Tabulation {
    pub fn from_fn(denominator: usize, g: impl Fn(&Rational) -> Rational) -> Self {
        let values = (0..=denominator).map(|i| g(&frac(i as i64, denominator as i64))).collect();
        Tabulation { denominator, values }
    }
}

/// One row of the error certificate: `x,fx,gx,abs_err`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorRow {
    pub x: Rational,
    pub fx: Rational,
    pub gx: Rational,
}

impl ErrorRow {
    pub fn abs_err(&self) -> Rational {
        (&self.fx - &self.gx).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorReport {
    pub max_error: Rational,
    pub argmax: Rational,
    pub rows: Vec<ErrorRow>,
}

/// Exact `max |R(config)(x) − g(x)|` over `x = j/r`, `j = 0, …, r`, read from a
/// tabulation whose denominator is a multiple of `r`. The first maximizer is reported.
pub fn approx_error_report(
    config: &NetworkConfig,
    reference: &Tabulation,
    refinement: usize,
) -> Result<ErrorReport, LipschitzError> {
    if refinement == 0 {
        return Err(LipschitzError::Reference("refinement must be at least 1".into()));
    }
    let n = reference.denominator;
    if reference.values.len() != n + 1 {
        return Err(LipschitzError::Reference(format!("{} values for denominator {n}", reference.values.len())));
    }
    if !n.is_multiple_of(refinement) {
        return Err(LipschitzError::Reference(format!("denominator {n} is not a multiple of {refinement}")));
    }
    let stride = n / refinement;
    let xs: Vec<Rational> = (0..=refinement).map(|j| frac(j as i64, refinement as i64)).collect();
    let fx = config.compile().eval_scalar_many(&xs)?;
    let rows: Vec<ErrorRow> = xs
        .into_iter()
        .zip(fx)
        .enumerate()
        .map(|(j, (x, fx))| ErrorRow { x, fx, gx: reference.values[j * stride].clone() })
        .collect();
    let (mut max_error, mut argmax) = (Rational::zero(), Rational::zero());
    for row in &rows {
        let e = row.abs_err();
        if e > max_error {
            max_error = e;
            argmax = row.x.clone();
        }
    }
    Ok(ErrorReport { max_error, argmax, rows })
}
