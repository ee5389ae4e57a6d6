use qnf_core::{Layer, Matrix, NetworkConfig, Rational};

use crate::function::{PiecewiseLinear, PwlError};

/// `(b, a)` with `f(x) = b + Σ_i a_i ρ(x - x_i)`:
/// `b = f(x_0)`, `a_0` the first slope, `a_i` the slope change at `x_i`,
/// and `a_{M-1}` minus the last slope.
pub fn shallow_coefficients(f: &PiecewiseLinear) -> (Rational, Vec<Rational>) {
    let (x, y) = (f.breakpoints(), f.values());
    let m = x.len();
    let q = |i: usize| &y[i] / (&x[i] - &x[i - 1]);
    let qq = |i: usize| &y[i - 1] / (&x[i] - &x[i - 1]);
    let mut a = Vec::with_capacity(m);
    a.push(q(1) - qq(1));
    for i in 1..m - 1 {
        a.push(q(i + 1) - q(i) - &y[i] / (&x[i + 1] - &x[i]) + qq(i));
    }
    a.push(qq(m - 1) - q(m - 1));
    (y[0].clone(), a)
}

/// One-hidden-layer realization in `R(M, 2, 4 R_m(X) E)`.
pub fn realize_shallow(f: &PiecewiseLinear) -> Result<NetworkConfig, PwlError> {
    if f.len() < 3 {
        return Err(PwlError::TooFewPoints(f.len()));
    }
    let (b, a) = shallow_coefficients(f);
    let m = f.len();
    let first = Layer::new(
        Matrix::column(vec![Rational::from_integer(1.into()); m]),
        f.breakpoints().iter().map(|v| -v).collect(),
    );
    let second = Layer::new(Matrix::row(a), vec![b]);
    Ok(NetworkConfig::new(1, vec![first, second]).expect("shallow layers chain"))
}
