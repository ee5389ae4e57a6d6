use num_traits::{One, Zero};
use qnf_core::rational::pow;
use qnf_core::{Layer, Matrix, Rational};

use crate::weights::WeightSet;
use crate::TradeoffError;

/// One affine map `(G, h)` of a chain, applied without activation.
pub type ChainLayer = Layer;

/// `(G_i, h_i)_{i=1}^{k+1}` from the digit matrices `A_0..A_k`, `b_0..b_k`:
/// `G_1 = [I; A_k]`, `G_j = [[I, 0], [A_{k-j+1}, wI]]`, `G_{k+1} = [A_0, wI]`.
pub fn horner_chain(a_digits: &[Matrix], b_digits: &[Vec<Rational>], w: &Rational) -> Vec<ChainLayer> {
    let k = a_digits.len() - 1;
    let (m, n) = (a_digits[0].rows(), a_digits[0].cols());
    let id = Matrix::identity(n);
    let wi = Matrix::scaled_identity(m, w);
    let zero_n = vec![Rational::zero(); n];
    let with_x = |b: &Vec<Rational>| zero_n.iter().cloned().chain(b.iter().cloned()).collect::<Vec<_>>();
    let mut out = Vec::with_capacity(k + 1);
    out.push(Layer::new(id.vstack(&a_digits[k]), with_x(&b_digits[k])));
    for j in 2..=k {
        let g = Matrix::blocks(
            &[vec![Some(&id), None], vec![Some(&a_digits[k - j + 1]), Some(&wi)]],
            &[n, m],
            &[n, m],
        );
        out.push(Layer::new(g, with_x(&b_digits[k - j + 1])));
    }
    out.push(Layer::new(a_digits[0].hstack(&wi), b_digits[0].clone()));
    out
}

/// Greedy expansion `x = Σ_{i ≤ k} w^i α_i` with `α_i ∈ 𝔸 ∩ R≥0`, largest powers first.
fn expand(x: &Rational, w: &Rational, k: usize, base: &WeightSet) -> Option<Vec<Rational>> {
    let mut digits = vec![Rational::zero(); k + 1];
    let mut rest = x.clone();
    let order: Vec<usize> = if *w >= Rational::one() { (0..=k).rev().collect() } else { (0..=k).collect() };
    for i in order {
        let p = pow(w, i as u32);
        if p.is_zero() {
            continue;
        }
        let d = base.largest_nonneg_at_most(&(&rest / &p))?;
        rest -= &d * &p;
        digits[i] = d;
    }
    rest.is_zero().then_some(digits)
}

/// Splits `S(A, b)` with entries in `𝒯₂(𝔸, w, k)` into `k+1` non-negative affine maps.
pub fn decompose_affine(
    a: &Matrix,
    b: &[Rational],
    w: &Rational,
    k: usize,
    base: &WeightSet,
) -> Result<Vec<ChainLayer>, TradeoffError> {
    if k == 0 {
        return Err(TradeoffError::Argument("k must be at least 1".into()));
    }
    if !base.has_zero_one() {
        return Err(TradeoffError::Argument("base set must contain 0 and 1".into()));
    }
    if *w < Rational::zero() || !base.contains(w) {
        return Err(TradeoffError::Argument(format!("w = {w} must be a non-negative member of the base set")));
    }
    if b.len() != a.rows() {
        return Err(TradeoffError::Argument(format!("bias length {} differs from {} rows", b.len(), a.rows())));
    }
    let (m, n) = (a.rows(), a.cols());
    let fail = |row: usize, col: String, v: &Rational| TradeoffError::Decomposition {
        row,
        col,
        value: v.to_string(),
        w: w.to_string(),
        k,
    };
    let mut a_digits = vec![Matrix::zeros(m, n); k + 1];
    let mut b_digits = vec![vec![Rational::zero(); m]; k + 1];
    for i in 0..m {
        for j in 0..n {
            let v = a.get(i, j);
            let ds = expand(&v, w, k, base).ok_or_else(|| fail(i, j.to_string(), &v))?;
            for (t, d) in ds.into_iter().enumerate() {
                a_digits[t].set(i, j, d);
            }
        }
        let ds = expand(&b[i], w, k, base).ok_or_else(|| fail(i, "bias".into(), &b[i]))?;
        for (t, d) in ds.into_iter().enumerate() {
            b_digits[t][i] = d;
        }
    }
    Ok(horner_chain(&a_digits, &b_digits, w))
}
