use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use qnf_core::rational::pow2;
use qnf_core::{DyadicSet, Layer, Matrix, NetworkConfig, Rational};

use crate::horner::horner_chain;
use crate::TradeoffError;

/// `x = Σ_{i<k} (u^i α_i + v^i β_i)` with `u = 2^{-b}`, `v = 2^a`, `β_0 = 0`
/// and the sign of `x` carried by every digit.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitSplit {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl DigitSplit {
    pub fn value(&self, a: u32, b: u32) -> Rational {
        let (u, v) = (pow2(-(b as i64)), pow2(a as i64));
        let mut acc = Rational::zero();
        let (mut ui, mut vi) = (Rational::one(), Rational::one());
        for (al, be) in self.alpha.iter().zip(&self.beta) {
            acc += al * &ui + be * &vi;
            ui *= &u;
            vi *= &v;
        }
        acc
    }
}

fn bits(n: &BigInt, lo: u64, hi: u64) -> BigInt {
    (n >> lo) & ((BigInt::one() << (hi - lo)) - 1)
}

/// Canonical base-2 digit grouping of `x ∈ Q_{kb}^{ka}`.
pub fn split_digits(x: &Rational, a: u32, b: u32, k: u32) -> Result<DigitSplit, TradeoffError> {
    let outer = DyadicSet::new(a * k, b * k);
    if !outer.contains(x) {
        return Err(TradeoffError::OutsideSet { layer: 0, value: x.to_string(), a: (a * k) as u64, b: (b * k) as u64 });
    }
    let (a, b, k) = (a as u64, b as u64, k as u64);
    // |x| · 2^{kb} as an integer; bit p corresponds to 2^{p - kb}.
    let n = (x.abs() * pow2((k * b) as i64)).to_integer();
    let sign = if x.is_negative() { -Rational::one() } else { Rational::one() };
    let shift = k * b;
    let at = |lo_exp: i64, hi_exp: i64| -> BigInt { bits(&n, (lo_exp + shift as i64) as u64, (hi_exp + shift as i64) as u64) };
    let mut alpha = Vec::with_capacity(k as usize);
    let mut beta = Vec::with_capacity(k as usize);
    for i in 0..k {
        let (ii, ai, bi) = (i as i64, a as i64, b as i64);
        let al = if i == 0 {
            Rational::from_integer(at(-bi, ai + 1)) * pow2(-bi)
        } else {
            Rational::from_integer(at(-bi * (ii + 1), -bi * ii)) * pow2(-bi)
        };
        let be = if i == 0 {
            Rational::zero()
        } else {
            Rational::from_integer(at(ai * ii + 1, ai * (ii + 1) + 1)) * pow2(1)
        };
        alpha.push(&sign * al);
        beta.push(&sign * be);
    }
    Ok(DigitSplit { alpha, beta })
}

/// The four non-negative parts `(u,+), (u,-), (v,+), (v,-)` of `S(A, b)`,
/// each as Horner digit matrices.
fn branches(a_mat: &Matrix, b_vec: &[Rational], a: u32, b: u32, k: u32) -> Result<[(Vec<Matrix>, Vec<Vec<Rational>>); 4], TradeoffError> {
    let (m, n) = (a_mat.rows(), a_mat.cols());
    let kk = k as usize;
    let empty = || (vec![Matrix::zeros(m, n); kk], vec![vec![Rational::zero(); m]; kk]);
    let mut out = [empty(), empty(), empty(), empty()];
    let pos = |r: &Rational| if r.is_positive() { r.clone() } else { Rational::zero() };
    let neg = |r: &Rational| if r.is_negative() { -r } else { Rational::zero() };
    let mut place = |i: usize, j: Option<usize>, x: &Rational| -> Result<(), TradeoffError> {
        let s = split_digits(x, a, b, k)?;
        for t in 0..kk {
            let vals = [pos(&s.alpha[t]), neg(&s.alpha[t]), pos(&s.beta[t]), neg(&s.beta[t])];
            for (o, v) in out.iter_mut().zip(vals) {
                match j {
                    Some(j) => o.0[t].set(i, j, v),
                    None => o.1[t][i] = v,
                }
            }
        }
        Ok(())
    };
    for i in 0..m {
        for j in 0..n {
            place(i, Some(j), &a_mat.get(i, j))?;
        }
        place(i, None, &b_vec[i])?;
    }
    Ok(out)
}

/// `k + 1` layers realizing `S(A, b) ∘ ρ` with weights in `Q_b^a`, followed by ρ.
fn block(a_mat: &Matrix, b_vec: &[Rational], a: u32, b: u32, k: u32) -> Result<Vec<Layer>, TradeoffError> {
    let parts = branches(a_mat, b_vec, a, b, k)?;
    let ws = [pow2(-(b as i64)), pow2(-(b as i64)), pow2(a as i64), pow2(a as i64)];
    let chains: Vec<Vec<Layer>> = parts.iter().zip(&ws).map(|((ad, bd), w)| horner_chain(ad, bd, w)).collect();
    let depth = chains[0].len();
    let mut out = Vec::with_capacity(depth + 1);
    for t in 0..depth {
        let (mut g, mut h) = (chains[0][t].a.clone(), chains[0][t].b.clone());
        for c in &chains[1..] {
            g = if t == 0 { g.vstack(&c[t].a) } else { g.block_diag(&c[t].a) };
            h.extend(c[t].b.iter().cloned());
        }
        out.push(Layer::new(g, h));
    }
    let m = a_mat.rows();
    let id = Matrix::identity(m);
    let mid = id.neg();
    let last = id.hstack(&mid).hstack(&id).hstack(&mid);
    out.push(Layer::new(last, vec![Rational::zero(); m]));
    Ok(out)
}

/// Rewrites a net with weights in `Q_{kb}^{ka}` as an equivalent net with
/// weights in `Q_b^a`, width at most `16W` and depth `1 + L(k+1)`.
pub fn depth_precision_transform(config: &NetworkConfig, a: u32, b: u32, k: u32) -> Result<NetworkConfig, TradeoffError> {
    if k == 0 || a == 0 || b == 0 {
        return Err(TradeoffError::Argument("a, b and k must be at least 1".into()));
    }
    let outer = DyadicSet::new(a * k, b * k);
    for (l, layer) in config.layers().iter().enumerate() {
        if let Some(v) = layer.a.entries().map(|(_, _, v)| v).chain(layer.b.iter()).find(|v| !outer.contains(v)) {
            return Err(TradeoffError::OutsideSet { layer: l + 1, value: v.to_string(), a: (a * k) as u64, b: (b * k) as u64 });
        }
    }
    if k == 1 {
        return Ok(config.clone());
    }
    let d = config.input_dim();
    let id = Matrix::identity(d);
    let mut layers = vec![Layer::new(id.vstack(&id.neg()), vec![Rational::zero(); 2 * d])];
    for (j, layer) in config.layers().iter().enumerate() {
        let a_mat = if j == 0 { layer.a.hstack(&layer.a.neg()) } else { layer.a.clone() };
        layers.extend(block(&a_mat, &layer.b, a, b, k)?);
    }
    Ok(NetworkConfig::new(d, layers).expect("blocks chain"))
}
