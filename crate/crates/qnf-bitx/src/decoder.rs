use num_traits::{One, ToPrimitive, Zero};
use qnf_algebra::{compose, parallelize};
use qnf_core::rational::{int, is_integer, pow};
use qnf_core::{par, Layer, Matrix, NetworkConfig, Rational};

use crate::ternary::{ternary_value, TernaryCode};
use crate::BitxError;

/// Prefixes `{0,1}^n` in lexicographic order.
fn prefixes(n: usize) -> Vec<Vec<u8>> {
    TernaryCode::all(n).into_iter().map(|c| c.digits().to_vec()).collect()
}

fn with(prefix: &[u8], tail: &[u8]) -> Rational {
    let mut d = prefix.to_vec();
    d.extend_from_slice(tail);
    ternary_value(&d)
}

/// Kinks `(u, v)` of `h^ℓ(y) = Σ u ρ(y − v)`.
fn indicator_kinks(l: usize) -> Vec<(Rational, Rational)> {
    if l == 1 {
        return vec![(int(9), ternary_value(&[0, 2])), (int(-9), ternary_value(&[1, 0]))];
    }
    let c = pow(&int(3), l as u32 + 1);
    prefixes(l - 1)
        .iter()
        .flat_map(|a| {
            [
                (c.clone(), with(a, &[0, 2])),
                (-c.clone(), with(a, &[1])),
                (-c.clone(), with(a, &[2])),
                (c.clone(), with(a, &[2, 1])),
            ]
        })
        .collect()
}

/// `h^ℓ` as a 2-layer scalar network: 1 on codes with `θ_ℓ = 1`, 0 otherwise.
pub fn build_indicator(l: usize) -> Result<NetworkConfig, BitxError> {
    if l == 0 || l > 20 {
        return Err(BitxError::Argument(format!("digit index {l} must lie in 1..=20")));
    }
    let (u, v): (Vec<_>, Vec<_>) = indicator_kinks(l).into_iter().unzip();
    let a1 = Matrix::column(vec![Rational::one(); u.len()]);
    let b1 = v.into_iter().map(|v| -v).collect();
    Ok(NetworkConfig::new(1, vec![Layer::new(a1, b1), Layer::new(Matrix::row(u), vec![Rational::zero()])])
        .expect("indicator layers chain"))
}

/// `g¹(x, y, z) = ρ(ρ(x)) + Σ_ℓ ρ(h^ℓ(y) + ρ(z − (ℓ−1)) − ρ(z − ℓ) − 1)`.
fn build_g1(n: usize) -> NetworkConfig {
    let one = Rational::one;
    let mut rows1: Vec<(usize, Rational, Rational)> = vec![(0, one(), Rational::zero())];
    let mut second: Vec<Vec<(usize, Rational)>> = vec![vec![(0, one())]];
    for l in 1..=n {
        let mut row = Vec::new();
        for (u, v) in indicator_kinks(l) {
            row.push((rows1.len(), u));
            rows1.push((1, one(), -v));
        }
        row.push((rows1.len(), one()));
        rows1.push((2, one(), -int(l as i64 - 1)));
        row.push((rows1.len(), -one()));
        rows1.push((2, one(), -int(l as i64)));
        second.push(row);
    }
    let w1 = rows1.len();
    let mut a1 = Matrix::zeros(w1, 3);
    let b1 = rows1
        .into_iter()
        .enumerate()
        .map(|(i, (j, w, b))| {
            a1.set(i, j, w);
            b
        })
        .collect();
    let mut a2 = Matrix::zeros(n + 1, w1);
    for (i, row) in second.into_iter().enumerate() {
        for (j, w) in row {
            a2.set(i, j, w);
        }
    }
    let mut b2 = vec![-one(); n + 1];
    b2[0] = Rational::zero();
    let a3 = Matrix::row(vec![one(); n + 1]);
    NetworkConfig::new(3, vec![Layer::new(a1, b1), Layer::new(a2, b2), Layer::new(a3, vec![Rational::zero()])])
        .expect("g1 layers chain")
}

/// `g²(x, y, z) = Σ_a 3^N ρ(y − T(a)) − 7·3^N ρ(y − T(a,2)) + 6·3^N ρ(y − T(a,2,1))`.
fn build_g2(n: usize) -> NetworkConfig {
    let c = pow(&int(3), n as u32);
    let mut offsets = Vec::new();
    let mut out = Vec::new();
    for a in prefixes(n) {
        offsets.push(-with(&a, &[]));
        offsets.push(-with(&a, &[2]));
        offsets.push(-with(&a, &[2, 1]));
        out.extend([c.clone(), int(-7) * &c, int(6) * &c]);
    }
    let a1 = Matrix::from_fn(offsets.len(), 3, |_, j| if j == 1 { Rational::one() } else { Rational::zero() });
    NetworkConfig::new(3, vec![Layer::new(a1, offsets), Layer::new(Matrix::row(out), vec![Rational::zero()])])
        .expect("g2 layers chain")
}

/// `g³(x, y, z) = ρ(z − N)`.
fn build_g3(n: usize) -> NetworkConfig {
    let a1 = Matrix::row(vec![Rational::zero(), Rational::zero(), Rational::one()]);
    NetworkConfig::new(
        3,
        vec![
            Layer::new(a1, vec![-int(n as i64)]),
            Layer::new(Matrix::row(vec![Rational::one()]), vec![Rational::zero()]),
        ],
    )
    .expect("g3 layers chain")
}

fn check_n(n: usize) -> Result<(), BitxError> {
    if n == 0 || n > 20 {
        return Err(BitxError::Argument(format!("N = {n} must lie in 1..=20")));
    }
    Ok(())
}

/// `g = ((g¹, g²), g³)` on `(X, y, k)`.
pub fn build_g(n: usize) -> Result<NetworkConfig, BitxError> {
    check_n(n)?;
    let inner = parallelize(&build_g1(n), &build_g2(n)).expect("equal input dimensions");
    Ok(parallelize(&inner, &build_g3(n)).expect("equal input dimensions"))
}

/// `G_{N,L}`: `g` composed with itself `L` times.
pub fn build_g_power(n: usize, l: usize) -> Result<NetworkConfig, BitxError> {
    if l == 0 {
        return Err(BitxError::Argument("L must be at least 1".into()));
    }
    let g = build_g(n)?;
    let mut acc = g.clone();
    for _ in 1..l {
        acc = compose(&g, &acc).expect("g maps R^3 to R^3");
    }
    Ok(acc)
}

/// `F_{N,L} = f₂ ∘ G_{N,L} ∘ f₁` on `(y, k)`.
pub fn build_extractor(n: usize, l: usize) -> Result<NetworkConfig, BitxError> {
    let g = build_g_power(n, l)?;
    let f1 = NetworkConfig::affine(
        Matrix::from_fn(3, 2, |i, j| if i == j + 1 { Rational::one() } else { Rational::zero() }),
        vec![Rational::zero(); 3],
    );
    let f2 = NetworkConfig::affine(
        Matrix::row(vec![Rational::one(), Rational::zero(), Rational::zero()]),
        vec![Rational::zero()],
    );
    let inner = compose(&g, &f1).expect("f1 maps R^2 to R^3");
    Ok(compose(&f2, &inner).expect("f2 maps R^3 to R"))
}

fn check_k(k: &Rational) -> Result<u64, BitxError> {
    if !is_integer(k) || *k < Rational::zero() {
        return Err(BitxError::Argument(format!("k = {k} must be a non-negative integer")));
    }
    k.to_integer()
        .to_u64()
        .ok_or_else(|| BitxError::Argument(format!("k = {k} is too large")))
}

fn decode(net: &qnf_core::CompiledNetwork, code: &TernaryCode, k: u64) -> Result<u64, BitxError> {
    let out = net.eval(&[code.value(), int(k as i64)]);
    let v = out.map_err(|e| BitxError::Construction(e.to_string()))?.remove(0);
    if !is_integer(&v) {
        return Err(BitxError::Construction(v.to_string()));
    }
    v.to_integer().to_u64().ok_or_else(|| BitxError::Construction(v.to_string()))
}

/// Evaluates `F_{N,L}(T(θ), k)` and checks it against `Σ_{i ≤ min{NL, k}} θ_i`.
pub fn extract(n: usize, l: usize, code: &TernaryCode, k: &Rational) -> Result<u64, BitxError> {
    let k = check_k(k)?;
    let net = build_extractor(n, l)?.compile();
    let got = decode(&net, code, k)?;
    let expected = code.partial_sum(((n * l) as u64).min(k) as usize);
    if got != expected {
        return Err(BitxError::Construction(format!("{got} (expected {expected})")));
    }
    Ok(got)
}

/// One verification row: `theta,k,expected,got,pass`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyRow {
    pub theta: TernaryCode,
    pub k: u64,
    pub expected: u64,
    pub got: Option<u64>,
}

impl VerifyRow {
    pub fn pass(&self) -> bool {
        self.got == Some(self.expected)
    }
}

/// Every `θ ∈ {0,1}^s` with `s ≤ NL` and every `k ≤ s`.
pub fn verify_exhaustive(n: usize, l: usize) -> Result<Vec<VerifyRow>, BitxError> {
    let net = build_extractor(n, l)?.compile();
    let cases: Vec<(TernaryCode, u64)> = (0..=n * l)
        .flat_map(|s| TernaryCode::all(s).into_iter().flat_map(move |c| (0..=s as u64).map(move |k| (c.clone(), k))))
        .collect();
    Ok(par::map(&cases, |(code, k)| VerifyRow {
        theta: code.clone(),
        k: *k,
        expected: code.partial_sum(((n * l) as u64).min(*k) as usize),
        got: decode(&net, code, *k).ok(),
    }))
}
