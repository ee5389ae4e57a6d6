//! Seeded random inputs and configurations for probes and tests.

use num_bigint::BigInt;
use rand::Rng;

use crate::dyadic::DyadicSet;
use crate::matrix::Matrix;
use crate::network::{Layer, NetworkConfig};
use crate::rational::{frac, pow2, Rational};

/// Uniform element of `Q_b^a`.
pub fn dyadic<R: Rng>(rng: &mut R, set: &DyadicSet) -> Rational {
    let bound: i64 = 1 << (set.a + set.b + 1);
    let n = rng.gen_range(-(bound - 1)..bound);
    Rational::from_integer(BigInt::from(n)) * pow2(-(set.b as i64))
}

/// Random rational in `[lo, hi]` with denominator at most `2^den_bits`.
pub fn rational_in<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational, den_bits: u32) -> Rational {
    let q: i64 = rng.gen_range(1..=(1i64 << den_bits));
    let p: i64 = rng.gen_range(0..=q);
    lo + (hi - lo) * frac(p, q)
}

/// Random dyadic in `[-bound, bound]` with `bits` fractional digits.
pub fn dyadic_in<R: Rng>(rng: &mut R, bound: i64, bits: u32) -> Rational {
    let s = bound << bits;
    frac(rng.gen_range(-s..=s), 1 << bits)
}

/// Random network with the given layer widths `dims = [d, N_1, …, N_L]`,
/// drawing each weight from `weight`.
pub fn config<R: Rng>(
    rng: &mut R,
    dims: &[usize],
    mut weight: impl FnMut(&mut R) -> Rational,
) -> NetworkConfig {
    assert!(dims.len() >= 2, "need at least one layer");
    let layers = dims
        .windows(2)
        .map(|w| {
            let a = Matrix::from_dense(
                (0..w[1]).map(|_| (0..w[0]).map(|_| weight(rng)).collect()).collect(),
                w[0],
            );
            let b = (0..w[1]).map(|_| weight(rng)).collect();
            Layer::new(a, b)
        })
        .collect();
    NetworkConfig::new(dims[0], layers).expect("generated dimensions chain")
}

/// Random layer widths: input `d`, output `d_out`, `depth` layers, hidden widths in `1..=width`.
pub fn dims<R: Rng>(rng: &mut R, d: usize, d_out: usize, depth: usize, width: usize) -> Vec<usize> {
    let mut v = vec![d];
    for _ in 1..depth {
        v.push(rng.gen_range(1..=width));
    }
    v.push(d_out);
    v
}

/// Standard equivalence probe set in dimension `d`: 64 points of the lattice
/// `2^-5 ℤ ∩ [-1, 1)`, 64 random rationals in `[-1, 1]` with denominators at
/// most `2^20`, then the all-zero and all-one points.
pub fn probe_grid<R: Rng>(rng: &mut R, d: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(130);
    for i in 0..64i64 {
        out.push(
            (0..d as i64)
                .map(|k| frac((i + 17 * k).rem_euclid(64) - 32, 32))
                .collect(),
        );
    }
    let (lo, hi) = (frac(-1, 1), frac(1, 1));
    for _ in 0..64 {
        out.push((0..d).map(|_| rational_in(rng, &lo, &hi, 20)).collect());
    }
    out.push(vec![frac(0, 1); d]);
    out.push(vec![frac(1, 1); d]);
    out
}
