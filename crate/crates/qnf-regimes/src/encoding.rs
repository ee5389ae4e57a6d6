use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use qnf_core::rational::pow2;
use qnf_core::{DyadicSet, Layer, Matrix, NetworkConfig, Rational};

use crate::RegimeError;

/// A configuration serialized under the natural encoding: the depth, the
/// layer dimensions and then every weight of every `(A_i, b_i)` as a sign bit
/// followed by `a + 1 + b` magnitude digits, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedNetwork {
    pub bytes: Vec<u8>,
    pub bit_len: u64,
}

/// `⌈log₂ n⌉`: the bits needed to index `0, …, n − 1`.
fn index_bits(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

fn dims(config: &NetworkConfig) -> Vec<usize> {
    std::iter::once(config.input_dim()).chain(config.layers().iter().map(Layer::out_dim)).collect()
}

fn check_class(config: &NetworkConfig, set: &DyadicSet, w: u64, l: u64) -> Result<(), RegimeError> {
    if config.width() as u64 > w || config.depth() as u64 > l {
        return Err(RegimeError::Encoding(format!(
            "width {} and depth {} exceed ({w}, {l})",
            config.width(),
            config.depth()
        )));
    }
    if !config.weights_in(set) {
        return Err(RegimeError::Encoding(format!("a weight lies outside Q_{}^{}", set.b, set.a)));
    }
    Ok(())
}

/// Exact bit length of [`encode_natural`] for a configuration in the class.
pub fn natural_bit_length(config: &NetworkConfig, set: &DyadicSet, w: u64, l: u64) -> Result<u64, RegimeError> {
    check_class(config, set, w, l)?;
    let weights: u64 = config.layers().iter().map(|x| (x.out_dim() * (x.in_dim() + 1)) as u64).sum();
    Ok(index_bits(l) as u64 + (config.depth() as u64 + 1) * index_bits(w) as u64 + weights * set.bits_per_weight())
}

#[derive(Default)]
struct BitWriter {
    bytes: Vec<u8>,
    len: u64,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("byte pushed") |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    fn push_uint(&mut self, v: &BigInt, bits: u64) {
        for i in (0..bits).rev() {
            self.push(v.bit(i));
        }
    }
}

struct BitReader<'a> {
    enc: &'a EncodedNetwork,
    pos: u64,
}

impl BitReader<'_> {
    fn bit(&mut self) -> Result<bool, RegimeError> {
        if self.pos >= self.enc.bit_len {
            return Err(RegimeError::Encoding("truncated bit stream".into()));
        }
        let b = self.enc.bytes[(self.pos / 8) as usize] & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(b)
    }

    fn uint(&mut self, bits: u64) -> Result<BigInt, RegimeError> {
        let mut v = BigInt::zero();
        for _ in 0..bits {
            v = (v << 1u32) + BigInt::from(self.bit()? as u8);
        }
        Ok(v)
    }

    fn small(&mut self, bits: u32) -> Result<usize, RegimeError> {
        Ok(usize::try_from(self.uint(bits as u64)?).expect("index fits"))
    }
}

fn weight_bits(set: &DyadicSet) -> u64 {
    set.a as u64 + 1 + set.b as u64
}

/// Serializes a configuration of width `≤ w`, depth `≤ l` and weights in `set`.
pub fn encode_natural(config: &NetworkConfig, set: &DyadicSet, w: u64, l: u64) -> Result<EncodedNetwork, RegimeError> {
    check_class(config, set, w, l)?;
    let mut out = BitWriter::default();
    out.push_uint(&BigInt::from(config.depth() - 1), index_bits(l) as u64);
    for d in dims(config) {
        out.push_uint(&BigInt::from(d - 1), index_bits(w) as u64);
    }
    let scale = pow2(set.b as i64);
    let mut put = |v: &Rational| {
        let m = (v * &scale).to_integer();
        out.push(m.is_negative());
        out.push_uint(&m.abs(), weight_bits(set));
    };
    for layer in config.layers() {
        for i in 0..layer.out_dim() {
            for j in 0..layer.in_dim() {
                put(&layer.a.get(i, j));
            }
        }
        for v in &layer.b {
            put(v);
        }
    }
    Ok(EncodedNetwork { bytes: out.bytes, bit_len: out.len })
}

/// Inverse of [`encode_natural`] for the same `(set, w, l)`.
pub fn decode_natural(enc: &EncodedNetwork, set: &DyadicSet, w: u64, l: u64) -> Result<NetworkConfig, RegimeError> {
    let mut r = BitReader { enc, pos: 0 };
    let depth = r.small(index_bits(l))? + 1;
    let dims = (0..=depth).map(|_| Ok(r.small(index_bits(w))? + 1)).collect::<Result<Vec<_>, RegimeError>>()?;
    let unit = pow2(-(set.b as i64));
    let get = |r: &mut BitReader| -> Result<Rational, RegimeError> {
        let negative = r.bit()?;
        let m = r.uint(weight_bits(set))?;
        let m = if negative { BigInt::from_biguint(Sign::Minus, m.magnitude().clone()) } else { m };
        Ok(Rational::from_integer(m) * &unit)
    };
    let mut layers = Vec::with_capacity(depth);
    for k in 0..depth {
        let (rows, cols) = (dims[k + 1], dims[k]);
        let a = (0..rows)
            .map(|_| (0..cols).map(|_| get(&mut r)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let b = (0..rows).map(|_| get(&mut r)).collect::<Result<Vec<_>, _>>()?;
        layers.push(Layer::new(Matrix::from_dense(a, cols), b));
    }
    if r.pos != enc.bit_len {
        return Err(RegimeError::Encoding(format!("{} trailing bits", enc.bit_len - r.pos)));
    }
    NetworkConfig::new(dims[0], layers).map_err(|e| RegimeError::Encoding(e.to_string()))
}
