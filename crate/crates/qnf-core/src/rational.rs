//! Helpers over [`num_rational::BigRational`], the scalar type of every weight,
//! input and output.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `p/q`, reduced. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^e` for any integer `e`.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `x^e` for a non-negative exponent.
pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

pub fn relu(x: &Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else {
        x.clone()
    }
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn fmt(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p` with decimal integers; unreduced fractions are normalized.
pub fn parse(s: &str) -> Result<Rational, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (s, None),
    };
    let num = parse_int(p, true)?;
    let den = match q {
        Some(q) => parse_int(q, false)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str, signed: bool) -> Result<BigInt, String> {
    let digits = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(format!("not a decimal integer: {s:?}"));
    }
    BigInt::from_str(s).map_err(|e| e.to_string())
}

/// Maximum of a slice, or `None` if empty.
pub fn max_of<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    xs.into_iter().max().cloned()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// `⌊log2 n⌋` for a positive integer.
pub fn floor_log2(n: &BigInt) -> u64 {
    assert!(n.is_positive(), "floor_log2 of non-positive integer");
    n.bits() - 1
}

/// `⌊log2 x⌋` for a positive rational.
pub fn floor_log2_rational(x: &Rational) -> i64 {
    assert!(x.is_positive(), "log2 of non-positive rational");
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    while pow2(e) > *x {
        e -= 1;
    }
    while pow2(e + 1) <= *x {
        e += 1;
    }
    e
}

/// Dyadic bracket `lo ≤ log2(x) ≤ hi` with `frac_bits` fractional bits.
/// Both ends coincide when `x` is a power of two.
pub fn log2_bracket(x: &Rational, frac_bits: u32) -> (Rational, Rational) {
    assert!(x.is_positive(), "log2 of non-positive rational");
    let e = floor_log2_rational(x);
    let y = x / pow2(e);
    if y.is_one() {
        return (int(e), int(e));
    }
    // y in (1, 2). Bits of log2(y) come from repeated squaring on fixed-point
    // integers; rounding down (up) yields a lower (upper) bracket.
    let scale = frac_bits as usize + 64;
    let one = BigInt::one() << scale;
    let scaled = y * Rational::from_integer(one.clone());
    let lo_bits = squaring_bits(scaled.floor().to_integer(), &one, scale, frac_bits, false);
    let hi_bits = squaring_bits(scaled.ceil().to_integer(), &one, scale, frac_bits, true);
    let den = BigInt::one() << frac_bits;
    let lo = int(e) + Rational::new(lo_bits, den.clone());
    let hi = int(e) + Rational::new(hi_bits + 1, den);
    (lo, hi)
}

fn squaring_bits(mut y: BigInt, one: &BigInt, scale: usize, n: u32, up: bool) -> BigInt {
    let two = one << 1;
    let mut bits = BigInt::zero();
    for _ in 0..n {
        let sq = &y * &y;
        y = sq.clone() >> scale;
        if up && (&y << scale) != sq {
            y += 1;
        }
        bits <<= 1;
        if y >= two {
            let odd = y.is_odd();
            y >>= 1;
            if up && odd {
                y += 1;
            }
            bits += 1;
        }
    }
    bits
}

/// `⌈x⌉` as an integer.
pub fn ceil_int(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// `⌊x⌋` as an integer.
pub fn floor_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}
