//! Weight quantization into `Q_b^a`, the distance bound between two
//! networks of equal architecture, and exact output-lattice certificates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use qnf_core::rational::{ceil_int, floor_int, int, is_integer, pow, pow2};
use qnf_core::{par, sample, DyadicSet, NetworkConfig, Rational};
use rand::Rng;
use thiserror::Error;

/// A weight or bias position: layer (1-based), row, and column (`None` for the bias).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPos {
    pub layer: usize,
    pub row: usize,
    pub col: Option<usize>,
    pub value: Rational,
}

impl std::fmt::Display for WeightPos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.col {
            Some(c) => write!(f, "A{}[{},{}] = {}", self.layer, self.row, c, self.value),
            None => write!(f, "b{}[{}] = {}", self.layer, self.row, self.value),
        }
    }
}

fn list(ps: &[WeightPos]) -> String {
    let shown: Vec<String> = ps.iter().take(8).map(ToString::to_string).collect();
    let more = if ps.len() > 8 { format!(" (+{} more)", ps.len() - 8) } else { String::new() };
    format!("{}{more}", shown.join(", "))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantError {
    #[error("weights outside [-1, 1]: {}", list(.0))]
    Domain(Vec<WeightPos>),
    #[error("weights outside Q_b^a: {}", list(.0))]
    NotDyadic(Vec<WeightPos>),
    #[error("architecture mismatch: {0}")]
    Architecture(String),
    #[error("probe {index} is not in 2^-{c} Z")]
    ProbeOffLattice { index: usize, c: u32 },
    #[error("argument error: {0}")]
    Argument(String),
    #[error("construction bug: lattice violation at probe {0}")]
    Lattice(usize),
}

fn positions(config: &NetworkConfig) -> impl Iterator<Item = WeightPos> + '_ {
    config.layers().iter().enumerate().flat_map(|(l, layer)| {
        let a = layer.a.entries().map(move |(i, j, v)| WeightPos { layer: l + 1, row: i, col: Some(j), value: v.clone() });
        let b = layer.b.iter().enumerate().map(move |(i, v)| WeightPos { layer: l + 1, row: i, col: None, value: v.clone() });
        a.chain(b)
    })
}

/// `q̃(w)`: rounds toward zero onto `2^{-b} Z`.
pub fn round_toward_zero(w: &Rational, b: u32) -> Rational {
    let s = pow2(b as i64);
    let scaled = w * &s;
    let k = if *w <= Rational::zero() { ceil_int(&scaled) } else { floor_int(&scaled) };
    Rational::from_integer(k) / s
}

/// Replaces every weight `w ∈ [-1, 1]` by `q̃(w) ∈ Q_b^a ∩ [-1, 1]`.
pub fn quantize_to_dyadic(config: &NetworkConfig, set: &DyadicSet) -> Result<NetworkConfig, QuantError> {
    let bad: Vec<WeightPos> = positions(config).filter(|p| p.value.abs() > Rational::one()).collect();
    if !bad.is_empty() {
        return Err(QuantError::Domain(bad));
    }
    Ok(config.map_weights(|w| round_toward_zero(w, set.b)))
}

/// `max_j max{‖A¹_j − A²_j‖_∞, ‖b¹_j − b²_j‖_∞}`, entrywise.
pub fn weight_distance(phi1: &NetworkConfig, phi2: &NetworkConfig) -> Result<Rational, QuantError> {
    same_architecture(phi1, phi2)?;
    let mut max = Rational::zero();
    for (l1, l2) in phi1.layers().iter().zip(phi2.layers()) {
        for i in 0..l1.a.rows() {
            let mut row: Vec<(usize, Rational)> = l1.a.row_entries(i).to_vec();
            row.extend(l2.a.row_entries(i).iter().map(|(j, v)| (*j, -v)));
            row.sort_by_key(|(j, _)| *j);
            let mut k = 0;
            while k < row.len() {
                let mut d = row[k].1.clone();
                while k + 1 < row.len() && row[k + 1].0 == row[k].0 {
                    k += 1;
                    d += &row[k].1;
                }
                max = max.max(d.abs());
                k += 1;
            }
        }
        for (x, y) in l1.b.iter().zip(&l2.b) {
            max = max.max((x - y).abs());
        }
    }
    Ok(max)
}

fn same_architecture(phi1: &NetworkConfig, phi2: &NetworkConfig) -> Result<(), QuantError> {
    let shape = |c: &NetworkConfig| -> Vec<usize> {
        std::iter::once(c.input_dim()).chain(c.layers().iter().map(|l| l.out_dim())).collect()
    };
    let (s1, s2) = (shape(phi1), shape(phi2));
    if s1 != s2 {
        return Err(QuantError::Architecture(format!("{s1:?} vs {s2:?}")));
    }
    Ok(())
}

/// `L (W+1)^L B^{L-1}` with `W ≥ d`.
pub fn distance_factor(width: usize, depth: usize, b: &Rational) -> Rational {
    let l = depth as u32;
    int(depth as i64) * pow(&int(width as i64 + 1), l) * pow(b, l - 1)
}

/// `n` deterministic points of `[0, 1]^d`, starting with the two corners.
pub fn unit_grid(d: usize, n: usize) -> Vec<Vec<Rational>> {
    let m = n.max(2) as i64 - 1;
    (0..n as i64)
        .map(|i| (0..d as i64).map(|j| if d == 1 { int(i) / int(m) } else { int((i * (2 * j + 1)) % (m + 1)) / int(m) }).collect())
        .collect()
}

/// Bound and realized sup difference of [`network_distance_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub weight_distance: Rational,
    pub bound: Rational,
    pub realized: Rational,
}

impl DistanceReport {
    pub fn holds(&self) -> bool {
        self.realized <= self.bound
    }
}

/// `L (W+1)^L B^{L-1} ‖Φ¹ − Φ²‖` and the sup difference realized on a 200-point grid of `[0, 1]^d`.
pub fn network_distance_bound(phi1: &NetworkConfig, phi2: &NetworkConfig, b: &Rational) -> Result<DistanceReport, QuantError> {
    network_distance_on(phi1, phi2, b, &unit_grid(phi1.input_dim(), 200))
}

/// As [`network_distance_bound`] on caller-chosen probes in `[0, 1]^d`.
pub fn network_distance_on(
    phi1: &NetworkConfig,
    phi2: &NetworkConfig,
    b: &Rational,
    probes: &[Vec<Rational>],
) -> Result<DistanceReport, QuantError> {
    let dist = weight_distance(phi1, phi2)?;
    if *b < Rational::one() {
        return Err(QuantError::Argument(format!("B = {b} must be at least 1")));
    }
    if phi1.weight_magnitude() > *b || phi2.weight_magnitude() > *b {
        return Err(QuantError::Argument(format!("a weight magnitude exceeds B = {b}")));
    }
    let width = phi1.width().max(phi2.width()).max(phi1.input_dim());
    let bound = distance_factor(width, phi1.depth(), b) * &dist;
    let (k1, k2) = (phi1.compile(), phi2.compile());
    let diffs = par::map(probes, |x| {
        let y1 = k1.eval(x).expect("probe dimension matches");
        let y2 = k2.eval(x).expect("probe dimension matches");
        y1.iter().zip(&y2).map(|(u, v)| (u - v).abs()).max().unwrap_or_default()
    });
    let realized = diffs.into_iter().max().unwrap_or_default();
    Ok(DistanceReport { weight_distance: dist, bound, realized })
}

/// `L (W+1)^L / 2^b`.
pub fn quantization_error_bound(width: usize, depth: usize, b: u32) -> Rational {
    distance_factor(width, depth, &Rational::one()) / pow2(b as i64)
}

/// One probe of a lattice certificate: `f(x) · 2^{Lb+c}` per output.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeRow {
    pub x: Vec<Rational>,
    pub multiples: Vec<Rational>,
}

impl LatticeRow {
    pub fn ok(&self) -> bool {
        self.multiples.iter().all(is_integer)
    }

    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.ok().then(|| self.multiples.iter().map(|m| m.to_integer()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCertificate {
    /// `Lb + c`.
    pub exponent: u64,
    pub rows: Vec<LatticeRow>,
}

impl LatticeCertificate {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(LatticeRow::ok)
    }
}

/// Evaluates `f(x) · 2^{Lb+c}` at every probe and checks it is integral.
///
/// Any non-integral multiple is reported as [`QuantError::Lattice`].
pub fn check_output_lattice(
    config: &NetworkConfig,
    set: &DyadicSet,
    c: u32,
    probes: &[Vec<Rational>],
) -> Result<LatticeCertificate, QuantError> {
    let cert = lattice_certificate(config, set, c, probes)?;
    if let Some(i) = cert.rows.iter().position(|r| !r.ok()) {
        return Err(QuantError::Lattice(i));
    }
    Ok(cert)
}

/// As [`check_output_lattice`] but returns the certificate even when a row fails.
pub fn lattice_certificate(
    config: &NetworkConfig,
    set: &DyadicSet,
    c: u32,
    probes: &[Vec<Rational>],
) -> Result<LatticeCertificate, QuantError> {
    let bad: Vec<WeightPos> = positions(config).filter(|p| !set.contains(&p.value)).collect();
    if !bad.is_empty() {
        return Err(QuantError::NotDyadic(bad));
    }
    let lattice = pow2(c as i64);
    for (index, x) in probes.iter().enumerate() {
        if x.len() != config.input_dim() {
            return Err(QuantError::Argument(format!("probe {index} has dimension {}", x.len())));
        }
        if !x.iter().all(|v| is_integer(&(v * &lattice))) {
            return Err(QuantError::ProbeOffLattice { index, c });
        }
    }
    let exponent = config.depth() as u64 * set.b as u64 + c as u64;
    let scale = pow2(exponent as i64);
    let k = config.compile();
    let rows = par::map(probes, |x| {
        let y = k.eval(x).expect("probe dimension checked");
        LatticeRow { x: x.clone(), multiples: y.iter().map(|v| v * &scale).collect() }
    });
    Ok(LatticeCertificate { exponent, rows })
}

/// Default probes in `2^{-c} Z ∩ [0, 1]^d`: exhaustive when at most 4096
/// points and `c ≤ 10`, otherwise 256 random lattice points.
pub fn default_lattice_probes<R: Rng>(rng: &mut R, d: usize, c: u32) -> Vec<Vec<Rational>> {
    let side = (1u64 << c.min(63)) + 1;
    let total = (side as f64).powi(d as i32);
    let step = pow2(-(c as i64));
    if c <= 10 && total <= 4096.0 {
        let mut out = vec![Vec::new()];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..side).map(move |i| {
                        let mut q = p.clone();
                        q.push(int(i as i64));
                        q
                    })
                })
                .collect();
        }
        return out.into_iter().map(|p| p.into_iter().map(|i| i * &step).collect()).collect();
    }
    (0..256)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let i = BigInt::from(rng.gen_range(0..=u64::MAX >> 1)) % BigInt::from(side);
                    Rational::from_integer(i) * &step
                })
                .collect()
        })
        .collect()
}

/// Random net with weights in `2^{-bits} Z ∩ [-1, 1]`.
pub fn random_unit_net<R: Rng>(rng: &mut R, d: usize, width: usize, depth: usize, bits: u32) -> NetworkConfig {
    let dims = sample::dims(rng, d, 1, depth, width);
    sample::config(rng, &dims, |r| sample::dyadic_in(r, 1, bits))
}
