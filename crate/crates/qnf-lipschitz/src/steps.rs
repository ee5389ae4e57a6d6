use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use qnf_algebra::{add, compose, parallelize, parallelize_all, scalar_mul};
use qnf_bitx::{build_extractor, TernaryCode};
use qnf_core::rational::{floor_int, frac, int};
use qnf_core::{Layer, Matrix, NetworkConfig, Rational};
use qnf_pwl::{realize_deep_scaled, PiecewiseLinear};

use crate::median::build_median;
use crate::{ApproxParams, LipschitzError, LipschitzSamples};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    F1,
    F2,
    F,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::F1 => "f1",
            Stage::F2 => "f2",
            Stage::F => "f",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A stage network together with the width, depth and magnitude it is claimed to respect.
#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub stage: Stage,
    pub config: NetworkConfig,
    pub claimed_width: usize,
    pub claimed_depth: usize,
    pub claimed_magnitude: Rational,
}

impl StageReport {
    fn new(stage: Stage, config: NetworkConfig, p: &ApproxParams) -> Self {
        let (claimed_width, claimed_depth) = match stage {
            Stage::F1 => (200 * p.m + p.decoder_width(), 37 * p.l),
            Stage::F2 => (200 * p.m + p.decoder_width(), 98 * p.l),
            Stage::F => (600 * p.m + 4 * p.decoder_width(), 101 * p.l),
        };
        StageReport { stage, config, claimed_width, claimed_depth, claimed_magnitude: p.magnitude_bound() }
    }

    pub fn within_bounds(&self) -> bool {
        self.config.width() <= self.claimed_width
            && self.config.depth() <= self.claimed_depth
            && self.config.weight_magnitude() <= self.claimed_magnitude
    }
}

/// The ingredients of `f₁ = h + (1/G)(F∘(b⁺, s) − F∘(b⁻, s))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Step1Parts {
    /// Coarse plateau fit: `g(j/(m²ℓ))` on cell `j`.
    pub h: PiecewiseLinear,
    pub b_plus: PiecewiseLinear,
    pub b_minus: PiecewiseLinear,
    /// Local grid counter: `s(j/(m²ℓ) + k/G) = k`.
    pub s: PiecewiseLinear,
    /// `t[j][k] = ⌊G·(g − h)(j/(m²ℓ) + k/G)⌋`.
    pub t: Vec<Vec<i64>>,
    pub theta_plus: Vec<TernaryCode>,
    pub theta_minus: Vec<TernaryCode>,
}

/// Breakpoints `j/(m²ℓ)`, `(j+1)/(m²ℓ) − Δ`, `j = 0, …, m²ℓ − 1`.
fn cell_breakpoints(p: &ApproxParams) -> Vec<Rational> {
    let c = p.cells() as i64;
    let delta = p.delta();
    (0..c).flat_map(|j| [frac(j, c), frac(j + 1, c) - &delta]).collect()
}

/// Same value at both breakpoints of each cell.
fn plateau_fn(x: Vec<Rational>, per_cell: impl Fn(usize) -> Rational) -> Result<PiecewiseLinear, LipschitzError> {
    let y = (0..x.len()).map(|i| per_cell(i / 2)).collect();
    Ok(PiecewiseLinear::new(x, y)?)
}

/// Rises with slope one on each plateau of `x`, falls back to zero on each ramp.
fn sawtooth_fn(x: Vec<Rational>, top: Rational) -> Result<PiecewiseLinear, LipschitzError> {
    let y = (0..x.len()).map(|i| if i % 2 == 0 { Rational::zero() } else { top.clone() }).collect();
    Ok(PiecewiseLinear::new(x, y)?)
}

fn to_i64(v: &Rational) -> i64 {
    floor_int(v).to_i64().expect("remainder fits in i64")
}

pub fn step1_parts(samples: &LipschitzSamples, p: &ApproxParams) -> Result<Step1Parts, LipschitzError> {
    let g = samples.values();
    if g.len() != p.grid() {
        return Err(LipschitzError::SampleCount { expected: p.grid(), got: g.len() });
    }
    let (cells, per) = (p.cells(), p.per_cell());
    let big_g = int(p.grid() as i64);
    let t: Vec<Vec<i64>> = (0..cells)
        .map(|j| (0..per).map(|k| to_i64(&(&big_g * (&g[j * per + k] - &g[j * per])))).collect())
        .collect();
    let mut theta_plus = Vec::with_capacity(cells);
    let mut theta_minus = Vec::with_capacity(cells);
    for (j, tj) in t.iter().enumerate() {
        let mut plus = Vec::with_capacity(per - 1);
        let mut minus = Vec::with_capacity(per - 1);
        for k in 1..per {
            match tj[k] - tj[k - 1] {
                1 => (plus.push(1), minus.push(0)),
                0 => (plus.push(0), minus.push(0)),
                -1 => (plus.push(0), minus.push(1)),
                d => {
                    return Err(LipschitzError::Invariant(format!("t_{j}({k}) − t_{j}({}) = {d}", k - 1)));
                }
            };
        }
        theta_plus.push(TernaryCode::new(plus)?);
        theta_minus.push(TernaryCode::new(minus)?);
    }
    let x = cell_breakpoints(p);
    let h = plateau_fn(x.clone(), |j| g[j * per].clone())?;
    let b_plus = plateau_fn(x.clone(), |j| theta_plus[j].value())?;
    let b_minus = plateau_fn(x.clone(), |j| theta_minus[j].value())?;
    let s = sawtooth_fn(x, int(per as i64) - &big_g * p.delta())?;
    Ok(Step1Parts { h, b_plus, b_minus, s, t, theta_plus, theta_minus })
}

/// Realization of a cell-grid function in `R(40m, 30ℓ, 8mn)`.
fn realize_cell_fn(f: &PiecewiseLinear, p: &ApproxParams) -> Result<NetworkConfig, LipschitzError> {
    Ok(realize_deep_scaled(f, 2 * p.m, p.l, &p.carrier_weight())?)
}

/// `f₁ ∈ R(200m + 2^{n+5}, 37ℓ, max{8mn, 3^{n+2}})` with `|f₁(i/G) − g(i/G)| ≤ 1/G`.
pub fn build_step1(samples: &LipschitzSamples, p: &ApproxParams) -> Result<StageReport, LipschitzError> {
    let parts = step1_parts(samples, p)?;
    let h = realize_cell_fn(&parts.h, p)?;
    let b_plus = realize_cell_fn(&parts.b_plus, p)?;
    let b_minus = realize_cell_fn(&parts.b_minus, p)?;
    let s = realize_cell_fn(&parts.s, p)?;
    let decoder = build_extractor(p.n, p.l)?;
    let read_plus = compose(&decoder, &parallelize(&b_plus, &s)?)?;
    let read_minus = compose(&decoder, &parallelize(&b_minus, &s)?)?;
    let increment = add(&read_plus, &scalar_mul(&-Rational::one(), &read_minus))?;
    let f1 = add(&h, &scalar_mul(&p.step(), &increment))?;
    Ok(StageReport::new(Stage::F1, f1, p))
}

/// `u = Id − u₂ ∘ u₁`, equal to `i/G` on each plateau `[i/G, (i+1)/G − Δ]`.
pub fn step2_u(p: &ApproxParams) -> Result<NetworkConfig, LipschitzError> {
    let delta = p.delta();
    let cell = frac(1, p.cells() as i64);
    let u1 = sawtooth_fn(cell_breakpoints(p), &cell - &delta)?;
    let grid = p.grid() as i64;
    let x2 = (0..p.per_cell() as i64).flat_map(|k| [frac(k, grid), frac(k + 1, grid) - &delta]).collect();
    let u2 = sawtooth_fn(x2, p.step() - &delta)?;
    let u1 = realize_cell_fn(&u1, p)?;
    let u2 = realize_deep_scaled(&u2, 2 * p.n, p.l, &p.carrier_weight())?;
    let offset = compose(&u2, &u1)?;
    Ok(add(&NetworkConfig::identity(1), &scalar_mul(&-Rational::one(), &offset))?)
}

/// `f₂ = f₁ ∘ u` in `R(200m + 2^{n+5}, 98ℓ, max{8mn, 3^{n+2}})`.
pub fn build_step2(f1: &StageReport, p: &ApproxParams) -> Result<StageReport, LipschitzError> {
    if f1.stage != Stage::F1 {
        return Err(LipschitzError::Params(format!("step 2 needs an f1 report, got {}", f1.stage)));
    }
    let f2 = compose(&f1.config, &step2_u(p)?)?;
    Ok(StageReport::new(Stage::F2, f2, p))
}

/// `r_z(x) = ρ(x − z)` as a two-layer network.
pub fn shift_relu(z: &Rational) -> NetworkConfig {
    let one = || Matrix::row(vec![Rational::one()]);
    NetworkConfig::new_unchecked(1, vec![Layer::new(one(), vec![-z.clone()]), Layer::linear(one())])
}

/// `f(x) = median(f₂(ρ(x − 2Δ)), f₂(ρ(x − 4Δ)), f₂(ρ(x − 6Δ)))` in
/// `R(600m + 2^{n+7}, 101ℓ, max{8mn, 3^{n+2}})`.
pub fn build_step3(f2: &StageReport, p: &ApproxParams) -> Result<StageReport, LipschitzError> {
    if f2.stage != Stage::F2 {
        return Err(LipschitzError::Params(format!("step 3 needs an f2 report, got {}", f2.stage)));
    }
    let delta = p.delta();
    let shifted = [2, 4, 6]
        .iter()
        .map(|&a| compose(&f2.config, &shift_relu(&(int(a) * &delta))))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&NetworkConfig> = shifted.iter().collect();
    let f = compose(&build_median(), &parallelize_all(&refs)?)?;
    Ok(StageReport::new(Stage::F, f, p))
}

/// All three stages for `samples`.
pub fn build_all(samples: &LipschitzSamples, p: &ApproxParams) -> Result<[StageReport; 3], LipschitzError> {
    let f1 = build_step1(samples, p)?;
    let f2 = build_step2(&f1, p)?;
    let f = build_step3(&f2, p)?;
    Ok([f1, f2, f])
}

/// `i/G + (k/(c+1))·(1/G − Δ)` for every plateau `i` and `k = 1, …, c`.
pub fn plateau_points(p: &ApproxParams, c: usize) -> Vec<Rational> {
    let width = p.step() - p.delta();
    let grid = p.grid() as i64;
    (0..grid)
        .flat_map(|i| {
            let width = width.clone();
            (1..=c as i64).map(move |k| frac(i, grid) + frac(k, c as i64 + 1) * &width)
        })
        .collect()
}
