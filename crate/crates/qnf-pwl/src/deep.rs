use num_traits::{One, Zero};
use qnf_algebra::{add, extend_depth, homogeneous_scale, scalar_mul};
use qnf_core::rational::{int, pow, relu};
use qnf_core::{Layer, Matrix, NetError, NetworkConfig, Rational};

use crate::function::{interpolate, mesh_stats, PiecewiseLinear, PwlError, ReluExpansion};

/// Architecture parameters actually used by [`realize_deep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeepPlan {
    pub u_hat: usize,
    pub v_hat: usize,
    /// `M̂ = û²v̂`, the number of breakpoints after augmentation.
    pub m_hat: usize,
    /// `M = u²v` with `uv ≥ 8`: breakpoints are used as given.
    pub special_case: bool,
}

/// Chooses `(û, v̂)`. When `M = u²v` and `uv ≥ 8` these are `(u, v)`; otherwise
/// the minimizer of `e + f` over `e ≤ u`, `8 ≤ f ≤ 8v`, `e²f ≥ M`, with ties
/// broken toward smaller `e`, then smaller `f`.
pub fn plan_deep(m: usize, u: usize, v: usize) -> Result<DeepPlan, PwlError> {
    let capacity = (u as u64) * (u as u64) * (v as u64);
    if u == 0 || v == 0 || capacity < m as u64 {
        return Err(PwlError::Capacity { capacity, m });
    }
    if capacity == m as u64 && u * v >= 8 {
        return Ok(DeepPlan { u_hat: u, v_hat: v, m_hat: m, special_case: true });
    }
    let mut best: Option<(usize, usize, usize)> = None;
    for e in 1..=u {
        for f in 8..=8 * v {
            if e * e * f >= m {
                let key = (e + f, e, f);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
    }
    let (_, e, f) = best.expect("(u, 8v) is always feasible");
    Ok(DeepPlan { u_hat: e, v_hat: f, m_hat: e * e * f, special_case: false })
}

/// Refines `[x_{M-2}, x_{M-1}]` into `M̂ - M + 1` equal pieces; values follow `f`.
fn augment(f: &PiecewiseLinear, m_hat: usize) -> PiecewiseLinear {
    let x = f.breakpoints();
    let m = x.len();
    let step = (&x[m - 1] - &x[m - 2]) / int((m_hat - m + 1) as i64);
    let mut xs: Vec<Rational> = x[..m - 1].to_vec();
    for i in m - 1..m_hat {
        xs.push(&x[m - 2] + &step * int((i + 2 - m) as i64));
    }
    PiecewiseLinear::from_fn(xs, |t| f.eval(t)).expect("refinement keeps breakpoints valid")
}

/// The three functions `f^1, f^2, f^3` for index `(k, ℓ)`, each expanded over the knots `z`,
/// with `γ_{kt+ℓ} = ρ∘f^1 - ρ∘f^2 + ρ∘f^3`.
#[derive(Debug, Clone)]
pub struct PartTriple {
    pub k: usize,
    pub l: usize,
    /// `(y^1, y^2, y^3)` for interior indices `ℓ ∈ 3..=t-4`, `None` for hat indices.
    pub y: Option<[Rational; 3]>,
    pub parts: [ReluExpansion; 3],
}

fn knot_offsets(t: usize) -> [usize; 8] {
    [0, 1, 2, 3, t - 4, t - 3, t - 2, t - 1]
}

/// The knots `z` and the triples `f^j_{k,ℓ}` for `M = ut` breakpoints, `t ≥ 8`.
pub fn two_layer_parts(x: &[Rational], u: usize, t: usize) -> (Vec<Rational>, Vec<PartTriple>) {
    assert!(t >= 8 && x.len() == u * t, "two_layer_parts needs t ≥ 8 and M = ut");
    let m = x.len();
    let z: Vec<Rational> = (0..u)
        .flat_map(|k| knot_offsets(t).into_iter().map(move |l| k * t + l))
        .map(|i| x[i].clone())
        .collect();
    let expand = |px: &[Rational], py: &[Rational]| {
        let vals: Vec<Rational> = z.iter().map(|zi| interpolate(px, py, zi)).collect();
        ReluExpansion::from_values(&z, &vals)
    };
    let zero = ReluExpansion::from_values(&z, &vec![Rational::zero(); z.len()]);
    let (o, l1) = (Rational::zero(), Rational::one());
    let mut out = Vec::with_capacity(m);
    for k in 0..u {
        for l in 0..t {
            let i = k * t + l;
            let triple = if l <= 2 || l >= t - 3 {
                let hat = if i == 0 {
                    expand(&[x[0].clone(), x[1].clone()], &[l1.clone(), o.clone()])
                } else if i == m - 1 {
                    expand(&[x[m - 2].clone(), x[m - 1].clone()], &[o.clone(), l1.clone()])
                } else {
                    expand(&x[i - 1..=i + 1], &[o.clone(), l1.clone(), o.clone()])
                };
                PartTriple { k, l, y: None, parts: [hat, zero.clone(), zero.clone()] }
            } else {
                let base = k * t;
                let xa = &x[base];
                let xb = &x[base + 1];
                let xc = &x[base + t - 2];
                let xd = &x[base + t - 1];
                let (xm, x0, xp) = (&x[i - 1], &x[i], &x[i + 1]);
                let y1 = (xc - xm) / (x0 - xm);
                let y2 = ((xp - xm) / (x0 - xm)) * ((xc - x0) / (xp - x0));
                let y3 = &y2 - &y1;
                let ys = [y1, y2, y3];
                let parts: Vec<ReluExpansion> = (0..3)
                    .map(|j| {
                        let p = &x[i + j - 1];
                        let at_b = &ys[j] * (xb - p) / (xc - p);
                        expand(
                            &[xa.clone(), xb.clone(), xc.clone(), xd.clone()],
                            &[o.clone(), at_b, ys[j].clone(), o.clone()],
                        )
                    })
                    .collect();
                let parts: [ReluExpansion; 3] = parts.try_into().expect("three parts");
                PartTriple { k, l, y: Some(ys), parts }
            };
            out.push(triple);
        }
    }
    (z, out)
}

/// Deep block network for `H = Σ_{ℓ < us} ρ(h_ℓ)` with `h_ℓ(x) = d_ℓ + Σ_i c_{ℓ,i} ρ(x - z_i)`.
///
/// The first layer forms `x - z_i`; each of the following `s` layers carries
/// `ρ(x - z)` forward, evaluates one group of `u` functions `h_ℓ`, and adds the
/// previous group's ReLU outputs into an accumulator neuron. Width `r + u + 1`,
/// depth `s + 2`.
pub fn block_sum_network(
    z: &[Rational],
    h: &[(Rational, Vec<Rational>)],
    u: usize,
    s: usize,
) -> NetworkConfig {
    let r = z.len();
    assert_eq!(h.len(), u * s, "need u·s functions");
    let one = Rational::one();
    let ones_col = Matrix::column(vec![one.clone(); r]);
    let group = |j: usize| {
        let rows: Vec<Vec<Rational>> = (0..u).map(|i| h[j * u + i].1.clone()).collect();
        let v: Vec<Rational> = (0..u).map(|i| h[j * u + i].0.clone()).collect();
        (Matrix::from_dense(rows, r), v)
    };
    let bias = |v: Vec<Rational>| {
        let mut b = vec![Rational::zero(); r];
        b.extend(v);
        b.push(Rational::zero());
        b
    };
    let mut layers = vec![Layer::new(ones_col, z.iter().map(|v| -v).collect())];
    let ir = Matrix::identity(r);
    let (u0, v0) = group(0);
    let a2 = Matrix::blocks(&[vec![Some(&ir)], vec![Some(&u0)], vec![None]], &[r, u, 1], &[r]);
    layers.push(Layer::new(a2, bias(v0)));
    let ones_u = Matrix::row(vec![one.clone(); u]);
    let one11 = Matrix::row(vec![one.clone()]);
    for k in 3..=s + 1 {
        let (uk, vk) = group(k - 2);
        let a = Matrix::blocks(
            &[
                vec![Some(&ir), None, None],
                vec![Some(&uk), None, None],
                vec![None, Some(&ones_u), Some(&one11)],
            ],
            &[r, u, 1],
            &[r, u, 1],
        );
        layers.push(Layer::new(a, bias(vk)));
    }
    let last = Matrix::blocks(&[vec![None, Some(&ones_u), Some(&one11)]], &[1], &[r, u, 1]);
    layers.push(Layer::linear(last));
    NetworkConfig::new(1, layers).expect("block layers chain")
}

fn combine(parts: &[(&Rational, &ReluExpansion)], r: usize) -> (Rational, Vec<Rational>) {
    let mut d = Rational::zero();
    let mut c = vec![Rational::zero(); r];
    for (w, e) in parts {
        if w.is_zero() {
            continue;
        }
        d += *w * &e.b;
        for (ci, ai) in c.iter_mut().zip(&e.a) {
            *ci += *w * ai;
        }
    }
    (d, c)
}

/// Special case `M = u²v`, `uv ≥ 8`: `g = H⁺ - H⁻`.
fn realize_special(f: &PiecewiseLinear, u: usize, v: usize) -> NetworkConfig {
    let t = u * v;
    let (z, triples) = two_layer_parts(f.breakpoints(), u, t);
    let r = z.len();
    let y = f.values();
    let yp: Vec<Rational> = y.iter().map(relu).collect();
    let ym: Vec<Rational> = y.iter().map(|v| relu(&-v)).collect();
    let mut hp = vec![(Rational::zero(), Vec::new()); 3 * t];
    let mut hm = hp.clone();
    for l in 0..t {
        for j in 0..3 {
            // f^1 and f^3 carry y⁺ into H⁺; f^2 carries y⁻ into H⁺.
            let (plus, minus) = if j == 1 { (&ym, &yp) } else { (&yp, &ym) };
            let pick = |w: &[Rational]| {
                let terms: Vec<(&Rational, &ReluExpansion)> =
                    (0..u).map(|k| (&w[k * t + l], &triples[k * t + l].parts[j])).collect();
                combine(&terms, r)
            };
            hp[j * t + l] = pick(plus);
            hm[j * t + l] = pick(minus);
        }
    }
    let h_plus = block_sum_network(&z, &hp, u, 3 * v);
    let h_minus = block_sum_network(&z, &hm, u, 3 * v);
    add(&h_plus, &scalar_mul(&-Rational::one(), &h_minus)).expect("scalar networks add")
}

/// Realization in `R(20u, 30v, max{1, C M̂⁶ R_m R_c³ E})`; requires `u²v ≥ M`.
pub fn realize_deep(f: &PiecewiseLinear, u: usize, v: usize) -> Result<NetworkConfig, PwlError> {
    let plan = plan_deep(f.len(), u, v)?;
    if plan.special_case {
        Ok(realize_special(f, u, v))
    } else {
        Ok(realize_special(&augment(f, plan.m_hat), plan.u_hat, plan.v_hat))
    }
}

/// `max{1, 12·4⁶·M̂⁶·R_m(X)·R_c(X)³·E}`, the weight bound of [`realize_deep`].
pub fn deep_magnitude_bound(f: &PiecewiseLinear, u: usize, v: usize) -> Result<Rational, PwlError> {
    let plan = plan_deep(f.len(), u, v)?;
    let stats = mesh_stats(f.breakpoints())?;
    let ck = int(12 * 4096);
    let bound = ck * pow(&int(plan.m_hat as i64), 6) * &stats.r_m * pow(&stats.r_c, 3) * f.sup_norm();
    Ok(bound.max(Rational::one()))
}

/// Realization in `R(20u, 30v, 2w)` under `w ≥ 1` and `w^{30v} ≥ M⁶ R_m⁴ E`.
///
/// Realizes `f / (2w)^{30v}` with weights at most one, pads to depth exactly
/// `30v`, then multiplies every layer by `2w`.
pub fn realize_deep_scaled(
    f: &PiecewiseLinear,
    u: usize,
    v: usize,
    w: &Rational,
) -> Result<NetworkConfig, PwlError> {
    plan_deep(f.len(), u, v)?;
    if *w < Rational::one() {
        return Err(PwlError::Argument("w must be at least 1".into()));
    }
    let stats = mesh_stats(f.breakpoints())?;
    let depth = 30 * v;
    let need = pow(&int(f.len() as i64), 6) * pow(&stats.r_m, 4) * f.sup_norm();
    if pow(w, depth as u32) < need {
        return Err(PwlError::WeightCondition);
    }
    let two_w = int(2) * w;
    let g = realize_deep(&f.scale(&pow(&two_w, depth as u32).recip()), u, v)?;
    if g.weight_magnitude() > Rational::one() {
        return Err(PwlError::Argument("normalized realization exceeds unit magnitude".into()));
    }
    let padded = extend_depth(&g, depth).map_err(|e: NetError| PwlError::Argument(e.to_string()))?;
    let scaled = homogeneous_scale(&padded, &two_w).map_err(|e| PwlError::Argument(e.to_string()))?;
    if scaled.weight_magnitude() > two_w {
        return Err(PwlError::Argument("scaled biases exceed 2w".into()));
    }
    Ok(scaled)
}
