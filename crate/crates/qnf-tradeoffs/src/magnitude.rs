use num_traits::{One, Zero};
use qnf_algebra::{homogeneous_scale, scalar_mul};
use qnf_core::rational::{int, pow};
use qnf_core::{Layer, Matrix, NetworkConfig, Rational};

use crate::TradeoffError;

/// `K = B'^{L+L'} ⌊W/2⌋^{L'} / B^L`.
pub fn depth_weight_factor(width: usize, depth: usize, extra: usize, b: &Rational, b_target: &Rational) -> Rational {
    pow(b_target, (depth + extra) as u32) * pow(&int((width / 2) as i64), extra as u32) / pow(b, depth as u32)
}

fn ones(r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| Rational::one())
}

/// Replaces the last layer of a scalar-output net by the `⌊W/2⌋^{L'}` amplifier:
/// `[1_k; -1_k] A_L`, then `L'-1` layers `diag(1_{k×k}, 1_{k×k})`, then `[1_{1×k}, -1_{1×k}]`.
pub fn amplification_block(config: &NetworkConfig, width: usize, extra: usize) -> Result<NetworkConfig, TradeoffError> {
    if extra == 0 {
        return Ok(config.clone());
    }
    if config.output_dim() != 1 {
        return Err(TradeoffError::Argument("amplification needs a scalar output".into()));
    }
    let k = width / 2;
    if k == 0 {
        return Err(TradeoffError::Argument("width must be at least 2".into()));
    }
    let mut layers = config.layers().to_vec();
    let last = layers.pop().expect("validated config has layers");
    let pm = ones(k, 1).vstack(&ones(k, 1).neg());
    let mut b = vec![last.b[0].clone(); k];
    b.extend(vec![-last.b[0].clone(); k]);
    layers.push(Layer::new(pm.mul(&last.a), b));
    for _ in 1..extra {
        layers.push(Layer::linear(ones(k, k).block_diag(&ones(k, k))));
    }
    layers.push(Layer::linear(ones(1, k).hstack(&ones(1, k).neg())));
    Ok(NetworkConfig::new(config.input_dim(), layers).expect("amplifier chains"))
}

/// Equivalent net of depth `L + L'` and weight magnitude at most `B'`.
///
/// Layers `1..L` are scaled by `B'/B`, the amplifier by `B'`, and the output
/// by `1/K`. When `B' > B` and the geometric bias scaling would exceed `B'`,
/// the first `L` layers are left unscaled and `K` is recomputed for that split.
pub fn depth_weight_transform(
    config: &NetworkConfig,
    extra: usize,
    b: &Rational,
    b_target: &Rational,
) -> Result<NetworkConfig, TradeoffError> {
    if *b < Rational::one() || *b_target < Rational::one() {
        return Err(TradeoffError::Argument("B and B' must be at least 1".into()));
    }
    if config.weight_magnitude() > *b {
        return Err(TradeoffError::Argument(format!("weight magnitude {} exceeds B = {b}", config.weight_magnitude())));
    }
    let (w, l) = (config.width(), config.depth());
    if extra > 0 && w < 2 {
        return Err(TradeoffError::Argument("W must be at least 2".into()));
    }
    let k = depth_weight_factor(w, l, extra, b, b_target);
    if k < Rational::one() {
        return Err(TradeoffError::Infeasible(k.to_string()));
    }
    let build = |ratio: &Rational| -> Result<(NetworkConfig, Rational), TradeoffError> {
        let scaled = homogeneous_scale(config, ratio).map_err(|e| TradeoffError::Argument(e.to_string()))?;
        let amp = amplification_block(&scaled, w, extra)?;
        let mut layers = amp.into_layers();
        for layer in layers.iter_mut().skip(l) {
            *layer = layer.scale(b_target);
        }
        let total = pow(ratio, l as u32) * pow(&(b_target * int((w / 2) as i64)), extra as u32);
        Ok((NetworkConfig::new(config.input_dim(), layers).expect("scaling keeps dimensions"), total))
    };
    let (net, total) = build(&(b_target / b))?;
    let (net, total) = if net.weight_magnitude() > *b_target { build(&Rational::one())? } else { (net, total) };
    if total.is_zero() || total < Rational::one() {
        return Err(TradeoffError::Infeasible(total.to_string()));
    }
    let out = scalar_mul(&total.recip(), &net);
    if out.weight_magnitude() > *b_target {
        return Err(TradeoffError::Argument(format!("result magnitude {} exceeds B' = {b_target}", out.weight_magnitude())));
    }
    Ok(out)
}
