use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use qnf_core::rational::{frac, int, pow2};
use qnf_core::{sample, DyadicSet, Layer, Matrix, NetworkConfig, Rational};
use qnf_quant::{
    check_output_lattice, default_lattice_probes, lattice_certificate, network_distance_bound,
    network_distance_on, quantization_error_bound, quantize_to_dyadic, random_unit_net,
    round_toward_zero, unit_grid, weight_distance, QuantError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `trunc(2^b w) / 2^b`, rounding toward zero by truncation.
fn oracle_q(w: &Rational, b: u32) -> Rational {
    (w * pow2(b as i64)).trunc() / pow2(b as i64)
}

fn scalar_net(layers: Vec<(Vec<Vec<Rational>>, Vec<Rational>)>) -> NetworkConfig {
    let d = layers[0].0[0].len();
    let ls = layers
        .into_iter()
        .map(|(a, b)| {
            let cols = a[0].len();
            Layer::new(Matrix::from_dense(a, cols), b)
        })
        .collect();
    NetworkConfig::new(d, ls).unwrap()
}

#[test]
fn rounding_examples() {
    assert_eq!(round_toward_zero(&Rational::zero(), 3), Rational::zero());
    assert_eq!(round_toward_zero(&frac(3, 8), 3), frac(3, 8));
    assert_eq!(round_toward_zero(&frac(3, 10), 1), Rational::zero());
    assert_eq!(round_toward_zero(&frac(-3, 10), 1), Rational::zero());
    assert_eq!(round_toward_zero(&frac(-7, 10), 1), frac(-1, 2));
    assert_eq!(round_toward_zero(&int(-1), 1), int(-1));
}

#[test]
fn quantize_rejects_large_weights() {
    let net = scalar_net(vec![(vec![vec![frac(3, 2)]], vec![int(-2)])]);
    match quantize_to_dyadic(&net, &DyadicSet::new(1, 4)) {
        Err(QuantError::Domain(ps)) => {
            assert_eq!(ps.len(), 2);
            assert_eq!(ps[0].value, frac(3, 2));
            assert_eq!(ps[1].col, None);
        }
        other => panic!("expected domain error, got {other:?}"),
    }
}

#[test]
fn quantization_error_bound_examples() {
    assert_eq!(quantization_error_bound(1, 1, 1), Rational::one());
    assert_eq!(quantization_error_bound(4, 3, 20), frac(375, 1 << 20));
}

#[test]
fn quantization_is_independent_of_a() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let net = random_unit_net(&mut rng, 1, 4, 3, 30);
    let q1 = quantize_to_dyadic(&net, &DyadicSet::new(1, 8)).unwrap();
    let q5 = quantize_to_dyadic(&net, &DyadicSet::new(5, 8)).unwrap();
    assert_eq!(q1, q5);
    assert!(q1.weights_in(&DyadicSet::new(1, 8)));
}

#[test]
fn quantized_nets_meet_the_error_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for b in [4, 8, 20] {
        for _ in 0..20 {
            let net = random_unit_net(&mut rng, 1, 4, 3, 40);
            let q = quantize_to_dyadic(&net, &DyadicSet::new(1, b)).unwrap();
            let r = network_distance_bound(&net, &q, &Rational::one()).unwrap();
            assert!(r.weight_distance <= pow2(-(b as i64)));
            assert!(r.realized <= quantization_error_bound(4, 3, b));
            assert!(r.holds());
        }
    }
}

#[test]
fn distance_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let net = random_unit_net(&mut rng, 1, 4, 3, 12);
    let r = network_distance_bound(&net, &net, &Rational::one()).unwrap();
    assert_eq!((r.bound, r.realized), (Rational::zero(), Rational::zero()));

    let mut layers = net.layers().to_vec();
    let w = layers[0].a.get(0, 0);
    let delta = if w > Rational::zero() { -pow2(-10) } else { pow2(-10) };
    layers[0].a.set(0, 0, w + &delta);
    let moved = NetworkConfig::new(1, layers).unwrap();
    let r = network_distance_bound(&net, &moved, &Rational::one()).unwrap();
    assert_eq!(r.weight_distance, pow2(-10));
    let l = net.depth() as i64;
    let wid = net.width().max(1) as i64;
    let expect = int(l) * int(wid + 1).pow(l as i32) * pow2(-10);
    assert_eq!(r.bound, expect);
    assert!(r.holds());

    let other = random_unit_net(&mut rng, 2, 4, 3, 12);
    assert!(matches!(weight_distance(&net, &other), Err(QuantError::Architecture(_))));
}

#[test]
fn distance_bound_with_larger_magnitude() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let dims = sample::dims(&mut rng, 2, 1, 3, 4);
        let n1 = sample::config(&mut rng, &dims, |r| sample::dyadic_in(r, 3, 6));
        let n2 = n1.map_weights(|w| {
            let nudged = w + frac(1, 64);
            if nudged.abs() <= int(3) { nudged } else { w.clone() }
        });
        let b = int(3);
        let r = network_distance_on(&n1, &n2, &b, &unit_grid(2, 200)).unwrap();
        assert!(r.holds(), "{} > {}", r.realized, r.bound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = random_unit_net(&mut rng, 1, 3, 2, 4);
    assert!(network_distance_bound(&n, &n, &frac(1, 2)).is_err());
}

#[test]
fn lattice_examples() {
    let q = DyadicSet::new(1, 4);
    let net = scalar_net(vec![
        (vec![vec![frac(3, 16)], vec![frac(-5, 16)]], vec![frac(1, 16), frac(7, 16)]),
        (vec![vec![frac(9, 16), frac(-1, 16)]], vec![frac(3, 16)]),
    ]);
    let cert = check_output_lattice(&net, &q, 2, &[vec![frac(3, 4)]]).unwrap();
    assert_eq!(cert.exponent, 10);
    let y = net.eval_scalar(&frac(3, 4)).unwrap();
    assert_eq!(cert.rows[0].multiples[0], &y * int(1024));
    assert!(cert.rows[0].ok());

    let ints: Vec<Vec<Rational>> = (-3..=3).map(|i| vec![int(i)]).collect();
    let cert = check_output_lattice(&net, &q, 0, &ints).unwrap();
    assert_eq!(cert.exponent, 8);
    assert!(cert.holds());

    let third = scalar_net(vec![(vec![vec![frac(1, 3)]], vec![int(0)])]);
    assert!(matches!(check_output_lattice(&third, &q, 0, &ints), Err(QuantError::NotDyadic(_))));
    assert!(matches!(
        check_output_lattice(&net, &q, 2, &[vec![frac(1, 8)]]),
        Err(QuantError::ProbeOffLattice { index: 0, c: 2 })
    ));
}

#[test]
fn lattice_exponent_is_tight_for_some_probe() {
    // A single weight 1/16 per layer attains the finest lattice level.
    let q = DyadicSet::new(1, 4);
    let net = scalar_net(vec![(vec![vec![frac(1, 16)]], vec![int(0)]), (vec![vec![frac(1, 16)]], vec![int(0)])]);
    let cert = lattice_certificate(&net, &q, 2, &[vec![frac(1, 4)]]).unwrap();
    assert_eq!(cert.rows[0].multiples[0], Rational::one());
}

#[test]
fn default_probes_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = default_lattice_probes(&mut rng, 1, 3);
    assert_eq!(p.len(), 9);
    assert_eq!(p[8], vec![int(1)]);
    let p = default_lattice_probes(&mut rng, 1, 12);
    assert_eq!(p.len(), 256);
    assert!(p.iter().all(|x| x[0] >= Rational::zero() && x[0] <= Rational::one()));
    let p = default_lattice_probes(&mut rng, 3, 5);
    assert_eq!(p.len(), 256);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rounding_properties(num in -(1i64 << 40)..=(1i64 << 40), b in 0u32..24) {
        let w = frac(num, 1 << 40);
        let q = round_toward_zero(&w, b);
        prop_assert_eq!(&q, &oracle_q(&w, b));
        prop_assert_eq!(round_toward_zero(&q, b), q.clone());
        prop_assert!(q.abs() <= w.abs());
        prop_assert!(q.is_zero() || q.signum() == w.signum());
        prop_assert!((&w - &q).abs() < pow2(-(b as i64)));
        prop_assert!(DyadicSet::new(1, b).contains(&q));
    }

    #[test]
    fn quantize_is_idempotent_and_entrywise(seed in any::<u64>(), b in 1u32..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_unit_net(&mut rng, 2, 4, 3, 20);
        let set = DyadicSet::new(1, b);
        let q = quantize_to_dyadic(&net, &set).unwrap();
        prop_assert_eq!(quantize_to_dyadic(&q, &set).unwrap(), q.clone());
        prop_assert!(q.weights_in(&set));
        for (l1, l2) in net.layers().iter().zip(q.layers()) {
            for i in 0..l1.a.rows() {
                for j in 0..l1.a.cols() {
                    prop_assert_eq!(l2.a.get(i, j), oracle_q(&l1.a.get(i, j), b));
                }
            }
        }
    }

    #[test]
    fn lattice_membership_holds(seed in any::<u64>(), b in 1u32..8, c in 0u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = rng.gen_range(1..=4);
        let net = quantize_to_dyadic(&random_unit_net(&mut rng, 1, 5, depth, 16), &DyadicSet::new(1, b)).unwrap();
        let probes = default_lattice_probes(&mut rng, 1, c);
        let cert = check_output_lattice(&net, &DyadicSet::new(1, b), c, &probes).unwrap();
        prop_assert!(cert.holds());
    }

    #[test]
    fn realized_difference_never_exceeds_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n1 = random_unit_net(&mut rng, 1, 4, 3, 10);
        let n2 = n1.map_weights(|w| {
            let step = frac(rng_step(w), 1 << 10);
            let v = w + step;
            if v.abs() <= Rational::one() { v } else { w.clone() }
        });
        let r = network_distance_bound(&n1, &n2, &Rational::one()).unwrap();
        prop_assert!(r.holds());
    }
}

fn rng_step(w: &Rational) -> i64 {
    if w.numer().bit(0) { 1 } else { -1 }
}
