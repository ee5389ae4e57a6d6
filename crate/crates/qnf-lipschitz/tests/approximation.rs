use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use qnf_bitx::ternary_value;
use qnf_core::rational::{frac, int};
use qnf_core::{NetworkConfig, Rational};
use qnf_lipschitz::*;
use qnf_pwl::realize_deep_scaled;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(m: usize, n: usize, l: usize) -> ApproxParams {
    ApproxParams::new(m, n, l).unwrap()
}

fn samples(g: LipschitzFn, p: &ApproxParams) -> LipschitzSamples {
    LipschitzSamples::from_fn(p.grid(), |x| g.eval(x)).unwrap()
}

fn grid_points(p: &ApproxParams) -> Vec<Rational> {
    (0..p.grid()).map(|i| frac(i as i64, p.grid() as i64)).collect()
}

fn sup_error(config: &NetworkConfig, xs: &[Rational], g: impl Fn(&Rational) -> Rational) -> Rational {
    let ys = config.compile().eval_scalar_many(xs).unwrap();
    xs.iter().zip(ys).map(|(x, y)| (y - g(x)).abs()).max().unwrap()
}

fn sorted_middle(x: &[Rational; 3]) -> Rational {
    let mut v = x.to_vec();
    v.sort();
    v[1].clone()
}

#[test]
fn budget_parameters() {
    // ⌊log₂(2W/5)⌋ through floating point, an independent route for these small W.
    let oracle = |w: u64, l: u64| ((w / 1000) as usize, (2.0 * w as f64 / 5.0).log2().floor() as usize - 7, (l / 101) as usize);
    for (w, l) in [(2000, 2000), (4000, 2020), (9999, 5000), (20480, 2000)] {
        let p = params_from_budget(w, l).unwrap();
        assert_eq!((p.m, p.n, p.l), oracle(w, l), "W={w} L={l}");
    }
    assert_eq!(params_from_budget(2000, 2000).unwrap(), params(2, 2, 19));
    assert_eq!(params_from_budget(4000, 2020).unwrap(), params(4, 3, 20));
    assert!(matches!(params_from_budget(1999, 2000), Err(LipschitzError::Capacity(_))));
    assert!(matches!(params_from_budget(2000, 1999), Err(LipschitzError::Capacity(_))));
}

#[test]
fn small_parameter_mode() {
    let p = params(2, 2, 2);
    assert_eq!(p.grid(), 32);
    assert_eq!(p.delta(), frac(1, 320));
    assert_eq!(p.magnitude_bound(), int(81));
    assert!(ApproxParams::new(1, 2, 2).is_err());
    assert!(ApproxParams::new(2, 1, 2).is_err());
    assert!(ApproxParams::new(2, 2, 1).is_err());
}

#[test]
fn sample_validation() {
    let ok = LipschitzSamples::new(vec![int(0), frac(1, 4), int(0), frac(-1, 4)]).unwrap();
    assert_eq!(LipschitzSamples::from_json(ok.to_json().as_bytes()).unwrap(), ok);
    let steep = LipschitzSamples::new(vec![int(0), frac(1, 4), frac(3, 4), int(0)]);
    assert_eq!(steep, Err(LipschitzError::NotLipschitz { index: 1 }));
    assert_eq!(LipschitzSamples::new(vec![int(2)]), Err(LipschitzError::SampleRange { index: 0 }));
    assert!(LipschitzSamples::from_json(b"{\"values\": [\"1/2\", \"x\"]}").is_err());
    let p = params(2, 2, 2);
    let short = LipschitzSamples::new(vec![Rational::zero(); 31]).unwrap();
    assert_eq!(build_step1(&short, &p).unwrap_err(), LipschitzError::SampleCount { expected: 32, got: 31 });
    for g in LipschitzFn::ALL {
        assert!(LipschitzSamples::from_fn(1 << 10, |x| g.eval(x)).is_ok(), "{g}");
        assert_eq!(g.to_string().parse::<LipschitzFn>().unwrap(), g);
    }
}

#[test]
fn median_exhaustive_and_random() {
    let net = build_median();
    let metrics = net.metrics();
    assert!(metrics.width <= 16);
    assert_eq!(metrics.depth, 3);
    assert_eq!(metrics.weight_magnitude, Rational::one());
    let c = net.compile();
    let levels = [int(-1), frac(-1, 2), int(0), frac(1, 2), int(1)];
    let mut triples = Vec::new();
    for a in &levels {
        for b in &levels {
            for d in &levels {
                triples.push([a.clone(), b.clone(), d.clone()]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        triples.push(std::array::from_fn(|_| frac(rng.gen_range(-1000..=1000), rng.gen_range(1..=97))));
    }
    for t in &triples {
        assert_eq!(c.eval(t).unwrap(), vec![sorted_middle(t)], "{t:?}");
    }
    assert_eq!(c.eval(&[int(1), int(-1), int(0)]).unwrap(), vec![int(0)]);
}

fn check_parts(s: &LipschitzSamples, p: &ApproxParams) {
    let parts = step1_parts(s, p).unwrap();
    let per = p.per_cell();
    let g = s.values();
    for j in 0..p.cells() {
        assert_eq!(parts.t[j][0], 0);
        let (plus, minus) = (parts.theta_plus[j].digits(), parts.theta_minus[j].digits());
        assert_eq!(plus.len(), per - 1);
        let mut acc = 0i64;
        for k in 1..per {
            assert!(plus[k - 1] * minus[k - 1] == 0);
            acc += plus[k - 1] as i64 - minus[k - 1] as i64;
            assert_eq!(acc, parts.t[j][k]);
        }
        assert_eq!(parts.b_plus.values()[2 * j], ternary_value(plus));
        for k in 0..per {
            let i = j * per + k;
            let x = frac(i as i64, p.grid() as i64);
            assert_eq!(parts.s.eval(&x), int(k as i64));
            assert_eq!(parts.h.eval(&x), g[j * per]);
            let fit = parts.h.eval(&x) + int(parts.t[j][k]) * p.step();
            assert!(fit <= g[i] && g[i] < &fit + p.step());
        }
    }
}

#[test]
fn theta_well_formed() {
    for p in [params(2, 2, 2), params(2, 2, 3), params(3, 2, 2)] {
        for g in LipschitzFn::ALL {
            check_parts(&samples(g, &p), &p);
        }
    }
}

#[test]
fn cell_functions_meet_embedding_bounds() {
    let p = params(2, 2, 2);
    let parts = step1_parts(&samples(LipschitzFn::Vee, &p), &p).unwrap();
    for f in [&parts.h, &parts.b_plus, &parts.b_minus, &parts.s] {
        let net = realize_deep_scaled(f, 2 * p.m, p.l, &p.carrier_weight()).unwrap();
        assert!(net.width() <= 40 * p.m);
        assert!(net.depth() <= 30 * p.l);
        assert!(net.weight_magnitude() <= int(8 * (p.m * p.n) as i64));
        let c = net.compile();
        for x in f.breakpoints() {
            assert_eq!(c.eval_scalar(x).unwrap(), f.eval(x));
        }
    }
}

#[test]
fn step1_examples() {
    let p = params(2, 2, 2);
    let zero = build_step1(&samples(LipschitzFn::Zero, &p), &p).unwrap();
    let c = zero.config.compile();
    for x in grid_points(&p) {
        assert_eq!(c.eval_scalar(&x).unwrap(), Rational::zero());
    }
    let id = build_step1(&samples(LipschitzFn::Identity, &p), &p).unwrap();
    assert!(sup_error(&id.config, &grid_points(&p), |x| x.clone()) <= frac(1, 32));
    assert!(id.within_bounds());
    assert_eq!((id.claimed_width, id.claimed_depth, id.claimed_magnitude.clone()), (528, 74, int(81)));
}

#[test]
fn step2_u_snaps_plateaus() {
    let p = params(2, 2, 2);
    let u = step2_u(&p).unwrap();
    assert!(u.width() <= 40 * p.m.max(p.n) + 2);
    assert!(u.depth() <= 61 * p.l);
    let c = u.compile();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let i = rng.gen_range(0..p.grid() as i64);
        let x = frac(i, p.grid() as i64) + p.delta() / int(2);
        assert_eq!(c.eval_scalar(&x).unwrap(), frac(i, p.grid() as i64));
    }
    for x in plateau_points(&p, 3) {
        let i = (&x * int(p.grid() as i64)).floor();
        assert_eq!(c.eval_scalar(&x).unwrap(), i / int(p.grid() as i64));
    }
    for x in [int(-1), frac(-1, 3), int(0)] {
        assert_eq!(c.eval_scalar(&x).unwrap(), x);
    }
}

#[test]
fn stage_chain_on_test_functions() {
    let p = params(2, 2, 2);
    let g_tol = [p.step(), int(2) * p.step(), int(3) * p.step()];
    for g in LipschitzFn::ALL {
        let [f1, f2, f] = build_all(&samples(g, &p), &p).unwrap();
        for r in [&f1, &f2, &f] {
            assert!(r.within_bounds(), "{g} {}", r.stage);
        }
        assert!(sup_error(&f1.config, &grid_points(&p), |x| g.eval(x)) <= g_tol[0], "{g} f1");
        assert!(sup_error(&f2.config, &plateau_points(&p, 5), |x| g.eval(x)) <= g_tol[1], "{g} f2");
        let tab = Tabulation::from_fn(10 * p.grid(), |x| g.eval(x));
        let report = approx_error_report(&f.config, &tab, 10 * p.grid()).unwrap();
        assert!(report.max_error <= g_tol[2], "{g} f: {}", report.max_error);
        if g == LipschitzFn::Zero {
            assert!(report.rows.iter().all(|r| r.fx.is_zero()));
        }
    }
}

#[test]
fn step3_zero_at_500_points() {
    let p = params(2, 2, 2);
    let [_, _, f] = build_all(&samples(LipschitzFn::Zero, &p), &p).unwrap();
    let xs: Vec<Rational> = (0..500).map(|i| frac(i, 499)).collect();
    assert!(f.config.compile().eval_scalar_many(&xs).unwrap().iter().all(Zero::is_zero));
}

#[test]
fn stage_order_is_enforced() {
    let p = params(2, 2, 2);
    let f1 = build_step1(&samples(LipschitzFn::Zero, &p), &p).unwrap();
    assert!(build_step3(&f1, &p).is_err());
    let f2 = build_step2(&f1, &p).unwrap();
    assert!(build_step2(&f2, &p).is_err());
}

#[test]
fn error_report_plumbing() {
    let id = NetworkConfig::identity(1);
    let tab = Tabulation::from_fn(60, |x| x.clone());
    let exact = approx_error_report(&id, &tab, 60).unwrap();
    assert_eq!(exact.max_error, Rational::zero());
    assert_eq!(exact.rows.len(), 61);
    let vee = Tabulation::from_fn(60, |x| LipschitzFn::Vee.eval(x));
    let fine = approx_error_report(&id, &vee, 60).unwrap();
    for r in [1, 2, 3, 5, 12, 30] {
        assert!(approx_error_report(&id, &vee, r).unwrap().max_error <= fine.max_error);
    }
    // x − (|x − 1/2| − 1/4) is 3/4 on all of [1/2, 1]; the first maximizer is reported.
    assert_eq!((fine.max_error, fine.argmax), (frac(3, 4), frac(1, 2)));
    assert!(matches!(approx_error_report(&id, &tab, 7), Err(LipschitzError::Reference(_))));
    assert!(matches!(approx_error_report(&id, &tab, 0), Err(LipschitzError::Reference(_))));
}

fn walk() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(-2i8..=2, 72)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step1_fit_on_random_walks(steps in walk(), start in -8i64..=8) {
        // Increments of ±1/G, ±1/(2G) or 0 keep the walk 1-Lipschitz.
        let p = params(2, 2, 3);
        let g = p.grid() as i64;
        let mut v = frac(start, 16);
        let values: Vec<Rational> = steps
            .iter()
            .map(|&s| {
                let out = v.clone();
                v += frac(s as i64, 2 * g);
                out
            })
            .collect();
        let s = LipschitzSamples::new(values).unwrap();
        check_parts(&s, &p);
    }
}
