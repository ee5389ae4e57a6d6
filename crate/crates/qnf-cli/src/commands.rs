use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use qnf_bitx::{build_extractor, extract, verify_exhaustive, TernaryCode};
use qnf_core::rational::{floor_int, fmt, frac, int, parse};
use qnf_core::{config_from_json, config_to_json, parse_json, sample, DyadicSet, JsonRational, NetworkConfig, Rational};
use qnf_lipschitz::{
    build_all, params_from_budget, ApproxParams, LipschitzError, LipschitzFn, LipschitzSamples, StageReport,
};
use qnf_quant::{default_lattice_probes, lattice_certificate, network_distance_bound, quantize_to_dyadic};
use qnf_regimes::{regime_sweep, RegimeConstants};
use qnf_tradeoffs::{certify_equivalence, depth_precision_transform, depth_weight_transform, EquivRow};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::args::*;
use crate::run::{csv_bytes, input, CliError, RunContext};

fn join(xs: &[Rational]) -> String {
    xs.iter().map(fmt).collect::<Vec<_>>().join(";")
}

fn load_net(ctx: &mut RunContext, path: &std::path::Path) -> Result<NetworkConfig, CliError> {
    let bytes = ctx.read_input(path)?;
    config_from_json(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn rng(ctx: &RunContext) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ctx.seed)
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    parse(s.trim()).map_err(CliError::Input)
}

fn equivalence_csv(rows: &[EquivRow]) -> Result<Vec<u8>, CliError> {
    csv_bytes(
        &["x", "before", "after", "equal"],
        rows.iter().map(|r| vec![join(&r.x), join(&r.before), join(&r.after), r.equal().to_string()]),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulationDoc {
    denominator: usize,
    values: Vec<JsonRational>,
}

fn lipschitz_input(e: LipschitzError) -> CliError {
    CliError::Input(e.to_string())
}

fn sup_check(
    ctx: &mut RunContext,
    name: &str,
    stage: &StageReport,
    points: &BTreeMap<Rational, Rational>,
    tol: &Rational,
) -> Result<Vec<Vec<String>>, CliError> {
    let xs: Vec<Rational> = points.keys().cloned().collect();
    let fx = stage.config.compile().eval_scalar_many(&xs).map_err(|e| CliError::Io(e.to_string()))?;
    let mut worst = (Rational::zero(), Rational::zero());
    let mut rows = Vec::with_capacity(xs.len());
    for (x, f) in xs.iter().zip(fx) {
        let g = &points[x];
        let err = (&f - g).abs();
        if err > worst.0 {
            worst = (err.clone(), x.clone());
        }
        rows.push(vec![fmt(x), fmt(&f), fmt(g), fmt(&err)]);
    }
    ctx.check(
        name,
        worst.0 <= *tol,
        format!("max |{} - g| = {} at x = {} over {} points, bound {}", stage.stage, fmt(&worst.0), fmt(&worst.1), xs.len(), fmt(tol)),
    );
    Ok(rows)
}

pub fn approx(ctx: &mut RunContext, args: &ApproxArgs) -> Result<(), CliError> {
    let p = match &args.budget {
        Some(v) => params_from_budget(v[0], v[1]).map_err(lipschitz_input)?,
        None => ApproxParams::new(args.m.unwrap_or(0), args.n.unwrap_or(0), args.l.unwrap_or(0)).map_err(lipschitz_input)?,
    };
    let grid = p.grid();
    let (samples, reference) = match (&args.function, &args.samples) {
        (Some(name), _) => {
            let g: LipschitzFn = name.parse().map_err(CliError::Input)?;
            let samples = LipschitzSamples::from_fn(grid, |x| g.eval(x)).map_err(lipschitz_input)?;
            let n = 10 * grid;
            let table = (0..=n).map(|i| g.eval(&frac(i as i64, n as i64))).collect();
            (samples, Some((n, table)))
        }
        (None, Some(path)) => {
            let samples = LipschitzSamples::from_json(&ctx.read_input(path)?).map_err(lipschitz_input)?;
            let reference = match &args.reference {
                Some(r) => {
                    let doc: TabulationDoc = parse_json(&ctx.read_input(r)?).map_err(input)?;
                    if doc.values.len() != doc.denominator + 1 || doc.denominator == 0 {
                        return Err(CliError::Input(format!(
                            "reference has {} values for denominator {}",
                            doc.values.len(),
                            doc.denominator
                        )));
                    }
                    Some((doc.denominator, doc.values.into_iter().map(|v| v.0).collect::<Vec<_>>()))
                }
                None => None,
            };
            (samples, reference)
        }
        (None, None) => return Err(CliError::Input("one of --samples or --function is required".into())),
    };
    if samples.len() != grid {
        return Err(CliError::Input(format!("expected {grid} samples for G = m²ℓ²n, got {}", samples.len())));
    }
    let mut known: BTreeMap<Rational, Rational> =
        samples.values().iter().enumerate().map(|(i, v)| (frac(i as i64, grid as i64), v.clone())).collect();
    if let Some((n, values)) = &reference {
        for (i, v) in values.iter().enumerate() {
            let x = frac(i as i64, *n as i64);
            if let Some(prev) = known.insert(x.clone(), v.clone()) {
                if prev != *v {
                    return Err(CliError::Input(format!("reference disagrees with samples at x = {}", fmt(&x))));
                }
            }
        }
    }
    let stages = match build_all(&samples, &p) {
        Ok(s) => s,
        Err(e @ (LipschitzError::Invariant(_) | LipschitzError::Construction(_))) => {
            ctx.check("construction", false, e.to_string());
            return Ok(());
        }
        Err(e) => return Err(lipschitz_input(e)),
    };
    ctx.messages.push(format!("(m, n, l) = ({}, {}, {}), G = {grid}", p.m, p.n, p.l));
    for s in &stages {
        let c = &s.config;
        ctx.check(
            &format!("{}-bounds", s.stage),
            s.within_bounds(),
            format!(
                "width {} <= {}, depth {} <= {}, magnitude {} <= {}",
                c.width(),
                s.claimed_width,
                c.depth(),
                s.claimed_depth,
                fmt(&c.weight_magnitude()),
                fmt(&s.claimed_magnitude)
            ),
        );
        ctx.stage(&format!("{}.json", s.stage), config_to_json(c));
    }
    let step = p.step();
    let on_grid: BTreeMap<Rational, Rational> =
        known.iter().filter(|(x, _)| *x < &int(1) && (*x * int(grid as i64)).is_integer()).map(|(x, v)| (x.clone(), v.clone())).collect();
    sup_check(ctx, "f1-grid", &stages[0], &on_grid, &step)?;
    let plateau_end = &step - p.delta();
    let on_plateaus: BTreeMap<Rational, Rational> = known
        .iter()
        .filter(|(x, _)| {
            let left = Rational::from_integer(floor_int(&(*x * int(grid as i64)))) / int(grid as i64);
            !x.is_negative() && *x < &int(1) && (*x - left) <= plateau_end
        })
        .map(|(x, v)| (x.clone(), v.clone()))
        .collect();
    sup_check(ctx, "f2-plateaus", &stages[1], &on_plateaus, &(int(2) * &step))?;
    let rows = sup_check(ctx, "f-sampled", &stages[2], &known, &(int(3) * &step))?;
    ctx.stage("approx_errors.csv", csv_bytes(&["x", "fx", "gx", "abs_err"], rows)?);
    Ok(())
}

pub fn precision(ctx: &mut RunContext, args: &PrecisionArgs) -> Result<(), CliError> {
    let net = load_net(ctx, &args.net)?;
    let out = depth_precision_transform(&net, args.a, args.b, args.k).map_err(input)?;
    let probes = sample::probe_grid(&mut rng(ctx), net.input_dim());
    let rows = certify_equivalence(&net, &out, &probes);
    let (w, l, k) = (net.width(), net.depth(), args.k as usize);
    ctx.check("equivalence", rows.iter().all(EquivRow::equal), format!("{} probes", rows.len()));
    ctx.check(
        "weights",
        out.weights_in(&DyadicSet::new(args.a, args.b)),
        format!("all weights in Q_{}^{}", args.b, args.a),
    );
    ctx.check("width", out.width() <= 16 * w, format!("{} <= 16·{w}", out.width()));
    ctx.check("depth", out.depth() <= (k + 2) * l, format!("{} <= ({k}+2)·{l}", out.depth()));
    ctx.stage("transformed.json", config_to_json(&out));
    ctx.stage("certificate.csv", equivalence_csv(&rows)?);
    Ok(())
}

pub fn magnitude(ctx: &mut RunContext, args: &MagnitudeArgs) -> Result<(), CliError> {
    let net = load_net(ctx, &args.net)?;
    let (b, target) = (parse_rational(&args.bound)?, parse_rational(&args.target)?);
    let out = depth_weight_transform(&net, args.extra, &b, &target).map_err(input)?;
    let probes = sample::probe_grid(&mut rng(ctx), net.input_dim());
    let rows = certify_equivalence(&net, &out, &probes);
    ctx.check("equivalence", rows.iter().all(EquivRow::equal), format!("{} probes", rows.len()));
    ctx.check(
        "magnitude",
        out.weight_magnitude() <= target,
        format!("{} <= {}", fmt(&out.weight_magnitude()), fmt(&target)),
    );
    ctx.check(
        "depth",
        out.depth() <= net.depth() + args.extra,
        format!("{} <= {} + {}", out.depth(), net.depth(), args.extra),
    );
    ctx.stage("transformed.json", config_to_json(&out));
    ctx.stage("certificate.csv", equivalence_csv(&rows)?);
    Ok(())
}

pub fn quantize(ctx: &mut RunContext, args: &QuantizeArgs) -> Result<(), CliError> {
    let net = load_net(ctx, &args.net)?;
    let set = DyadicSet::new(args.a, args.b);
    let q = quantize_to_dyadic(&net, &set).map_err(input)?;
    ctx.check("weights", q.weights_in(&set), format!("all weights in Q_{}^{}", args.b, args.a));
    if args.certify {
        let report = network_distance_bound(&net, &q, &Rational::one()).map_err(input)?;
        ctx.check(
            "distance",
            report.holds(),
            format!("sampled sup {} <= bound {}", fmt(&report.realized), fmt(&report.bound)),
        );
        let probes = default_lattice_probes(&mut rng(ctx), q.input_dim(), args.c);
        let cert = lattice_certificate(&q, &set, args.c, &probes).map_err(input)?;
        ctx.check("lattice", cert.holds(), format!("f(x)·2^{} integral on {} probes", cert.exponent, cert.rows.len()));
        ctx.stage(
            "lattice.csv",
            csv_bytes(
                &["x", "f_times_2pow", "ok"],
                cert.rows.iter().map(|r| vec![join(&r.x), join(&r.multiples), r.ok().to_string()]),
            )?,
        );
    }
    ctx.stage("quantized.json", config_to_json(&q));
    Ok(())
}

pub fn extract_cmd(ctx: &mut RunContext, args: &ExtractArgs) -> Result<(), CliError> {
    if args.n == 0 || args.l == 0 {
        return Err(CliError::Input("N and L must be at least 1".into()));
    }
    let net = build_extractor(args.n, args.l).map_err(input)?;
    let m = net.metrics();
    let (wb, db, bb) = (1usize << (args.n + 4), 5 * args.l, 3i64.pow(args.n as u32 + 2));
    ctx.check("width", m.width <= wb, format!("{} <= {wb}", m.width));
    ctx.check("depth", m.depth <= db, format!("{} <= {db}", m.depth));
    ctx.check("magnitude", m.weight_magnitude <= int(bb), format!("{} <= {bb}", fmt(&m.weight_magnitude)));
    let rows = if args.exhaustive {
        verify_exhaustive(args.n, args.l).map_err(input)?
    } else {
        let theta = TernaryCode::parse(args.theta.as_deref().unwrap_or_default()).map_err(input)?;
        let k = args.k.unwrap_or(0);
        let expected = theta.partial_sum(((args.n * args.l) as u64).min(k) as usize);
        let got = extract(args.n, args.l, &theta, &int(k as i64)).ok();
        vec![qnf_bitx::VerifyRow { theta, k, expected, got }]
    };
    ctx.check("extraction", rows.iter().all(|r| r.pass()), format!("{} rows", rows.len()));
    ctx.stage(
        "extract.csv",
        csv_bytes(
            &["theta", "k", "expected", "got", "pass"],
            rows.iter().map(|r| {
                vec![
                    r.theta.to_string(),
                    r.k.to_string(),
                    r.expected.to_string(),
                    r.got.map_or_else(|| "error".to_string(), |g| g.to_string()),
                    r.pass().to_string(),
                ]
            }),
        )?,
    );
    ctx.stage("extractor.json", config_to_json(&net));
    Ok(())
}

pub fn regimes(ctx: &mut RunContext, args: &RegimesArgs) -> Result<(), CliError> {
    let constants = match &args.constants {
        Some(path) => RegimeConstants::from_json(&ctx.read_input(path)?).map_err(input)?,
        None => RegimeConstants::default(),
    };
    let rows = regime_sweep(args.w, args.l, args.bmax, &constants).map_err(input)?;
    let labels_ok = rows.windows(2).all(|w| w[0].regime <= w[1].regime);
    ctx.check("partition", labels_ok && rows.len() as u64 == args.bmax, format!("{} rows, one label each", rows.len()));
    ctx.stage(
        "regimes.csv",
        csv_bytes(
            &["b", "regime", "lower", "upper"],
            rows.iter().map(|r| vec![r.b.to_string(), r.regime.to_string(), fmt(&r.lower.value), fmt(&r.upper.bound)]),
        )?,
    );
    Ok(())
}

pub fn eval(ctx: &mut RunContext, args: &EvalArgs) -> Result<Vec<String>, CliError> {
    let net = load_net(ctx, &args.net)?;
    let points = args
        .points
        .iter()
        .map(|s| s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let outputs = net.compile().eval_many(&points).map_err(input)?;
    let rows: Vec<Vec<String>> = points.iter().zip(&outputs).map(|(x, y)| vec![join(x), join(y)]).collect();
    let lines = rows.iter().map(|r| format!("{} -> {}", r[0], r[1])).collect();
    ctx.stage("eval.csv", csv_bytes(&["x", "y"], rows)?);
    Ok(lines)
}

pub fn random_net(ctx: &mut RunContext, args: &RandomNetArgs) -> Result<(), CliError> {
    if args.d == 0 || args.width == 0 || args.depth == 0 {
        return Err(CliError::Input("d, width and depth must be at least 1".into()));
    }
    let net = qnf_quant::random_unit_net(&mut rng(ctx), args.d, args.width, args.depth, args.bits);
    ctx.stage("net.json", config_to_json(&net));
    Ok(())
}
