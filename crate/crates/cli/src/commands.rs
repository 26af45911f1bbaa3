use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use pil_core::combinatorics::stirling_table;
use pil_core::constants::{
    c2_closed_form, c3_integrals, c4_from_delta, c4_optimal_eta, lambda_interval, lambda_star_from_delta,
    moment_r, moment_r_tilde, poly_p, poly_p_tilde, rhs_objective, singular_series, singular_series_tuple,
    thm1_bound, thm5_bound, thm7_bound, thm7_optimal_eta, twin_prime_constant, u_maximizers, C3Integrals,
    DeltaDomain, SingularSeries, SingularSeriesConfig,
};
use pil_core::optimizer::{
    optimize_c1, optimize_c2, optimize_c3, optimize_c4, optimize_lambda_star, OmegaStrategy,
};
use pil_core::report::{check_report_value, search_point_value, Report};
use pil_core::sieve::DEFAULT_SEGMENT;
use pil_core::verify::{self, Suite, VerifyOptions};
use pil_core::{BoundContext, CheckReport, Error, Mode, PrimeDataset, Result, SearchConfig, SieveOptions};

use crate::args::{
    CheckArg, Command, ContextArgs, ObjectiveArg, OmegaStrategyArg, OptimizeArgs, Quantity, ReportArgs,
    SieveArgs, TripleArgs, VerifyArgs,
};
use crate::parse::Sweep;
use crate::Outcome;

// ε for closed-form evaluation and optimization, and the slack for finite-X checks.
const MAIN_TERM_EPSILON: f64 = 0.0;
const CHECK_EPSILON: f64 = 0.01;
// Nominal X for contexts that never look at it.
const NOMINAL_X: f64 = 1e8;

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Constants { quantity } => constants(quantity).map(plain),
        Command::Optimize(a) => optimize(a).map(plain),
        Command::Sieve(a) => sieve(a).map(plain),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a),
    }
}

fn plain(report: Report) -> Outcome {
    Outcome { report, hard_failure: false }
}

fn context(c: &ContextArgs, default_epsilon: f64, x: f64) -> Result<BoundContext<f64>> {
    BoundContext::new(c.b, c.epsilon.unwrap_or(default_epsilon), x, c.mode.into())
}

fn with_context(report: Report, ctx: &BoundContext<f64>) -> Report {
    report.param("mode", json!(ctx.mode)).param("B", ctx.b).param("epsilon", ctx.epsilon)
}

fn object(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn constant(quantity: &str, value: Value, params: &[(&str, Value)], extra: &[(&str, Value)]) -> Report {
    let mut record = object(extra);
    record.insert("kind".into(), json!("constant"));
    record.insert("quantity".into(), json!(quantity));
    record.insert("value".into(), value);
    let mut report = Report::new().param("quantity", quantity);
    for (k, v) in params {
        report = report.param(k, v.clone());
    }
    report.push(Value::Object(record));
    report
}

fn series_config(cutoff: Option<u64>) -> SingularSeriesConfig {
    let d = SingularSeriesConfig::default();
    SingularSeriesConfig { prime_cutoff: cutoff.unwrap_or(d.prime_cutoff), ..d }
}

fn triple_context(t: &TripleArgs) -> Result<BoundContext<f64>> {
    context(&t.ctx, MAIN_TERM_EPSILON, NOMINAL_X)
}

fn triple_params(t: &TripleArgs) -> Vec<(&'static str, Value)> {
    vec![("ell", json!(t.ell)), ("omega", json!(t.omega)), ("nu", json!(t.nu))]
}

fn constants(q: &Quantity) -> Result<Report> {
    Ok(match q {
        Quantity::P { k, y, tilde } => {
            let v = if *tilde { poly_p_tilde(*k, *y)? } else { poly_p(*k, *y)? };
            let name = if *tilde { "p_tilde" } else { "p" };
            constant(name, json!(v), &[("k", json!(k)), ("y", json!(y))], &[])
        }
        Quantity::Stirling { k, r } => {
            let s = stirling_table().stirling2(*k, *r)?;
            constant("stirling2", json!(s.to_string()), &[("k", json!(k)), ("r", json!(r))], &[])
        }
        Quantity::R { k, omega, lambda, ctx } => {
            let c = context(ctx, MAIN_TERM_EPSILON, NOMINAL_X)?;
            let v = match c.mode {
                Mode::Unconditional => moment_r(*k, *omega, *lambda)?,
                Mode::KTuple => moment_r_tilde(*k, *omega, *lambda)?,
            };
            let p = [("k", json!(k)), ("omega", json!(omega)), ("lambda", json!(lambda))];
            with_context(constant("r", json!(v), &p, &[]), &c)
        }
        Quantity::Delta { ell, omega, lambda, ctx } => {
            let c = context(ctx, MAIN_TERM_EPSILON, NOMINAL_X)?;
            let v = c.delta(*ell, *omega, *lambda)?;
            let p = [("ell", json!(ell)), ("omega", json!(omega)), ("lambda", json!(lambda))];
            with_context(constant("delta", json!(v), &p, &[]), &c)
        }
        Quantity::SingularSeries { n, cutoff } => {
            let cfg = series_config(*cutoff);
            let v = singular_series(*n, &cfg)?;
            constant("singular_series", json!(v), &[("n", json!(n)), ("prime_cutoff", json!(cfg.prime_cutoff))], &[])
        }
        Quantity::TwinConstant { cutoff } => {
            let cfg = series_config(*cutoff);
            let e = twin_prime_constant(&cfg)?;
            let p = [("prime_cutoff", json!(cfg.prime_cutoff))];
            constant("twin_constant", json!(e.value), &p, &[("tail_bound", json!(e.tail_bound))])
        }
        Quantity::SingularTuple { offsets, cutoff } => {
            let cfg = series_config(*cutoff);
            let e = singular_series_tuple(offsets, &cfg)?;
            let p = [("offsets", json!(offsets)), ("prime_cutoff", json!(cfg.prime_cutoff))];
            constant("singular_tuple", json!(e.value), &p, &[("tail_bound", json!(e.tail_bound))])
        }
        Quantity::LambdaInterval(t) => {
            let c = triple_context(t)?;
            let (l1, l2) = lambda_interval(t.ell, t.omega, t.nu, &c)?;
            let extra = [("lambda1", json!(l1)), ("lambda2", json!(l2))];
            with_context(constant("lambda_interval", json!([l1, l2]), &triple_params(t), &extra), &c)
        }
        Quantity::LambdaStar(t) => {
            let c = triple_context(t)?;
            let d = c.delta(t.ell, t.omega, t.nu)?;
            let v = lambda_star_from_delta(d, t.nu, c.b, DeltaDomain::Open)?;
            with_context(constant("lambda_star", json!(v), &triple_params(t), &[("delta", json!(d))]), &c)
        }
        Quantity::C2 { triple, lambda } => {
            let c = triple_context(triple)?;
            let v = c2_closed_form(triple.ell, triple.omega, triple.nu, *lambda, &c)?;
            let mut p = triple_params(triple);
            p.push(("lambda", json!(lambda)));
            with_context(constant("c2", json!(v), &p, &[]), &c)
        }
        Quantity::UMax { triple, lambda } => {
            let c = triple_context(triple)?;
            let (u1, u2) = u_maximizers(triple.ell, triple.omega, triple.nu, *lambda, &c)?;
            let d = c.delta(triple.ell, triple.omega, triple.nu)?;
            let rhs = rhs_objective(u1, u2, d, triple.nu, *lambda, c.b);
            let mut p = triple_params(triple);
            p.push(("lambda", json!(lambda)));
            let extra = [("u1", json!(u1)), ("u2", json!(u2))];
            with_context(constant("u_max", json!(rhs), &p, &extra), &c)
        }
        Quantity::C3(t) => {
            let c = triple_context(t)?;
            let i = c3_integrals(t.ell, t.omega, t.nu, &c)?;
            let extra = [
                ("i1", json!(i.i1)),
                ("i2", json!(i.i2)),
                ("i3", json!(i.i3)),
                ("bound", json!(i.sum())),
                ("baseline", json!(C3Integrals::baseline(c.b))),
            ];
            with_context(constant("c3", json!(i.c3(c.b)), &triple_params(t), &extra), &c)
        }
        Quantity::C4 { ell, omega, lambda, alpha, ctx } => {
            let c = context(ctx, MAIN_TERM_EPSILON, NOMINAL_X)?;
            let d = c.delta(*ell, *omega, *lambda)?;
            let v = c4_from_delta(d, *alpha, c.b)?;
            let p = [("ell", json!(ell)), ("omega", json!(omega)), ("lambda", json!(lambda)), ("alpha", json!(alpha))];
            let extra = [("delta", json!(d)), ("eta", json!(c4_optimal_eta(d, *alpha, c.b)))];
            with_context(constant("c4", json!(v), &p, &extra), &c)
        }
        Quantity::Thm1 { k, omega, h, x, exponent_slack, ctx } => {
            let c = context(ctx, MAIN_TERM_EPSILON, *x)?;
            let v = thm1_bound(*k, *omega, *h, *x, *exponent_slack, &c)?;
            let p = [
                ("k", json!(k)),
                ("omega", json!(omega)),
                ("h", json!(h)),
                ("X", json!(x)),
                ("exponent_slack", json!(exponent_slack)),
            ];
            with_context(constant("thm1", json!(v), &p, &[]), &c)
        }
        Quantity::Thm5 { lambda, ctx } => {
            let c = context(ctx, MAIN_TERM_EPSILON, NOMINAL_X)?;
            let v = thm5_bound(*lambda, &c)?;
            with_context(constant("thm5", json!(v), &[("lambda", json!(lambda))], &[]), &c)
        }
        Quantity::Thm7 { lambda, c5, c6, eta, x } => {
            let eta = eta.unwrap_or_else(|| thm7_optimal_eta(*lambda, *c5, *c6));
            let b = thm7_bound(*lambda, *c5, *c6, eta, *x)?;
            let p = [("lambda", json!(lambda)), ("c5", json!(c5)), ("c6", json!(c6)), ("X", json!(x))];
            constant("thm7", json!(b.value), &p, &[("eta", json!(eta)), ("vacuous", json!(b.vacuous))])
        }
        Quantity::Baselines { b } => {
            let c = BoundContext::unconditional(*b)?;
            let extra = [
                ("lambda_star", json!(1.0 + 1.0 / (2.0 * c.b))),
                ("gap_squares", json!(C3Integrals::baseline(c.b))),
            ];
            with_context(constant("baselines", json!(1.0 + 1.0 / (2.0 * c.b)), &[], &extra), &c)
        }
    })
}

fn search_config(a: &OptimizeArgs, mode: Mode) -> Result<SearchConfig<f64>> {
    let cfg = SearchConfig {
        ell_range: (a.ell_min, a.ell_max),
        nu_grid_step: a.nu_step,
        tol: a.tol,
        omega_strategy: match a.omega_strategy {
            OmegaStrategyArg::Golden => OmegaStrategy::Golden,
            OmegaStrategyArg::DenseGrid => OmegaStrategy::DenseGrid,
        },
        ..SearchConfig::for_mode(mode)
    };
    cfg.validate()?;
    Ok(cfg)
}

fn values(single: Option<f64>, sweep: &Option<Sweep>, name: &str) -> Result<(Vec<f64>, bool)> {
    match (single, sweep) {
        (_, Some(s)) => Ok((s.0.clone(), true)),
        (Some(v), None) => Ok((vec![v], false)),
        (None, None) => Err(Error::Domain(format!("--{name} or --{name}-sweep is required"))),
    }
}

fn optimize(a: &OptimizeArgs) -> Result<Report> {
    let ctx = context(&a.ctx, MAIN_TERM_EPSILON, NOMINAL_X)?;
    let cfg = search_config(a, ctx.mode)?;
    let mut report = with_context(Report::new(), &ctx)
        .param("objective", a.objective.to_possible_value_name())
        .param("ell_range", json!([cfg.ell_range.0, cfg.ell_range.1]));

    type Task = (Option<f64>, Option<f64>);
    let (tasks, swept): (Vec<Task>, bool) = match a.objective {
        ObjectiveArg::C3 | ObjectiveArg::LambdaStar => (vec![(None, None)], false),
        ObjectiveArg::C1 | ObjectiveArg::C2 => {
            let (ls, swept) = values(a.lambda, &a.lambda_sweep, "lambda")?;
            (ls.into_iter().map(|l| (Some(l), None)).collect(), swept)
        }
        ObjectiveArg::C4 => {
            let (ls, s1) = values(a.lambda, &a.lambda_sweep, "lambda")?;
            let (als, s2) = values(a.alpha, &a.alpha_sweep, "alpha")?;
            let grid = ls.iter().flat_map(|&l| als.iter().map(move |&al| (Some(l), Some(al)))).collect();
            (grid, s1 || s2)
        }
    };
    let run = |(lambda, alpha): Task| match a.objective {
        ObjectiveArg::C1 => optimize_c1(lambda.expect("lambda"), &cfg, &ctx),
        ObjectiveArg::C2 => optimize_c2(lambda.expect("lambda"), &cfg, &ctx),
        ObjectiveArg::C3 => optimize_c3(&cfg, &ctx),
        ObjectiveArg::C4 => optimize_c4(lambda.expect("lambda"), alpha.expect("alpha"), &cfg, &ctx),
        ObjectiveArg::LambdaStar => optimize_lambda_star(&cfg, &ctx),
    };
    let results: Vec<Result<_>> = tasks.par_iter().map(|&t| run(t)).collect();

    // A sweep may cross a precondition boundary (λ ≤ 1/2 for c₁, say);
    // those points are dropped and counted rather than aborting the run.
    let mut skipped = 0u64;
    for r in results {
        match r {
            Ok(p) => report.push(search_point_value(&p, &ctx)),
            Err(Error::Domain(_)) if swept => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if report.results.is_empty() {
        return Err(Error::Domain("no sweep point satisfies the preconditions".into()));
    }
    Ok(report.param("skipped", skipped))
}

trait PossibleValueName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> PossibleValueName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

fn dataset(limit: u64, segment: Option<u64>, cache: Option<&Path>) -> Result<PrimeDataset> {
    let opts = SieveOptions { segment_size: segment.unwrap_or(DEFAULT_SEGMENT as u64) as usize, ..SieveOptions::default() };
    match cache {
        Some(path) if path.exists() => {
            let ds = PrimeDataset::load(path, &opts)?;
            if ds.limit() != limit {
                return Err(Error::Cache(format!(
                    "{} holds primes up to {}, not {limit}",
                    path.display(),
                    ds.limit()
                )));
            }
            Ok(ds)
        }
        Some(path) => {
            let ds = PrimeDataset::build(limit, &opts)?;
            ds.save(path)?;
            Ok(ds)
        }
        None => PrimeDataset::build(limit, &opts),
    }
}

fn big(v: u128) -> Value {
    u64::try_from(v).map_or_else(|_| json!(v as f64), |n| json!(n))
}

fn sieve(a: &SieveArgs) -> Result<Report> {
    let ds = dataset(a.limit, a.segment, a.cache.as_deref())?;
    let x = ds.limit();
    let gaps = ds.gaps();
    let mut report = Report::new().param("X", x);
    report.push(json!({
        "kind": "sieve",
        "X": x,
        "pi": ds.pi_limit(),
        "psi": ds.psi(x as f64)?,
        "coverage": ds.coverage(),
        "next_prime": ds.next_prime_after_limit(),
        "max_gap": gaps.iter().max(),
        "gaps": gaps.len(),
    }));
    for &n in &a.twin {
        let t = ds.twin_pairs(n)?;
        report.push(json!({"kind": "twin", "n": n, "Z1": t.pairs, "Z": t.weighted_f64()}));
    }
    for &u in &a.psi {
        report.push(json!({"kind": "psi", "u": u, "psi": ds.psi(u)?, "pi": ds.pi(u)?}));
    }
    if let Some(h) = a.moment_h {
        let k = a.moment_k;
        report.push(json!({
            "kind": "moment",
            "h": h,
            "k": k,
            "psi_moment": ds.moment_sum_over_primes(h, k)?,
            "pi_moment": big(ds.prime_count_moment(h, k)?),
        }));
    }
    if let Some(k) = a.sets {
        let c = ds.set_cardinalities(k, !a.uncapped)?;
        report.push(json!({"kind": "sets", "K": k, "capped": !a.uncapped, "A": c.a, "A1": c.a1, "B": c.b, "B1": c.b1}));
    }
    Ok(report)
}

fn verify_options(a: &VerifyArgs) -> VerifyOptions {
    let d = VerifyOptions::default();
    VerifyOptions {
        singseries_c: a.singseries_c.unwrap_or(d.singseries_c),
        singseries_limit: a.singseries_limit.unwrap_or(d.singseries_limit),
        bd_t: a.t.or(d.bd_t),
        bd_n_max: a.n_max.unwrap_or(d.bd_n_max),
        z1_n: a.n.unwrap_or(d.z1_n),
        thm1_k: a.k.unwrap_or(d.thm1_k),
        thm1_lambdas: a.lambda.map_or(d.thm1_lambdas.clone(), |l| vec![l]),
        thm1_omega: a.omega.unwrap_or(d.thm1_omega),
        thm2_lambda: a.lambda.unwrap_or(d.thm2_lambda),
        thm4_lambda: a.lambda.unwrap_or(d.thm4_lambda),
        thm4_alpha: a.alpha.unwrap_or(d.thm4_alpha),
        thm5_lambda: a.lambda.unwrap_or(d.thm5_lambda),
        prime_prime_capped: !a.uncapped,
        proof_x: a.x_small.unwrap_or(d.proof_x),
        proof_h: a.h.unwrap_or(d.proof_h),
        proof_k: a.k.unwrap_or(d.proof_k),
        proof_omega: a.omega.unwrap_or(d.proof_omega),
        ..d
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let ctx = context(&a.ctx, CHECK_EPSILON, a.limit as f64)?;
    let cfg = SearchConfig::for_mode(ctx.mode);
    let opts = verify_options(a);
    let needs_series = matches!(a.check, CheckArg::All | CheckArg::Singseries | CheckArg::BdLower | CheckArg::BdUpper);
    let series = if needs_series { Some(SingularSeries::new(&series_config(a.prime_cutoff))?) } else { None };
    let series_ref = || series.as_ref().expect("series built for this check");

    let reports: Vec<CheckReport> = if a.check == CheckArg::Singseries {
        vec![verify::check_singseries_average(opts.singseries_limit.min(a.limit), series_ref(), opts.singseries_c)?]
    } else {
        let ds = dataset(a.limit, None, a.cache.as_deref())?;
        let lx = (ds.limit() as f64).ln();
        match a.check {
            CheckArg::All => verify::run_all(&Suite { ds: &ds, series: series_ref(), ctx, cfg, opts: opts.clone() })?,
            CheckArg::Singseries => unreachable!("handled above"),
            CheckArg::BdLower => {
                let t = opts.bd_t.unwrap_or(lx.floor() as u64).max(1);
                vec![verify::check_bd_lower(&ds, series_ref(), t, &ctx, &opts)?]
            }
            CheckArg::BdUpper => vec![verify::check_bd_upper(&ds, series_ref(), opts.bd_n_max, &ctx, &opts)?],
            CheckArg::Z1 => verify::check_z1_sandwich(&ds, opts.z1_n, &opts)?,
            CheckArg::Thm1 => {
                let mut out = Vec::new();
                for &l in &opts.thm1_lambdas {
                    out.extend(verify::check_thm1(&ds, l, opts.thm1_k, opts.thm1_omega, &ctx, &opts)?);
                }
                out
            }
            CheckArg::Thm2 => verify::check_thm2(&ds, opts.thm2_lambda, &cfg, &ctx, &opts)?,
            CheckArg::Thm3Thm4 => verify::check_thm3_thm4(&ds, &cfg, &ctx, &opts)?,
            CheckArg::Thm5Cor6 => verify::check_thm5_cor6(&ds, opts.thm5_lambda, &ctx, &opts)?,
            CheckArg::Proof => {
                verify::check_proof_machinery(&ds, opts.proof_x, opts.proof_h, opts.proof_k, opts.proof_omega)?
            }
            CheckArg::Telescoping => vec![verify::check_telescoping(&ds)],
            CheckArg::RosserSchoenfeld => vec![verify::check_rosser_schoenfeld(&ds)?],
        }
    };

    let mut report = with_context(Report::new(), &ctx).param("X", a.limit).param("check", a.check.to_possible_value_name());
    for r in &reports {
        report.push(check_report_value(r));
    }
    Ok(Outcome { report, hard_failure: !verify::suite_passes(&reports) })
}

fn report(a: &ReportArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.input)?;
    let report = Report::parse(&text)?;
    let hard_failure = report.results.iter().any(|r| {
        r.get("kind") == Some(&json!("check")) && r.get("pass") == Some(&json!(false)) && r.get("status") == Some(&json!("hard"))
    });
    Ok(Outcome { report, hard_failure })
}
