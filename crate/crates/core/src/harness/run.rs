//! Experiment dispatch: each subcommand becomes a table of result rows.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use super::args::*;
use super::table::{read_csv, PlotSeries, ResultRow, ResultTable};
use crate::cantor::{brute_force_mesh_count, closed_form_counts, mesh_series, DigitFunction};
use crate::energy_method::{
    build_nested_family, dyadic_ladder, LACUNARY_LEVELS, expected_energy_check, lacunary_schedule, lemma_52_check, lemma_52_sweep,
    natural_schedule, statement_55_check,
};
use crate::error::{invalid, Error, Result};
use crate::estimators::{
    box_dim_estimate, energy_dimension_profile, max_packing_greedy, natural_measure, DiscreteMeasure, ScaleSeries,
};
use crate::metric_spaces::{build_net, SpaceDescriptor};
use crate::prevalence::{
    build_layers, event_trials, simulate_statement_31, Adversary, CollidingAdversary, StickyAdversary, ZeroAdversary,
};
use crate::stats::mix_seed;

/// Exponent grid for energy profiles: 0.05, 0.10, …, 1.00.
pub const ENERGY_GRID_STEPS: u32 = 20;

fn with(base: &Value, extra: Value) -> Value {
    let mut map: Map<String, Value> = base.as_object().cloned().unwrap_or_default();
    if let Value::Object(e) = extra {
        map.extend(e);
    }
    Value::Object(map)
}

pub fn run(command: &Command) -> Result<ResultTable> {
    let seed = command.common().seed;
    match command {
        Command::Estimate { args, .. } => estimate(args, seed),
        Command::Cantor { args, .. } => cantor(args, seed),
        Command::Prevalence { args, .. } => prevalence(args, seed),
        Command::Statement31 { args, .. } => statement31(args, seed),
        Command::Energy { args, .. } => energy(args, seed),
        Command::Lemma52 { args, .. } => lemma52(args, seed),
        Command::Report { args, .. } => report(args),
    }
}

/// Packing counts of the scale-n net at radius 2^{-n}.
pub fn packing_series(space: &SpaceDescriptor, range: ScaleRange) -> Result<ScaleSeries> {
    let entries = range
        .iter()
        .map(|n| Ok((n, max_packing_greedy(&build_net(space, n)?, n)?.count as u64)))
        .collect::<Result<Vec<_>>>()?;
    ScaleSeries::new(2, entries)
}

pub fn estimate(args: &EstimateArgs, seed: u64) -> Result<ResultTable> {
    if args.tolerance < 0.0 {
        return invalid("tolerance must be nonnegative");
    }
    let base = args.space.descriptor();
    let space = if args.d == 0 { base.clone() } else { SpaceDescriptor::product(base.clone(), args.d) };
    let config = json!({
        "space": space.name(),
        "variant": args.variant.name(),
        "n": args.n.to_string(),
        "tolerance": args.tolerance,
    });
    let mut table = ResultTable::default();
    match args.variant.box_variant() {
        Some(variant) => {
            let series = packing_series(&space, args.n)?;
            for &(n, count) in series.entries() {
                table.push(ResultRow::new("estimate.count", with(&config, json!({ "scale": n })), count as f64, seed));
            }
            let est = box_dim_estimate(&series, variant)?;
            let reference = args.reference.unwrap_or(args.space.box_dimension() + args.d as f64);
            let pass = (est.slope - reference).abs() <= args.tolerance;
            table.push(
                ResultRow::new("estimate.dimension", with(&config, json!({ "r2": est.fit_r2 })), est.slope, seed)
                    .reference(reference, pass),
            );
            table.series.push(PlotSeries {
                label: space.name(),
                base: 2,
                points: series.entries().to_vec(),
            });
        }
        None => {
            if args.d != 0 {
                return Err(Error::Unsupported("energy profiles are computed on the base spaces only".into()));
            }
            let family = args
                .n
                .iter()
                .map(|depth| natural_measure(&base, depth))
                .collect::<Result<Vec<DiscreteMeasure>>>()?;
            let grid: Vec<f64> = (1..=ENERGY_GRID_STEPS).map(|k| k as f64 / ENERGY_GRID_STEPS as f64).collect();
            let profile = energy_dimension_profile(&family, &grid)?;
            for row in &profile.rows {
                table.push(ResultRow::new(
                    "estimate.energy",
                    with(&config, json!({ "s": row.s, "divergent": row.divergent })),
                    *row.energies.last().unwrap(),
                    seed,
                ));
            }
            let reference = args.reference.unwrap_or(args.space.hausdorff_dimension());
            let pass = (profile.estimate - reference).abs() <= args.tolerance;
            let hi = if profile.bracket.1.is_finite() { json!(profile.bracket.1) } else { json!("inf") };
            table.push(
                ResultRow::new(
                    "estimate.dimension",
                    with(&config, json!({ "bracket": [profile.bracket.0, hi], "flag": profile.flag })),
                    profile.estimate,
                    seed,
                )
                .reference(reference, pass),
            );
        }
    }
    Ok(table)
}

pub fn cantor(args: &CantorArgs, seed: u64) -> Result<ResultTable> {
    if args.n_max == 0 {
        return invalid("--n-max must be at least 1");
    }
    let mut table = ResultTable::default();
    let mut counts: Vec<Vec<(u32, u64)>> = vec![Vec::new(); 3];
    for n in 1..=args.n_max {
        let (f, g, s) = closed_form_counts(n)?;
        for (k, (func, closed)) in DigitFunction::ALL.iter().zip([f, g, s]).enumerate() {
            let count = brute_force_mesh_count(*func, n)?;
            counts[k].push((n, count));
            table.push(
                ResultRow::new("cantor.mesh", json!({ "function": func.name(), "n": n }), count as f64, seed)
                    .reference(closed as f64, count as u128 == closed),
            );
        }
    }
    let graph_dim = 8f64.ln() / 9f64.ln();
    let sum_dim = 0.5 + 2f64.ln() / 3f64.ln();
    match args.fit {
        Some(range) => {
            let mut slopes = Vec::new();
            for (func, reference) in DigitFunction::ALL.iter().zip([graph_dim, graph_dim, sum_dim]) {
                let series = mesh_series(*func, range.iter())?;
                let est = box_dim_estimate(&series, crate::estimators::Variant::FullFit)?;
                let pass = (est.slope - reference).abs() <= args.tolerance;
                table.push(
                    ResultRow::new(
                        "cantor.slope",
                        json!({ "function": func.name(), "fit": range.to_string(), "tolerance": args.tolerance }),
                        est.slope,
                        seed,
                    )
                    .reference(reference, pass),
                );
                slopes.push(est.slope);
                table.series.push(PlotSeries {
                    label: func.name().into(),
                    base: 9,
                    points: series.entries().to_vec(),
                });
            }
            let gap = slopes[2] - slopes[0];
            table.push(
                ResultRow::new("cantor.gap", json!({ "fit": range.to_string() }), gap, seed).reference(0.15, gap >= 0.15),
            );
        }
        None => {
            for (func, points) in DigitFunction::ALL.iter().zip(counts) {
                table.series.push(PlotSeries {
                    label: func.name().into(),
                    base: 9,
                    points,
                });
            }
        }
    }
    Ok(table)
}

pub fn prevalence(args: &PrevalenceArgs, seed: u64) -> Result<ResultTable> {
    if args.trials == 0 {
        return invalid("--trials must be at least 1");
    }
    if args.d == 0 {
        return invalid("--d must be at least 1");
    }
    let construction = build_layers(args.space.base(), args.d, args.n.hi)?;
    let drift = args.drift.drift();
    let config = json!({
        "space": args.space.base().descriptor().name(),
        "d": args.d,
        "drift": args.drift.name(),
        "trials": args.trials,
    });
    let mut table = ResultTable::default();
    for n in args.n.iter() {
        let layer = construction.layer(n).expect("all layers up to the top are built");
        table.push(ResultRow::new(
            "prevalence.layer",
            with(&config, json!({ "n": n, "s": layer.s_n, "k": layer.k_n, "m": layer.m_n, "ell": layer.ell_n })),
            layer.ell_n as f64,
            seed,
        ));
        let summary = event_trials(&construction, drift.as_ref(), n, args.trials, mix_seed(seed, n as u64))?;
        table.push(
            ResultRow::new("prevalence.event", with(&config, json!({ "n": n, "holds": summary.holds })), summary.fraction, seed)
                .reference(summary.reference, summary.pass)
                .ci(summary.ci),
        );
    }
    Ok(table)
}

pub fn statement31(args: &Statement31Args, seed: u64) -> Result<ResultTable> {
    if args.trials == 0 {
        return invalid("--trials must be at least 1");
    }
    if args.d == 0 || args.n == 0 {
        return invalid("--d and --n must be at least 1");
    }
    let construction = build_layers(args.space.base(), args.d, args.n)?;
    let layer = construction.layer(args.n).expect("the top layer is built");
    let adversaries: Vec<Box<dyn Adversary>> = match args.adversary {
        AdversaryArg::Zero => vec![Box::new(ZeroAdversary)],
        AdversaryArg::Colliding => vec![Box::new(CollidingAdversary)],
        AdversaryArg::Sticky => vec![Box::new(StickyAdversary)],
        AdversaryArg::All => vec![Box::new(ZeroAdversary), Box::new(CollidingAdversary), Box::new(StickyAdversary)],
    };
    let mut table = ResultTable::default();
    for adversary in &adversaries {
        let r = simulate_statement_31(layer, adversary.as_ref(), args.trials, seed)?;
        table.push(
            ResultRow::new(
                "statement31.failure",
                json!({
                    "space": args.space.base().descriptor().name(),
                    "d": args.d,
                    "n": args.n,
                    "adversary": r.adversary,
                    "trials": r.trials,
                    "failures": r.failures,
                    "s": layer.s_n,
                    "k": layer.k_n,
                }),
                r.failure_rate,
                seed,
            )
            .reference(r.bound, r.pass)
            .ci(r.ci),
        );
    }
    Ok(table)
}

pub fn energy(args: &EnergyArgs, seed: u64) -> Result<ResultTable> {
    if args.trials == 0 || args.pairs == 0 {
        return invalid("--trials and --pairs must be at least 1");
    }
    if args.min_depth == 0 || args.min_depth > args.depth {
        return invalid(format!("--min-depth must lie in 1..={}", args.depth));
    }
    let schedule = match args.schedule {
        ScheduleArg::Lacunary => lacunary_schedule(args.depth),
        ScheduleArg::Natural => natural_schedule(args.depth),
    };
    if schedule.len() != args.depth as usize {
        return invalid(format!(
            "the lacunary schedule has {LACUNARY_LEVELS} levels; --depth {} is not available",
            args.depth
        ));
    }
    let family = build_nested_family(&schedule)?;
    let drift = args.drift.drift();
    let config = json!({
        "schedule": format!("{:?}", args.schedule).to_lowercase(),
        "depth": args.depth,
        "t": args.t,
        "s": args.s,
        "d": args.d,
        "trials": args.trials,
        "drift": args.drift.name(),
    });
    let mut table = ResultTable::default();
    let pairs = statement_55_check(&family, drift.as_ref(), args.d, args.t, args.s, args.trials, args.pairs, seed)?;
    for c in &pairs.decades {
        table.push(ResultRow::new(
            "energy.decade",
            with(&config, json!({ "decade": c.decade, "pairs": c.pairs })),
            c.constant,
            seed,
        ));
    }
    table.push(
        ResultRow::new(
            "energy.stability",
            with(&config, json!({ "constant": pairs.constant, "span": pairs.span, "pairs": pairs.pairs.len() })),
            pairs.stability,
            seed,
        )
        .reference(2.0, pairs.pass),
    );
    for depth in args.min_depth..=args.depth {
        let truncated = family.truncate(depth)?;
        let nu = DiscreteMeasure::uniform(truncated.leaf_points(0)?)?;
        let r = expected_energy_check(
            &truncated,
            &nu,
            drift.as_ref(),
            args.d,
            args.t,
            args.s,
            pairs.constant,
            args.trials,
            mix_seed(seed, depth as u64),
        )?;
        let params = with(&config, json!({ "level": depth, "atoms": r.atoms, "base_energy": r.base_energy }));
        let err = r.monte_carlo_err;
        table.push(
            ResultRow::new("energy.expected", params.clone(), r.monte_carlo, seed)
                .reference(r.reference, r.monte_carlo <= r.reference)
                .ci(((r.monte_carlo - 1.96 * err).max(0.0), r.monte_carlo + 1.96 * err)),
        );
        table.push(
            ResultRow::new("energy.pairwise", params, r.pairwise, seed).reference(r.reference, r.pairwise <= r.reference),
        );
    }
    Ok(table)
}

pub fn lemma52(args: &Lemma52Args, seed: u64) -> Result<ResultTable> {
    if args.levels < 2 {
        return invalid("--levels must be at least 2");
    }
    if args.u.is_empty() || args.thetas.is_empty() {
        return invalid("--u and --thetas need at least one value");
    }
    let ladder = dyadic_ladder(args.levels);
    let (ps, qs, thetas) = match args.sweep {
        SweepArg::P => (ladder.clone(), vec![0.5], args.thetas.clone()),
        SweepArg::Q => (vec![0.5], ladder.clone(), args.thetas.clone()),
        SweepArg::Theta => (vec![0.5], vec![0.5], args.thetas.clone()),
        SweepArg::All => (ladder.clone(), ladder.clone(), args.thetas.clone()),
    };
    let sweep_name = format!("{:?}", args.sweep).to_lowercase();
    let mut table = ResultTable::default();
    for (k, &u) in args.u.iter().enumerate() {
        let sweep = lemma_52_sweep(args.d, u, &ps, &qs, &thetas, mix_seed(seed, k as u64))?;
        let config = json!({ "d": args.d, "u": u, "sweep": sweep_name, "levels": args.levels });
        for r in &sweep.rows {
            table.push(
                ResultRow::new("lemma52.ratio", with(&config, json!({ "p": r.p, "q": r.q, "theta": r.theta })), r.ratio, seed)
                    .reference(r.constant, r.pass),
            );
        }
        table.push(
            ResultRow::new("lemma52.bound", config.clone(), sweep.max_ratio, seed).reference(sweep.constant, sweep.bounded),
        );
        if qs.len() > 1 {
            table.push(ResultRow::new("lemma52.slope", config, sweep.slope, seed).reference(0.0, sweep.flat));
        }
    }
    if args.d == 1 && args.u.contains(&1.0) {
        let r = lemma_52_check(1.0, 1.0, 0.0, 1.0, 1, seed)?;
        let reference = PI / 2.0 - 2f64.ln();
        table.push(
            ResultRow::new("lemma52.spot", json!({ "p": 1.0, "q": 1.0, "theta": 0.0, "u": 1.0, "d": 1 }), r.integral, seed)
                .reference(reference, (r.integral - reference).abs() <= 1e-4),
        );
    }
    Ok(table)
}

pub fn report(args: &ReportArgs) -> Result<ResultTable> {
    let mut table = ResultTable::default();
    for path in &args.input {
        table.rows.extend(read_csv(path)?);
    }
    Ok(table)
}
