//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use graphdim::cantor::{brute_force_mesh_count, closed_form_counts, mesh_series, DigitFunction};
use graphdim::energy_method::{build_nested_family, dyadic_ladder, lacunary_schedule, lemma_52_check, lemma_52_sweep};
use graphdim::estimators::{box_dim_estimate, energy_dimension_profile, natural_measure, Variant};
use graphdim::harness::{self, *};
use graphdim::metric_spaces::SpaceDescriptor;
use graphdim::prevalence::{build_layers, event_trials, simulate_statement_31, BaseSpace, CollidingAdversary, DigitDrift, ZeroAdversary, ZeroDrift};

fn report(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

const SPACES: [SpaceDescriptor; 3] =
    [SpaceDescriptor::UnitInterval, SpaceDescriptor::TriadicCantor, SpaceDescriptor::HarmonicSequence];

fn range(lo: u32, hi: u32) -> ScaleRange {
    ScaleRange { lo, hi }
}

fn energy_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 * 0.05).collect()
}

#[test]
fn criterion_01_exact_mesh_counts() {
    let start = Instant::now();
    // literal counts for n = 1, 2, 3 in the order f, g, f+g
    let frozen: [[u64; 3]; 3] = [[8, 8, 16], [64, 64, 160], [512, 512, 1792]];
    let mut pass = true;
    let mut got = Vec::new();
    for n in 1..=3u32 {
        let closed = closed_form_counts(n).unwrap();
        let closed = [closed.0 as u64, closed.1 as u64, closed.2 as u64];
        for (k, func) in DigitFunction::ALL.iter().enumerate() {
            let c = brute_force_mesh_count(*func, n).unwrap();
            pass &= c == closed[k] && c == frozen[n as usize - 1][k];
            got.push(c);
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    report(1, pass, format!("counts {got:?} in {elapsed:?}"));
}

#[test]
fn criterion_02_graph_slopes() {
    let start = Instant::now();
    let slope = |f| box_dim_estimate(&mesh_series(f, 3..=7).unwrap(), Variant::FullFit).unwrap().slope;
    let sf = slope(DigitFunction::OddDigits);
    let ssum = slope(DigitFunction::Sum);
    let ref_f = 8f64.ln() / 9f64.ln();
    let ref_sum = 0.5 + 2f64.ln() / 3f64.ln();
    let elapsed = start.elapsed();
    let pass = (sf - ref_f).abs() <= 0.02
        && (ssum - ref_sum).abs() <= 0.02
        && ssum - sf >= 0.15
        && elapsed < Duration::from_secs(120);
    report(
        2,
        pass,
        format!("slope(f) = {sf:.5} vs {ref_f:.5}, slope(f+g) = {ssum:.5} vs {ref_sum:.5}, gap {:.4}, {elapsed:?}", ssum - sf),
    );
}

#[test]
fn criterion_03_harmonic_lower_box() {
    let series = packing_series(&SpaceDescriptor::HarmonicSequence, range(4, 12)).unwrap();
    let est = box_dim_estimate(&series, Variant::Liminf).unwrap().slope;
    report(3, (est - 0.5).abs() <= 0.05, format!("liminf estimate {est:.4} vs 0.5"));
}

#[test]
fn criterion_04_ordering_and_products() {
    let grid = energy_grid();
    let mut pass = true;
    let mut detail = Vec::new();
    for space in &SPACES {
        let family: Vec<_> = (4..=12).map(|depth| natural_measure(space, depth).unwrap()).collect();
        let energy = energy_dimension_profile(&family, &grid).unwrap().estimate;
        let series = packing_series(space, range(4, 12)).unwrap();
        let lo = box_dim_estimate(&series, Variant::Liminf).unwrap().slope;
        let hi = box_dim_estimate(&series, Variant::Limsup).unwrap().slope;
        pass &= energy <= lo + 0.05 && lo <= hi + 0.05;
        detail.push(format!("{}: energy {energy:.3} <= liminf {lo:.3} <= limsup {hi:.3}", space.name()));

        for (d, lo_n, hi_n) in [(1usize, 4u32, 10u32), (2, 3, 7)] {
            let base = packing_series(space, range(lo_n, hi_n)).unwrap();
            let prod = packing_series(&SpaceDescriptor::product(space.clone(), d), range(lo_n, hi_n)).unwrap();
            let b = box_dim_estimate(&base, Variant::FullFit).unwrap().slope;
            let p = box_dim_estimate(&prod, Variant::FullFit).unwrap().slope;
            pass &= (p - (b + d as f64)).abs() <= 0.05;
            detail.push(format!("{}x[0,1]^{d}: {p:.3} vs {:.3}", space.name(), b + d as f64));
        }
    }
    report(4, pass, detail.join("; "));
}

#[test]
fn criterion_05_cantor_energy_threshold() {
    let family: Vec<_> = (4..=12)
        .map(|depth| natural_measure(&SpaceDescriptor::TriadicCantor, depth).unwrap())
        .collect();
    let profile = energy_dimension_profile(&family, &energy_grid()).unwrap();
    let row = |s: f64| profile.rows.iter().find(|r| (r.s - s).abs() < 1e-9).unwrap();
    let target = 2f64.ln() / 3f64.ln();
    let pass = (profile.estimate - target).abs() <= 0.05
        && !row(0.5).divergent
        && row(0.75).divergent
        && profile.bracket.0 <= target
        && target <= profile.bracket.1;
    report(
        5,
        pass,
        format!("estimate {:.3}, bracket {:?}, target {target:.4}", profile.estimate, profile.bracket),
    );
}

#[test]
fn criterion_06_translated_unions() {
    let start = Instant::now();
    let construction = build_layers(BaseSpace::Cantor, 1, 5).unwrap();
    let layer = construction.layer(5).unwrap();
    let bound = 1.0 / (layer.k_n as f64 * 32.0);
    let zero = simulate_statement_31(layer, &ZeroAdversary, 100_000, 11).unwrap();
    let colliding = simulate_statement_31(layer, &CollidingAdversary, 100_000, 12).unwrap();
    let elapsed = start.elapsed();
    let pass = layer.s_n == 2
        && zero.ci.1 <= 1.5 * bound
        && colliding.ci.1 <= 1.5 * bound
        && elapsed < Duration::from_secs(60);
    report(
        6,
        pass,
        format!(
            "s_5 = {}, k_5 = {}, upper bounds zero {:.2e} colliding {:.2e} vs 1.5/(k_5 2^5) = {:.2e}, {elapsed:?}",
            layer.s_n,
            layer.k_n,
            zero.ci.1,
            colliding.ci.1,
            1.5 * bound
        ),
    );
}

#[test]
fn criterion_07_event_frequency() {
    let construction = build_layers(BaseSpace::Cantor, 1, 7).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    let odd = DigitDrift(DigitFunction::OddDigits);
    for (name, drift) in [("zero", &ZeroDrift as &dyn graphdim::prevalence::Drift), ("f", &odd)] {
        for n in 5..=7 {
            let s = event_trials(&construction, drift, n, 200, 100 + n as u64).unwrap();
            let reference = 1.0 - 2.0 * 0.5f64.powi(n as i32);
            pass &= s.fraction >= reference;
            detail.push(format!("{name} n={n}: {:.3} >= {reference:.4}", s.fraction));
        }
    }
    report(7, pass, detail.join("; "));
}

#[test]
fn criterion_08_kernel_integral() {
    let ladder = dyadic_ladder(8);
    let thetas = [0.0, 0.3, 2.0];
    let mut pass = true;
    let mut detail = Vec::new();
    for u in [0.75, 1.0, 1.5] {
        let sweep = lemma_52_sweep(1, u, &ladder, &ladder, &thetas, 5).unwrap();
        pass &= sweep.bounded && (-0.1..=0.1).contains(&sweep.slope);
        detail.push(format!(
            "u={u}: max ratio {:.3} (C = {:.3}), slope {:.3}",
            sweep.max_ratio, sweep.constant, sweep.slope
        ));
    }
    let spot = lemma_52_check(1.0, 1.0, 0.0, 1.0, 1, 0).unwrap().integral;
    let oracle = PI / 2.0 - 2f64.ln();
    pass &= (spot - oracle).abs() <= 1e-4;
    detail.push(format!("spot {spot:.8} vs {oracle:.8}"));
    report(8, pass, detail.join("; "));
}

#[test]
fn criterion_09_pair_constant_and_expected_energy() {
    let args = EnergyArgs {
        schedule: ScheduleArg::Lacunary,
        depth: 3,
        min_depth: 2,
        t: 0.5,
        s: 0.6,
        d: 1,
        trials: 1000,
        pairs: 200,
        drift: DriftArg::Zero,
    };
    assert_eq!(build_nested_family(&lacunary_schedule(3)).unwrap().depth(), 3);
    let table = harness::energy(&args, 1).unwrap();
    let stability = table.rows.iter().find(|r| r.experiment == "energy.stability").unwrap();
    let expected: Vec<_> = table.rows.iter().filter(|r| r.experiment == "energy.expected").collect();
    let pass = stability.pass && expected.len() == 2 && expected.iter().all(|r| r.pass);
    let detail = format!(
        "stability {:.3}; E energy {}",
        stability.value,
        expected
            .iter()
            .map(|r| format!("{:.1} <= {:.1}", r.value, r.reference.unwrap()))
            .collect::<Vec<_>>()
            .join(", ")
    );
    report(9, pass, detail);
}

fn csv_bytes(table: &ResultTable) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(table, &mut out).unwrap();
    out
}

#[test]
fn criterion_10_determinism() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["graphdim", "statement31", "--n", "5", "--adversary", "all", "--trials", "20000", "--seed", "9"],
        vec!["graphdim", "prevalence", "--n", "5..6", "--trials", "50", "--drift", "odd", "--seed", "9"],
        vec!["graphdim", "energy", "--depth", "3", "--trials", "300", "--seed", "9"],
        vec!["graphdim", "lemma52", "--d", "2", "--u", "1.5", "--sweep", "q", "--levels", "3", "--seed", "9"],
        vec!["graphdim", "cantor", "--n-max", "3", "--fit", "3..6"],
    ];
    let mut pass = true;
    let mut names = Vec::new();
    for argv in &commands {
        let cli = <Cli as clap::Parser>::try_parse_from(argv).unwrap();
        let a = csv_bytes(&run(&cli.command).unwrap());
        let b = csv_bytes(&run(&cli.command).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| csv_bytes(&run(&cli.command).unwrap()));
        pass &= a == b && a == c && a.len() > 100;
        names.push(argv[1]);
    }
    report(10, pass, format!("byte-identical CSV on repeat and on a 3-thread pool for {}", names.join(", ")));
}
