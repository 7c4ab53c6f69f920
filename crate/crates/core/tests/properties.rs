use proptest::prelude::*;

use graphdim::energy_method::{centered_bound, pair_integral};
use graphdim::estimators::{
    box_dim_estimate, discrete_energy, exact_packing, greedy_packing, DiscreteMeasure, ScaleSeries, Variant,
};
use graphdim::harness::{parse_config, read_csv, write_csv, ResultRow, ResultTable, ScaleRange};
use graphdim::metric_spaces::{DigitVector, PointSet};
use graphdim::rational::rat;
use graphdim::stats::wilson_interval;
use graphdim::Rational;

fn points(xs: &[(i64, i64)]) -> PointSet {
    let coords: Vec<Rational> = xs.iter().flat_map(|&(a, b)| [rat(a as i128, 64), rat(b as i128, 64)]).collect();
    PointSet::from_rationals(2, coords).unwrap()
}

fn distinct(xs: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let mut xs = xs;
    xs.sort();
    xs.dedup();
    xs
}

/// Midpoint rule for ∫_0^p ∫_0^p (q² + (a − b + θ)²)^{-u} da db.
fn midpoint(p: f64, q: f64, theta: f64, u: f64, cells: usize) -> f64 {
    let h = p / cells as f64;
    let mut sum = 0.0;
    for i in 0..cells {
        for j in 0..cells {
            let a = (i as f64 + 0.5) * h;
            let b = (j as f64 + 0.5) * h;
            sum += (q * q + (a - b + theta).powi(2)).powf(-u);
        }
    }
    sum * h * h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_is_a_maximal_packing(xs in prop::collection::vec((0i64..64, 0i64..64), 1..40), k in 1u32..6) {
        let ps = points(&distinct(xs));
        let delta = rat(1, 1i128 << k);
        let g = greedy_packing(&ps, &delta).unwrap();
        prop_assert!(g.verify(&ps));
        // every point lies within delta of the witness
        let th = ps.threshold(&delta);
        for i in 0..ps.len() {
            prop_assert!(g.witness.iter().any(|&j| ps.within(i, j, &th)));
        }
        if ps.len() <= 24 {
            let e = exact_packing(&ps, &delta, 64).unwrap();
            prop_assert!(e.verify(&ps));
            prop_assert!(e.count >= g.count);
        }
    }

    #[test]
    fn exact_packing_shrinks_with_radius(xs in prop::collection::vec((0i64..64, 0i64..64), 1..20), k in 1u32..5) {
        let ps = points(&distinct(xs));
        let fine = exact_packing(&ps, &rat(1, 1i128 << (k + 1)), 64).unwrap().count;
        let coarse = exact_packing(&ps, &rat(1, 1i128 << k), 64).unwrap().count;
        prop_assert!(fine >= coarse);
    }

    #[test]
    fn digit_round_trip(numer in 0i128..(1 << 20), depth in 20usize..30) {
        // numer encodes a {0,1} digit string through its binary digits
        let digits: Vec<u8> = (0..depth).map(|i| ((numer >> (depth - 1 - i).min(127)) & 1) as u8).collect();
        let v = DigitVector::new(digits.clone()).unwrap();
        let back = DigitVector::from_rational(&v.to_rational(), depth).unwrap();
        prop_assert_eq!(back.digits(), &digits[..]);
    }

    #[test]
    fn power_laws_give_their_exponent(c in 1u64..50, num in 1u32..8, lo in 1u32..4) {
        // counts c · 2^{n num/4}, rounded only when the exponent is integral
        let entries: Vec<(u32, u64)> = (lo..lo + 6).map(|n| (n * 4, c << (n * num))).collect();
        let s = ScaleSeries::new(2, entries).unwrap();
        let want = num as f64 / 4.0;
        for v in [Variant::FullFit, Variant::Liminf, Variant::Limsup] {
            let est = box_dim_estimate(&s, v).unwrap().slope;
            prop_assert!((est - want).abs() < 1e-9, "{:?}: {} vs {}", v, est, want);
        }
    }

    #[test]
    fn wilson_brackets_the_frequency(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
        let k = (frac * trials as f64).floor() as u64;
        let (lo, hi) = wilson_interval(k, trials);
        let p = k as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }

    #[test]
    fn energies_grow_with_the_exponent(xs in prop::collection::vec(0i64..64, 2..20), s in 0.05f64..1.5) {
        let mut xs = xs;
        xs.sort();
        xs.dedup();
        prop_assume!(xs.len() >= 2);
        let pts = PointSet::from_rationals(1, xs.iter().map(|&x| rat(x as i128, 64)).collect()).unwrap();
        let m = DiscreteMeasure::uniform(pts).unwrap();
        // all distances are at most 1, so ρ^{-s} grows with s
        prop_assert!(discrete_energy(&m, s).unwrap() <= discrete_energy(&m, s + 0.1).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn kernel_stays_under_the_centered_bound(pk in 1u32..8, qk in 1u32..8, theta in 0.0f64..3.0, u in 0.6f64..2.0) {
        let p = 0.5f64.powi(pk as i32);
        let q = 0.5f64.powi(qk as i32);
        let v = pair_integral(p, q, &[theta], u, 0).unwrap().value;
        prop_assert!(v <= centered_bound(p, q, u).unwrap() * (1.0 + 1e-6));
        prop_assert!(v > 0.0);
    }

    #[test]
    fn scale_ranges_round_trip(lo in 0u32..40, len in 0u32..10) {
        let r = ScaleRange { lo, hi: lo + len };
        prop_assert_eq!(r.to_string().parse::<ScaleRange>().unwrap(), r);
    }

    #[test]
    fn config_lines_round_trip(pairs in prop::collection::vec(("[a-z][a-z-]{0,8}", "[A-Za-z0-9.,]{1,8}"), 0..6)) {
        let text: String = pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let got = parse_config(&text, std::path::Path::new("p")).unwrap();
        prop_assert_eq!(got, pairs);
    }
}

#[test]
fn kernel_agrees_with_a_midpoint_rule() {
    for (p, q, theta, u) in [(0.5, 0.25, 0.0, 1.0), (0.25, 0.25, 0.3, 0.75), (0.5, 0.5, 2.0, 1.5), (0.125, 0.5, 0.3, 1.0)] {
        let lib = pair_integral(p, q, &[theta], u, 0).unwrap().value;
        let oracle = midpoint(p, q, theta, u, 800);
        assert!(((lib - oracle) / oracle).abs() < 1e-4, "{p} {q} {theta} {u}: {lib} vs {oracle}");
    }
}

#[test]
fn kernel_in_the_plane_agrees_with_a_product_rule() {
    // at q = p the integrand is smooth, so a coarse product midpoint rule is accurate
    let (p, q, u) = (0.5, 0.5, 1.5);
    let cells = 24;
    let h = p / cells as f64;
    let mut sum = 0.0;
    for a0 in 0..cells {
        for a1 in 0..cells {
            for b0 in 0..cells {
                for b1 in 0..cells {
                    let d0 = (a0 as f64 - b0 as f64) * h;
                    let d1 = (a1 as f64 - b1 as f64) * h;
                    sum += (q * q + d0 * d0 + d1 * d1).powf(-u);
                }
            }
        }
    }
    let oracle = sum * h.powi(4);
    let lib = pair_integral(p, q, &[0.0, 0.0], u, 3).unwrap();
    assert!((lib.value - oracle).abs() < 1e-3 * oracle + 4.0 * lib.std_err, "{} vs {oracle}", lib.value);
}

#[test]
fn csv_round_trip() {
    let mut t = ResultTable::default();
    t.push(ResultRow::new("a.b", serde_json::json!({ "n": 3, "note": "x,\"y\"" }), 0.1 + 0.2, 5).reference(0.3, false));
    t.push(ResultRow::new("c", serde_json::Value::Null, f64::MAX, u64::MAX).ci((0.0, 1e-300)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let mut bytes = Vec::new();
    write_csv(&t, &mut bytes).unwrap();
    std::fs::write(&path, &bytes).unwrap();
    assert_eq!(read_csv(&path).unwrap(), t.rows);
}
