use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::family::NestedFamily;
use super::field::{sample_field, RandomFieldSample};
use super::kernel::triangle_integral;
use crate::error::{invalid, Error, Result};
use crate::estimators::{discrete_energy, DiscreteMeasure};
use crate::metric_spaces::PointSet;
use crate::prevalence::Drift;
use crate::rational::{dyadic, to_f64, Rational};
use crate::stats::{mean_and_stderr, mix_seed};

/// Upper limit on leaves whose pairs are listed explicitly.
const PAIR_LEAF_LIMIT: usize = 4096;
const LATTICE_LIMIT: i128 = 1 << 58;

/// A base point placed in a leaf, with its drift value.
#[derive(Clone, Debug)]
struct Site {
    x: Rational,
    leaf: usize,
    drift: Vec<Rational>,
}

fn sites(family: &NestedFamily, xs: &[Rational], drift: &dyn Drift, d: usize) -> Result<Vec<Site>> {
    xs.iter()
        .map(|x| {
            let leaf = family
                .leaf_of(x)
                .ok_or_else(|| Error::InvalidInput(format!("{x} lies outside every leaf of the family")))?;
            Ok(Site {
                x: *x,
                leaf,
                drift: drift.value(x, d)?,
            })
        })
        .collect()
}

const TRIAL_CHUNK: u64 = 64;

/// Runs `work` on fixed blocks of trial indices in parallel and returns the
/// block results in order, so reductions do not depend on scheduling.
fn chunked<T: Send, F: Fn(std::ops::Range<u64>) -> T + Sync>(trials: u64, work: F) -> Vec<T> {
    let blocks = trials.div_ceil(TRIAL_CHUNK);
    (0..blocks)
        .into_par_iter()
        .map(|b| work(b * TRIAL_CHUNK..((b + 1) * TRIAL_CHUNK).min(trials)))
        .collect()
}

/// E (ρ² + |(f+g)(a) − (f+g)(b)|²)^{-u} for each pair, with its standard error.
///
/// Below the family depth M every point is its own piece, so the levels past
/// M add X_a − X_b with X_a, X_b independent and uniform on [0, 2^{-M}]^d.
/// For d = 1 that part is integrated exactly given the sampled levels; for
/// larger d it is drawn along with them.
fn pair_expectations(
    family: &NestedFamily,
    sites: &[Site],
    pairs: &[(usize, usize)],
    d: usize,
    u: f64,
    trials: u64,
    seed: u64,
) -> Vec<(f64, f64)> {
    let depth = family.depth();
    let w = to_f64(&dyadic(depth));
    let common: Vec<u32> = pairs
        .iter()
        .map(|&(a, b)| family.common_levels(sites[a].leaf, sites[b].leaf))
        .collect();
    let rho_sq: Vec<Rational> = pairs
        .iter()
        .map(|&(a, b)| (sites[a].x - sites[b].x) * (sites[a].x - sites[b].x))
        .collect();
    let shift = |sample: &RandomFieldSample, k: usize| -> Vec<Rational> {
        let (a, b) = pairs[k];
        let mut v = sample.difference(family, sites[a].leaf, sites[b].leaf, common[k]);
        for (c, o) in v.iter_mut().enumerate() {
            *o += sites[a].drift[c] - sites[b].drift[c];
        }
        v
    };

    if d == 1 {
        // tally the sampled shifts, then integrate each distinct (ρ, shift) once
        let tallies = chunked(trials, |range| {
            let mut acc = vec![BTreeMap::<Rational, u64>::new(); pairs.len()];
            for t in range {
                let sample = sample_field(family, 1, mix_seed(seed, t));
                for (k, tally) in acc.iter_mut().enumerate() {
                    *tally.entry(shift(&sample, k)[0]).or_default() += 1;
                }
            }
            acc
        })
        .into_iter()
        .reduce(|mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                for (k, v) in y {
                    *x.entry(k).or_default() += v;
                }
            }
            a
        })
        .expect("at least one trial");
        let rho_ref = &rho_sq;
        let mut keys: Vec<(Rational, Rational)> = tallies
            .iter()
            .enumerate()
            .flat_map(|(k, t)| t.keys().map(move |delta| (rho_ref[k], *delta)))
            .collect();
        keys.sort();
        keys.dedup();
        let values: HashMap<(Rational, Rational), f64> = keys
            .par_iter()
            .map(|key| {
                let rho = to_f64(&key.0).sqrt();
                (*key, triangle_integral(w, rho, to_f64(&key.1), u) / (w * w))
            })
            .collect();
        return tallies
            .iter()
            .enumerate()
            .map(|(k, tally)| {
                let n = trials as f64;
                let (mut s1, mut s2) = (0.0, 0.0);
                for (delta, &c) in tally {
                    let v = values[&(rho_sq[k], *delta)];
                    s1 += c as f64 * v;
                    s2 += c as f64 * v * v;
                }
                let mean = s1 / n;
                let var = if trials > 1 { ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0) } else { 0.0 };
                (mean, (var / n).sqrt())
            })
            .collect();
    }

    let rho_sq: Vec<f64> = rho_sq.iter().map(to_f64).collect();
    let sums = chunked(trials, |range| {
        let mut acc = vec![(0.0f64, 0.0f64); pairs.len()];
        for t in range {
            let trial_seed = mix_seed(seed, t);
            let sample = sample_field(family, d, trial_seed);
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(trial_seed, u64::MAX));
            for (k, slot) in acc.iter_mut().enumerate() {
                let r2: f64 = shift(&sample, k)
                    .iter()
                    .map(|v| {
                        let z = to_f64(v) + w * (rng.random::<f64>() - rng.random::<f64>());
                        z * z
                    })
                    .sum();
                let v = (rho_sq[k] + r2).powf(-u);
                slot.0 += v;
                slot.1 += v * v;
            }
        }
        acc
    })
    .into_iter()
    .reduce(|mut a, b| {
        for (x, y) in a.iter_mut().zip(b) {
            x.0 += y.0;
            x.1 += y.1;
        }
        a
    })
    .expect("at least one trial");
    let n = trials as f64;
    sums.into_iter()
        .map(|(s1, s2)| {
            let mean = s1 / n;
            let var = if trials > 1 { ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0) } else { 0.0 };
            (mean, (var / n).sqrt())
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairExpectation {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub common_levels: u32,
    pub expectation: f64,
    pub std_err: f64,
    /// expectation · ρ^s
    pub scaled: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecadeConstant {
    /// ⌊log₁₀ ρ⌋
    pub decade: i32,
    pub pairs: usize,
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairBoundReport {
    pub t: f64,
    pub s: f64,
    pub d: usize,
    pub trials: u64,
    pub pairs: Vec<PairExpectation>,
    pub decades: Vec<DecadeConstant>,
    /// Largest scaled expectation over all pairs.
    pub constant: f64,
    /// Largest over smallest per-decade constant.
    pub stability: f64,
    /// Orders of magnitude covered by the pair distances.
    pub span: i32,
    pub pass: bool,
}

/// Empirical constant c with E(ρ² + |Δ(f+g)|²)^{-(t+d)/2} ≤ c ρ^{-s} over pairs
/// of leaf left endpoints. Passes when the per-decade constants agree within
/// a factor 2 over at least two decades of separation.
#[allow(clippy::too_many_arguments)]
pub fn statement_55_check(
    family: &NestedFamily,
    drift: &dyn Drift,
    d: usize,
    t: f64,
    s: f64,
    trials: u64,
    max_pairs: usize,
    seed: u64,
) -> Result<PairBoundReport> {
    if !(t > 0.0 && t < s) {
        return invalid(format!("need 0 < t < s, got t = {t}, s = {s}"));
    }
    if trials == 0 || max_pairs == 0 {
        return invalid("trials and pairs must be positive");
    }
    let leaves = family.leaves().len();
    if leaves > PAIR_LEAF_LIMIT {
        return Err(Error::LimitExceeded {
            what: "family leaves",
            requested: leaves,
            limit: PAIR_LEAF_LIMIT,
        });
    }
    let xs: Vec<Rational> = family.leaves().iter().map(|p| p.left_endpoint()).collect();
    let sites = sites(family, &xs, drift, d)?;
    let mut pairs: Vec<(usize, usize)> = (0..leaves).flat_map(|a| (a + 1..leaves).map(move |b| (a, b))).collect();
    if pairs.is_empty() {
        return invalid("the family has a single leaf");
    }
    if pairs.len() > max_pairs {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, u64::MAX - 1));
        let mut chosen = sample_indices(&mut rng, pairs.len(), max_pairs).into_vec();
        chosen.sort_unstable();
        pairs = chosen.into_iter().map(|k| pairs[k]).collect();
    }
    let u = (t + d as f64) / 2.0;
    let expectations = pair_expectations(family, &sites, &pairs, d, u, trials, seed);
    let rows: Vec<PairExpectation> = pairs
        .iter()
        .zip(expectations)
        .map(|(&(a, b), (e, se))| {
            let distance = to_f64(&(sites[a].x - sites[b].x)).abs();
            PairExpectation {
                a,
                b,
                distance,
                common_levels: family.common_levels(a, b),
                expectation: e,
                std_err: se,
                scaled: e * distance.powf(s),
            }
        })
        .collect();
    let mut by_decade: Vec<(i32, f64)> = rows
        .iter()
        .map(|r| (r.distance.log10().floor() as i32, r.scaled))
        .collect();
    by_decade.sort_by_key(|x| x.0);
    let mut decades: Vec<DecadeConstant> = Vec::new();
    for (decade, v) in by_decade {
        match decades.last_mut() {
            Some(last) if last.decade == decade => {
                last.pairs += 1;
                last.constant = last.constant.max(v);
            }
            _ => decades.push(DecadeConstant {
                decade,
                pairs: 1,
                constant: v,
            }),
        }
    }
    let constant = decades.iter().map(|c| c.constant).fold(0.0, f64::max);
    let low = decades.iter().map(|c| c.constant).fold(f64::INFINITY, f64::min);
    let stability = constant / low;
    let span = decades.last().unwrap().decade - decades[0].decade;
    Ok(PairBoundReport {
        t,
        s,
        d,
        trials,
        pass: span >= 2 && stability <= 2.0,
        pairs: rows,
        decades,
        constant,
        stability,
        span,
    })
}

/// ν pushed to the graph of f + g: atoms (x, (f+g)(x)) with ν's weights.
#[derive(Clone, Debug)]
pub struct GraphMeasure {
    measure: DiscreteMeasure,
}

impl GraphMeasure {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn energy(&self, exponent: f64) -> Result<f64> {
        discrete_energy(&self.measure, exponent)
    }
}

/// Builds the graph measure from the levels of one field sample, the drift,
/// and per-atom tails standing for the levels below the family.
fn push_forward(
    family: &NestedFamily,
    nu: &DiscreteMeasure,
    sites: &[Site],
    sample: &RandomFieldSample,
    tails: &[Vec<Rational>],
) -> Result<GraphMeasure> {
    let d = sample.d;
    let mut coords = Vec::with_capacity(sites.len() * (d + 1));
    for (site, tail) in sites.iter().zip(tails) {
        coords.push(site.x);
        let levels = sample.value(family, site.leaf, family.depth());
        for c in 0..d {
            coords.push(levels[c] + site.drift[c] + tail[c]);
        }
    }
    let points = PointSet::from_rationals(d + 1, coords)?;
    Ok(GraphMeasure {
        measure: DiscreteMeasure::new(points, nu.weights().to_vec())?,
    })
}

/// Largest number of tail bits (≤ 32) that keeps every graph coordinate on
/// one integer lattice below 2^58.
fn tail_bits(sites: &[Site], depth: u32) -> Result<u32> {
    let mut lcm: i128 = 1;
    for site in sites {
        for v in std::iter::once(&site.x).chain(&site.drift) {
            lcm = lcm.lcm(v.denom());
            if lcm > LATTICE_LIMIT {
                return Err(Error::Overflow("graph measure lattice"));
            }
        }
    }
    (8..=32)
        .rev()
        .find(|&b| lcm.lcm(&(1i128 << (depth + b))) <= LATTICE_LIMIT)
        .ok_or(Error::Overflow("graph measure lattice"))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectedEnergyReport {
    pub depth: u32,
    pub atoms: usize,
    pub t: f64,
    pub s: f64,
    pub trials: u64,
    /// Mean of I_{t+d}(ν_f) over sampled fields. Heavy-tailed when atoms are
    /// close: it mostly misses the rare draws where the graph points nearly meet.
    pub monte_carlo: f64,
    pub monte_carlo_err: f64,
    /// Σ w_x w_y E(…) from pair expectations.
    pub pairwise: f64,
    /// I_s(ν)
    pub base_energy: f64,
    pub constant: f64,
    /// 4 · constant · I_s(ν)
    pub reference: f64,
    pub tail_bits: u32,
    pub pass: bool,
}

/// E I_{t+d}(ν_f) two ways, sampled energies of the graph measure and the
/// pairwise sum, each compared with 4 · constant · I_s(ν).
#[allow(clippy::too_many_arguments)]
pub fn expected_energy_check(
    family: &NestedFamily,
    nu: &DiscreteMeasure,
    drift: &dyn Drift,
    d: usize,
    t: f64,
    s: f64,
    constant: f64,
    trials: u64,
    seed: u64,
) -> Result<ExpectedEnergyReport> {
    if !(t > 0.0 && t < s) {
        return invalid(format!("need 0 < t < s, got t = {t}, s = {s}"));
    }
    if trials == 0 {
        return invalid("trials must be positive");
    }
    if nu.points().dim() != 1 {
        return invalid("the base measure must live on the line");
    }
    let xs: Vec<Rational> = (0..nu.len()).map(|i| nu.points().coord(i, 0)).collect();
    let sites = sites(family, &xs, drift, d)?;
    let depth = family.depth();
    let bits = tail_bits(&sites, depth)?;
    let exponent = t + d as f64;

    let energies = (0..trials)
        .into_par_iter()
        .map(|k| {
            let trial_seed = mix_seed(seed, k);
            let sample = sample_field(family, d, trial_seed);
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(trial_seed, u64::MAX));
            let tail_den = 1i128 << (depth + bits);
            let tails: Vec<Vec<Rational>> = sites
                .iter()
                .map(|_| {
                    (0..d)
                        .map(|_| Rational::new(rng.random_range(0..1i128 << bits), tail_den))
                        .collect()
                })
                .collect();
            push_forward(family, nu, &sites, &sample, &tails)?.energy(exponent)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (monte_carlo, monte_carlo_err) = mean_and_stderr(&energies);

    let n = sites.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let u = exponent / 2.0;
    let expectations = pair_expectations(family, &sites, &pairs, d, u, trials, mix_seed(seed, u64::MAX - 2));
    let wts: Vec<f64> = nu.weights().iter().map(to_f64).collect();
    let pairwise: f64 = pairs
        .iter()
        .zip(&expectations)
        .map(|(&(a, b), (e, _))| 2.0 * wts[a] * wts[b] * e)
        .sum();

    let base_energy = discrete_energy(nu, s)?;
    let reference = 4.0 * constant * base_energy;
    Ok(ExpectedEnergyReport {
        depth,
        atoms: n,
        t,
        s,
        trials,
        monte_carlo,
        monte_carlo_err,
        pairwise,
        base_energy,
        constant,
        reference,
        tail_bits: bits,
        pass: monte_carlo <= reference && pairwise <= reference,
    })
}
