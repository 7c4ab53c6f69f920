use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::layer::LayerSpec;
use crate::error::{invalid, Result};
use crate::estimators::{packing_count, DEFAULT_EXACT_LIMIT};
use crate::metric_spaces::PointSet;
use crate::rational::{dyadic, to_f64, Rational};
use crate::stats::{mix_seed, wilson_interval};

/// Chooses the translation y_i seeing only X_1, …, X_{i−1}.
pub trait Adversary: Sync {
    fn name(&self) -> &'static str;
    fn translation(&self, history: &[Vec<Rational>], d: usize) -> Vec<Rational>;
}

pub struct ZeroAdversary;

impl Adversary for ZeroAdversary {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn translation(&self, _history: &[Vec<Rational>], d: usize) -> Vec<Rational> {
        vec![Rational::from_integer(0); d]
    }
}

/// y_i = −X_{i−1}: lands on 0 whenever X_i repeats its predecessor.
pub struct CollidingAdversary;

impl Adversary for CollidingAdversary {
    fn name(&self) -> &'static str {
        "colliding"
    }

    fn translation(&self, history: &[Vec<Rational>], d: usize) -> Vec<Rational> {
        match history.last() {
            Some(prev) => prev.iter().map(|v| -v).collect(),
            None => vec![Rational::from_integer(0); d],
        }
    }
}

/// y_i = X_1 − X_{i−1}: aims every later point at the first one.
pub struct StickyAdversary;

impl Adversary for StickyAdversary {
    fn name(&self) -> &'static str {
        "sticky"
    }

    fn translation(&self, history: &[Vec<Rational>], d: usize) -> Vec<Rational> {
        match (history.first(), history.last()) {
            (Some(first), Some(prev)) => first.iter().zip(prev).map(|(a, b)| a - b).collect(),
            _ => vec![Rational::from_integer(0); d],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslatedUnionReport {
    pub n: u32,
    pub adversary: String,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub ci: (f64, f64),
    /// 1/(k_n 2^n)
    pub bound: f64,
    pub pass: bool,
}

/// One trial: whether the ℓ_n translated values fail to hold an s_n-packing.
fn trial_fails(layer: &LayerSpec, adversary: &dyn Adversary, seed: u64) -> Result<bool> {
    if layer.s_n <= 1 {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut history: Vec<Vec<Rational>> = Vec::with_capacity(layer.ell_n as usize);
    let mut translated: Vec<Vec<Rational>> = Vec::with_capacity(layer.ell_n as usize);
    for _ in 0..layer.ell_n {
        let y = adversary.translation(&history, layer.d);
        let index: Vec<u32> = (0..layer.d)
            .map(|_| rng.random_range(0..=layer.grid_max_index))
            .collect();
        let x = layer.grid_value(&index);
        translated.push(x.iter().zip(&y).map(|(a, b)| a + b).collect());
        history.push(x);
    }
    translated.sort();
    translated.dedup();
    if (translated.len() as u64) < layer.s_n {
        return Ok(true);
    }
    let points = PointSet::from_rationals(layer.d, translated.concat())?;
    let count = packing_count(&points, &dyadic(layer.n), DEFAULT_EXACT_LIMIT)?.count;
    Ok((count as u64) < layer.s_n)
}

/// Monte Carlo estimate of the failure probability of the translated union.
/// Passes when the Wilson upper bound is at most 1.5/(k_n 2^n).
pub fn simulate_statement_31(
    layer: &LayerSpec,
    adversary: &dyn Adversary,
    trials: u64,
    seed: u64,
) -> Result<TranslatedUnionReport> {
    if trials == 0 {
        return invalid("trials must be positive");
    }
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| trial_fails(layer, adversary, mix_seed(seed, t)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let ci = wilson_interval(failures, trials);
    let bound = to_f64(&(Rational::from_integer(1)
        / Rational::from_integer(layer.k_n as i128 * (1i128 << layer.n))));
    Ok(TranslatedUnionReport {
        n: layer.n,
        adversary: adversary.name().to_string(),
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        ci,
        bound,
        pass: ci.1 <= 1.5 * bound,
    })
}
