use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::layer::WitnessConstruction;
use super::witness::{eval_witness, sample_witness, WitnessSample};
use crate::cantor::{eval, DigitFunction};
use crate::error::{invalid, Result};
use crate::estimators::{greedy_packing, packing_count, DEFAULT_EXACT_LIMIT};
use crate::metric_spaces::{build_net, DigitVector, PointSet};
use crate::rational::{dyadic, Rational};
use crate::stats::{mix_seed, wilson_interval};

/// A fixed continuous function added to the random one.
pub trait Drift: Sync {
    fn name(&self) -> String;
    fn value(&self, x: &Rational, d: usize) -> Result<Vec<Rational>>;
}

pub struct ZeroDrift;

impl Drift for ZeroDrift {
    fn name(&self) -> String {
        "zero".into()
    }

    fn value(&self, _x: &Rational, d: usize) -> Result<Vec<Rational>> {
        Ok(vec![Rational::zero(); d])
    }
}

/// A Cantor digit function in the first coordinate, zero elsewhere.
pub struct DigitDrift(pub DigitFunction);

impl Drift for DigitDrift {
    fn name(&self) -> String {
        format!("digits-{}", self.0.name())
    }

    fn value(&self, x: &Rational, d: usize) -> Result<Vec<Rational>> {
        let mut depth = 0usize;
        let mut den = *x.denom();
        while den % 3 == 0 {
            den /= 3;
            depth += 1;
        }
        if den != 1 {
            return invalid(format!("{x} is not a finite Cantor expansion"));
        }
        let digits = DigitVector::from_rational(x, depth)?;
        let mut v = vec![Rational::zero(); d];
        v[0] = eval(self.0, &digits);
        Ok(v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EventReport {
    pub n: u32,
    /// Largest packing of the graph found: the better of the two below.
    pub graph_count: usize,
    /// Greedy packing of the whole graph net.
    pub greedy_count: usize,
    /// Union of packings of the satellite clusters, which are pairwise
    /// farther than 2^{-n} apart in the base coordinate.
    pub cluster_count: usize,
    /// k_n 2^{nd} n^{-2d} with the recorded k_n.
    pub threshold: f64,
    pub holds: bool,
}

/// Packing count of graph(g + Σ_{m≤n} f_m) over the base net at scale n+1
/// together with all satellites of layers ≤ n, compared with the threshold.
pub fn check_event(
    construction: &WitnessConstruction,
    sample: &WitnessSample,
    drift: &dyn Drift,
    n: u32,
) -> Result<EventReport> {
    let layer = construction
        .layer(n)
        .ok_or_else(|| crate::Error::InvalidInput(format!("layer {n} is not built")))?;
    let d = construction.d;
    let graph_point = |x: &Rational| -> Result<Vec<Rational>> {
        let mut p = vec![*x];
        let w = eval_witness(construction, sample, x, n)?;
        let g = drift.value(x, d)?;
        p.extend(w.iter().zip(&g).map(|(a, b)| a + b));
        Ok(p)
    };
    let mut xs: Vec<Rational> = {
        let net = build_net(&construction.space.descriptor(), n + 1)?;
        (0..net.len()).map(|i| net.points().coord(i, 0)).collect()
    };
    for l in &construction.layers[..n as usize] {
        xs.extend(l.satellite_set().copied());
    }
    xs.sort();
    xs.dedup();
    let coords = xs.iter().map(graph_point).collect::<Result<Vec<_>>>()?.concat();
    let graph = PointSet::from_rationals(d + 1, coords)?;
    let delta = dyadic(n);
    let greedy_count = greedy_packing(&graph, &delta)?.count;

    let mut cluster_count = 0;
    for row in &layer.satellites {
        let coords = row.iter().map(graph_point).collect::<Result<Vec<_>>>()?.concat();
        let cluster = PointSet::from_rationals(d + 1, coords)?;
        cluster_count += packing_count(&cluster, &delta, DEFAULT_EXACT_LIMIT)?.count;
    }
    let graph_count = greedy_count.max(cluster_count);
    let threshold = Rational::from_integer(layer.k_n as i128 * (1i128 << (n as usize * d)))
        / Rational::from_integer((n as i128).pow(2 * d as u32));
    Ok(EventReport {
        n,
        graph_count,
        greedy_count,
        cluster_count,
        threshold: crate::rational::to_f64(&threshold),
        holds: Rational::from_integer(graph_count as i128) >= threshold,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EventSummary {
    pub n: u32,
    pub trials: u64,
    pub holds: u64,
    pub fraction: f64,
    pub ci: (f64, f64),
    /// 1 − 2·2^{-n}
    pub reference: f64,
    pub pass: bool,
}

/// Fraction of sampled witnesses whose graph meets the event at layer n.
pub fn event_trials(
    construction: &WitnessConstruction,
    drift: &dyn Drift,
    n: u32,
    trials: u64,
    seed: u64,
) -> Result<EventSummary> {
    if trials == 0 {
        return invalid("trials must be positive");
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_witness(construction, mix_seed(seed, t));
            check_event(construction, &sample, drift, n).map(|r| r.holds)
        })
        .collect::<Result<Vec<bool>>>()?;
    let holds = results.iter().filter(|h| **h).count() as u64;
    let fraction = holds as f64 / trials as f64;
    let reference = 1.0 - 2.0 * 0.5f64.powi(n as i32);
    Ok(EventSummary {
        n,
        trials,
        holds,
        fraction,
        ci: wilson_interval(holds, trials),
        reference,
        pass: fraction >= reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prevalence::layer::{build_layers, BaseSpace};

    #[test]
    fn threshold_formula() {
        let c = build_layers(BaseSpace::Cantor, 1, 1).unwrap();
        let s = sample_witness(&c, 0);
        let r = check_event(&c, &s, &ZeroDrift, 1).unwrap();
        assert_eq!(r.threshold, c.layers[0].k_n as f64 * 2.0);
    }

    #[test]
    fn digit_drift_values() {
        let x = DigitVector::new(vec![1, 0, 1, 0]).unwrap().to_rational();
        assert_eq!(DigitDrift(DigitFunction::OddDigits).value(&x, 1).unwrap()[0], Rational::new(4, 9));
        assert!(DigitDrift(DigitFunction::OddDigits).value(&Rational::new(1, 2), 1).is_err());
    }

    #[test]
    fn event_at_layer_five() {
        let c = build_layers(BaseSpace::Cantor, 1, 5).unwrap();
        let s = sample_witness(&c, 1);
        let r = check_event(&c, &s, &ZeroDrift, 5).unwrap();
        assert_eq!(r.holds, r.graph_count as f64 >= r.threshold);
        assert!(r.cluster_count <= c.layers[4].satellite_set().count());
        assert!(r.graph_count >= r.greedy_count.max(r.cluster_count));
    }
}
