use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::layer::WitnessConstruction;
use crate::error::{invalid, Result};
use crate::rational::Rational;

/// One draw of every X^n_i, stored as grid indices per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSample {
    pub seed: u64,
    /// values[n-1][i][c] is the grid index of coordinate c of X^n_i.
    pub values: Vec<Vec<Vec<u32>>>,
}

impl WitnessSample {
    pub fn index(&self, n: u32, i: usize) -> &[u32] {
        &self.values[n as usize - 1][i]
    }
}

/// Draws X^n_i uniformly from S_n, independently over n, i and coordinates.
pub fn sample_witness(construction: &WitnessConstruction, seed: u64) -> WitnessSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = construction
        .layers
        .iter()
        .map(|layer| {
            (0..layer.ell_n)
                .map(|_| {
                    (0..layer.d)
                        .map(|_| rng.random_range(0..=layer.grid_max_index))
                        .collect()
                })
                .collect()
        })
        .collect();
    WitnessSample { seed, values }
}

/// Σ_{n ≤ depth} f_n(x), where f_n(x) = X^n_i (1 − |x − s|/r_n)^+ for the
/// satellite s = x^n_{k,i} within bump radius of x, and 0 if there is none.
pub fn eval_witness(
    construction: &WitnessConstruction,
    sample: &WitnessSample,
    x: &Rational,
    depth: u32,
) -> Result<Vec<Rational>> {
    if depth > construction.depth() || depth as usize > sample.values.len() {
        return invalid(format!("only {} layers are built", construction.depth()));
    }
    let mut out = vec![Rational::from_integer(0); construction.d];
    for layer in &construction.layers[..depth as usize] {
        if let Some((i, dist)) = layer.nearest_in_range(x) {
            let factor = Rational::from_integer(1) - dist / layer.bump_radius;
            for (o, v) in out.iter_mut().zip(layer.grid_value(sample.index(layer.n, i))) {
                *o += v * factor;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prevalence::layer::{build_layers, BaseSpace};

    #[test]
    fn deterministic_and_trivial_layers() {
        let c = build_layers(BaseSpace::Cantor, 1, 5).unwrap();
        let a = sample_witness(&c, 9);
        assert_eq!(a, sample_witness(&c, 9));
        assert_ne!(a, sample_witness(&c, 10));
        // ⌊8/9⌋ = 0, so layer 3 has the single grid point 0
        assert!(a.values[2].iter().all(|v| v == &vec![0]));
    }

    #[test]
    fn satellites_carry_their_values() {
        let c = build_layers(BaseSpace::Cantor, 1, 6).unwrap();
        let s = sample_witness(&c, 3);
        for layer in &c.layers {
            for row in &layer.satellites {
                for (i, x) in row.iter().enumerate() {
                    let below = eval_witness(&c, &s, x, layer.n - 1).unwrap();
                    let upto = eval_witness(&c, &s, x, layer.n).unwrap();
                    assert_eq!(upto[0] - below[0], layer.grid_value(s.index(layer.n, i))[0]);
                    // later layers vanish on earlier satellites
                    let all = eval_witness(&c, &s, x, c.depth()).unwrap();
                    assert_eq!(all, upto);
                }
            }
        }
    }

    #[test]
    fn zero_frequency() {
        let c = build_layers(BaseSpace::Cantor, 1, 5).unwrap();
        let zeros = (0..10_000u64)
            .filter(|&t| sample_witness(&c, crate::stats::mix_seed(77, t)).index(5, 0)[0] == 0)
            .count();
        let freq = zeros as f64 / 10_000.0;
        assert!((freq - 0.5).abs() < 0.02, "{freq}");
    }
}
