use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::NestedFamily;
use crate::rational::{dyadic, Rational};

/// One draw of X_{i₁…i_n} ∈ {0, 2^{-n}}^d for every piece of every level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomFieldSample {
    pub seed: u64,
    pub d: usize,
    /// bits[n-1][piece][c]: coordinate c of the piece's value is bit·2^{-n}.
    pub bits: Vec<Vec<Vec<u8>>>,
}

pub fn sample_field(family: &NestedFamily, d: usize, seed: u64) -> RandomFieldSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = (1..=family.depth())
        .map(|n| {
            (0..family.pieces(n).len())
                .map(|_| (0..d).map(|_| rng.random_range(0..=1u8)).collect())
                .collect()
        })
        .collect();
    RandomFieldSample { seed, d, bits }
}

impl RandomFieldSample {
    /// Σ_{n ≤ levels} f_n on the given leaf.
    pub fn value(&self, family: &NestedFamily, leaf: usize, levels: u32) -> Vec<Rational> {
        let mut out = vec![Rational::from_integer(0); self.d];
        for (n, piece) in family.path(leaf).into_iter().enumerate().take(levels as usize) {
            let step = dyadic(n as u32 + 1);
            for (o, b) in out.iter_mut().zip(&self.bits[n][piece]) {
                if *b == 1 {
                    *o += step;
                }
            }
        }
        out
    }

    /// Σ_{n > from} (f_n(a) − f_n(b)) over the family levels.
    pub fn difference(&self, family: &NestedFamily, a: usize, b: usize, from: u32) -> Vec<Rational> {
        let (pa, pb) = (family.path(a), family.path(b));
        let mut out = vec![Rational::from_integer(0); self.d];
        for n in from as usize..pa.len() {
            let step = dyadic(n as u32 + 1);
            for (c, o) in out.iter_mut().enumerate() {
                let diff = self.bits[n][pa[n]][c] as i128 - self.bits[n][pb[n]][c] as i128;
                *o += step * Rational::from_integer(diff);
            }
        }
        out
    }
}
