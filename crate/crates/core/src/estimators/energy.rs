//! Discrete s-energies and the energy-dimension profile.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::metric_spaces::{build_net, PointSet, SpaceDescriptor};
use crate::rational::{to_f64, Rational};

/// Probability measure on finitely many distinct points.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    points: PointSet,
    weights: Vec<Rational>,
}

impl DiscreteMeasure {
    pub fn new(points: PointSet, weights: Vec<Rational>) -> Result<Self> {
        if points.len() != weights.len() {
            return invalid("one weight per atom is required");
        }
        if points.is_empty() {
            return invalid("a measure needs at least one atom");
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return invalid("weights must be positive");
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::from_integer(1) {
            return invalid(format!("weights sum to {total}, not 1"));
        }
        if points.has_duplicates() {
            return invalid("atoms must be distinct");
        }
        Ok(DiscreteMeasure { points, weights })
    }

    pub fn uniform(points: PointSet) -> Result<Self> {
        let n = points.len() as i128;
        if n == 0 {
            return invalid("a measure needs at least one atom");
        }
        Self::new(points, vec![Rational::new(1, n); n as usize])
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Σ_{x≠y} w_x w_y ρ(x,y)^{-s} for every s of the grid at once.
pub fn energies_on_grid(measure: &DiscreteMeasure, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.iter().any(|s| s.is_nan() || *s < 0.0) {
        return invalid("energy exponents must be nonnegative");
    }
    let w: Vec<f64> = measure.weights.iter().map(to_f64).collect();
    let n = w.len();
    let ps = &measure.points;
    // per-row sums are added in row order so the result does not depend on scheduling
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![0.0f64; grid.len()];
            for j in i + 1..n {
                let ln_d = ps.dist_f64(i, j).ln();
                let ww = 2.0 * w[i] * w[j];
                for (a, s) in acc.iter_mut().zip(grid) {
                    *a += ww * (-s * ln_d).exp();
                }
            }
            acc
        })
        .collect();
    let mut sums = vec![0.0f64; grid.len()];
    for row in rows {
        for (x, y) in sums.iter_mut().zip(row) {
            *x += y;
        }
    }
    Ok(sums)
}

/// Off-diagonal discrete s-energy.
pub fn discrete_energy(measure: &DiscreteMeasure, s: f64) -> Result<f64> {
    Ok(energies_on_grid(measure, &[s])?[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileFlag {
    /// The estimate sits between two grid values.
    Interior,
    /// Every grid exponent diverges; the estimate is the lower boundary 0.
    AllDivergent,
    /// Every grid exponent stays bounded; the estimate is the top of the grid.
    AllBounded,
    /// No off-diagonal pairs at all (single atoms); the estimate is 0.
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub s: f64,
    pub energies: Vec<f64>,
    pub divergent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyProfile {
    pub estimate: f64,
    pub bracket: (f64, f64),
    pub flag: ProfileFlag,
    pub rows: Vec<ProfileRow>,
}

/// Growth test on a sequence of energies across depths.
///
/// The sequence is divergent when its increments keep growing: the last
/// (up to three) ratios of successive increments all exceed 1. A bounded
/// energy has geometrically shrinking increments, an unbounded one has
/// increments that are constant or growing.
pub fn is_divergent(energies: &[f64]) -> bool {
    let inc: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    if inc.len() < 2 {
        return false;
    }
    let ratios = inc.len() - 1;
    let start = ratios.saturating_sub(3);
    (start..ratios).all(|k| inc[k] > 0.0 && inc[k + 1] / inc[k] > 1.0)
}

/// Largest grid exponent below the first divergent one.
pub fn energy_dimension_profile(family: &[DiscreteMeasure], grid: &[f64]) -> Result<EnergyProfile> {
    if family.len() < 4 {
        return invalid(format!("need at least 4 depths, got {}", family.len()));
    }
    if grid.len() < 5 {
        return invalid(format!("need at least 5 grid values, got {}", grid.len()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] <= 0.0 {
        return invalid("grid must be positive and strictly increasing");
    }
    let per_depth = family
        .iter()
        .map(|m| energies_on_grid(m, grid))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ProfileRow> = grid
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let energies: Vec<f64> = per_depth.iter().map(|e| e[k]).collect();
            let divergent = is_divergent(&energies);
            ProfileRow { s, energies, divergent }
        })
        .collect();
    let last = *grid.last().unwrap();
    if per_depth.iter().all(|e| e.iter().all(|v| v.is_zero())) {
        return Ok(EnergyProfile {
            estimate: 0.0,
            bracket: (0.0, grid[0]),
            flag: ProfileFlag::Degenerate,
            rows,
        });
    }
    let (estimate, bracket, flag) = match rows.iter().position(|r| r.divergent) {
        Some(0) => (0.0, (0.0, grid[0]), ProfileFlag::AllDivergent),
        Some(k) => (grid[k - 1], (grid[k - 1], grid[k]), ProfileFlag::Interior),
        None => (last, (last, f64::INFINITY), ProfileFlag::AllBounded),
    };
    Ok(EnergyProfile {
        estimate,
        bracket,
        flag,
        rows,
    })
}

/// Uniform measure on the depth-D points of a base space: the 2^D Cantor
/// points of digit depth D, the dyadics k/2^D, or the harmonic net at scale D.
pub fn natural_measure(space: &SpaceDescriptor, depth: u32) -> Result<DiscreteMeasure> {
    let points = match space {
        SpaceDescriptor::TriadicCantor => crate::metric_spaces::net::cantor_points(depth)?,
        SpaceDescriptor::UnitInterval | SpaceDescriptor::HarmonicSequence => build_net(space, depth)?.points().clone(),
        other => {
            return Err(Error::Unsupported(format!("no natural measure family for {}", other.name())));
        }
    };
    DiscreteMeasure::uniform(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn measure(xs: &[Rational]) -> DiscreteMeasure {
        DiscreteMeasure::uniform(PointSet::from_rationals(1, xs.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn two_atoms() {
        let m = measure(&[rat(0, 1), rat(1, 1)]);
        for s in [0.1, 1.0, 3.0] {
            assert!((discrete_energy(&m, s).unwrap() - 0.5).abs() < 1e-15);
        }
        let m = measure(&[rat(0, 1), rat(1, 2)]);
        assert!((discrete_energy(&m, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coincident_atoms_rejected() {
        let ps = PointSet::from_rationals(1, vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(DiscreteMeasure::uniform(ps).is_err());
        let ps = PointSet::from_rationals(1, vec![rat(0, 1), rat(1, 2)]).unwrap();
        assert!(DiscreteMeasure::new(ps, vec![rat(1, 2), rat(1, 3)]).is_err());
    }

    #[test]
    fn divergence_rule() {
        assert!(is_divergent(&[1.0, 2.0, 3.1, 4.3, 5.6]));
        assert!(!is_divergent(&[1.0, 1.5, 1.75, 1.875, 1.9375]));
        assert!(!is_divergent(&[0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn natural_cantor_profile_brackets_the_dimension() {
        let family: Vec<_> = (4..=10)
            .map(|d| natural_measure(&SpaceDescriptor::TriadicCantor, d).unwrap())
            .collect();
        let grid: Vec<f64> = (1..=10).map(|k| k as f64 * 0.1).collect();
        let p = energy_dimension_profile(&family, &grid).unwrap();
        assert_eq!(p.flag, ProfileFlag::Interior);
        assert!(p.bracket.0 <= 0.631 && 0.631 <= p.bracket.1 + 1e-12, "{:?}", p.bracket);
    }

    #[test]
    fn single_atoms_are_degenerate() {
        let fam: Vec<_> = (0..4).map(|_| measure(&[rat(1, 3)])).collect();
        let p = energy_dimension_profile(&fam, &[0.2, 0.4, 0.6, 0.8, 1.0]).unwrap();
        assert_eq!(p.flag, ProfileFlag::Degenerate);
        assert_eq!(p.estimate, 0.0);
    }
}
