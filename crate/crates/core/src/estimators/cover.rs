//! Covers: Hausdorff content sums and localized box estimates.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::boxdim::{box_dim_estimate, ScaleSeries, Variant};
use super::packing::greedy_packing;
use crate::error::{invalid, Result};
use crate::metric_spaces::{Distance, PointSet};
use crate::rational::{dyadic, Rational};

#[derive(Clone, Debug)]
pub struct CoverPiece {
    points: PointSet,
    diameter: Distance,
}

impl CoverPiece {
    pub fn new(points: PointSet) -> Self {
        let diameter = Distance::from_squared(points.diameter_sq());
        CoverPiece { points, diameter }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// Largest pairwise distance of the piece's points.
    pub fn diameter(&self) -> Distance {
        self.diameter
    }
}

#[derive(Clone, Debug, Default)]
pub struct CoverFamily {
    pieces: Vec<CoverPiece>,
}

impl CoverFamily {
    pub fn new(pieces: Vec<PointSet>) -> Self {
        CoverFamily {
            pieces: pieces.into_iter().map(CoverPiece::new).collect(),
        }
    }

    /// Splits a point set by a key, one piece per key in increasing order.
    pub fn partition<F: Fn(usize) -> usize>(points: &PointSet, parts: usize, key: F) -> Self {
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); parts];
        for i in 0..points.len() {
            buckets[key(i).min(parts - 1)].push(i);
        }
        CoverFamily::new(buckets.iter().map(|b| points.subset(b)).collect())
    }

    /// The 2^m level-m cylinders of the middle-thirds set, each represented
    /// by its two extreme points, so each has diameter 3^{-m}.
    pub fn middle_thirds_cylinders(m: u32) -> Result<Self> {
        if m > 20 {
            return invalid("cylinder level above 20");
        }
        let scale = 3i128.pow(m);
        let pieces = (0u64..1 << m)
            .map(|h| {
                let mut left = 0i128;
                for k in (0..m).rev() {
                    left = left * 3 + 2 * ((h >> k) & 1) as i128;
                }
                PointSet::from_rationals(1, vec![Rational::new(left, scale), Rational::new(left + 1, scale)])
                    .expect("small lattice")
            })
            .collect();
        Ok(CoverFamily::new(pieces))
    }

    pub fn pieces(&self) -> &[CoverPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// Σ (diam A_i)^s over the pieces of the cover.
pub fn hausdorff_content_upper(cover: &CoverFamily, s: f64) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return invalid(format!("exponent {s} must be nonnegative"));
    }
    if cover.is_empty() {
        return invalid("cover has no pieces");
    }
    Ok(cover
        .pieces
        .iter()
        .map(|p| {
            let d = p.diameter.to_f64();
            if d == 0.0 && s > 0.0 {
                0.0
            } else {
                d.powf(s)
            }
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedEstimate {
    /// Minimum over pieces of the full-fit packing slope.
    pub value: f64,
    pub per_piece: Vec<Option<f64>>,
    pub skipped_empty: usize,
}

/// Minimum over non-empty pieces of the full-fit box estimate of the piece.
pub fn localized_upper_box(cover: &CoverFamily, scales: RangeInclusive<u32>) -> Result<LocalizedEstimate> {
    if scales.clone().count() < 3 {
        return invalid("need at least 3 scales");
    }
    let per_piece: Vec<Option<f64>> = cover
        .pieces
        .par_iter()
        .map(|p| -> Result<Option<f64>> {
            if p.points.is_empty() {
                return Ok(None);
            }
            let entries = scales
                .clone()
                .map(|n| Ok((n, greedy_packing(&p.points, &dyadic(n))?.count as u64)))
                .collect::<Result<Vec<_>>>()?;
            let est = box_dim_estimate(&ScaleSeries::new(2, entries)?, Variant::FullFit)?;
            Ok(Some(est.slope))
        })
        .collect::<Result<_>>()?;
    let skipped_empty = per_piece.iter().filter(|p| p.is_none()).count();
    let value = per_piece.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    if !value.is_finite() {
        return invalid("every cover piece is empty");
    }
    Ok(LocalizedEstimate {
        value,
        per_piece,
        skipped_empty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn unit_piece() {
        let c = CoverFamily::new(vec![PointSet::from_rationals(1, vec![rat(0, 1), rat(1, 1)]).unwrap()]);
        assert_eq!(hausdorff_content_upper(&c, 0.5).unwrap(), 1.0);
        assert!(hausdorff_content_upper(&c, -1.0).is_err());
    }

    #[test]
    fn triadic_cover_at_critical_exponent() {
        let s = 2f64.ln() / 3f64.ln();
        let mut last = f64::INFINITY;
        for m in 0..=10 {
            let c = CoverFamily::middle_thirds_cylinders(m).unwrap();
            assert_eq!(c.pieces()[0].diameter().exact(), Some(Rational::new(1, 3i128.pow(m))));
            let v = hausdorff_content_upper(&c, s).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "m={m} {v}");
            let w = hausdorff_content_upper(&c, 0.7).unwrap();
            assert!(w < last || m == 0);
            last = w;
        }
    }

    #[test]
    fn empty_pieces_are_counted() {
        let ps = PointSet::from_rationals(1, (0..=64).map(|k| rat(k, 64)).collect()).unwrap();
        let c = CoverFamily::partition(&ps, 3, |i| if i <= 32 { 0 } else { 1 });
        let r = localized_upper_box(&c, 1..=4).unwrap();
        assert_eq!(r.skipped_empty, 1);
        assert!((r.value - 1.0).abs() < 0.1);
    }
}
