//! Finite point sets with exact distance comparisons.
//!
//! Three storages cover every net in the crate. `Lattice` keeps integer
//! numerators over one common denominator, which makes distance comparisons
//! plain integer arithmetic. `Exact` keeps arbitrary rationals (the harmonic
//! sequence needs this, its denominators have no small common multiple).
//! `Cloud` indexes into an explicit distance table, optionally crossed with
//! extra Euclidean coordinates.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, Signed, ToPrimitive, Zero};

use super::PointCloud;
use crate::error::{invalid, Result};
use crate::rational::{lcm_checked, to_f64, Rational};

/// Largest common denominator accepted by the lattice storage.
pub const LATTICE_DENOM_LIMIT: i128 = 1 << 58;
const LATTICE_COORD_LIMIT: i128 = 1 << 60;
const LATTICE_DIM_LIMIT: usize = 8;

#[derive(Clone, Debug)]
pub enum PointSet {
    Lattice {
        denom: i128,
        dim: usize,
        coords: Vec<i64>,
    },
    Exact {
        dim: usize,
        coords: Vec<Rational>,
    },
    Cloud {
        table: Arc<PointCloud>,
        ids: Vec<usize>,
        extra_dim: usize,
        extra: Vec<Rational>,
    },
}

/// Precomputed form of "distance ≤ δ" for one point set.
#[derive(Clone, Debug)]
pub struct Threshold {
    delta: Rational,
    delta_sq: Rational,
    // lattice: sum of squared numerator gaps S satisfies S <= num/den
    lattice: Option<(u128, u128)>,
}

impl Threshold {
    pub fn delta(&self) -> &Rational {
        &self.delta
    }
}

impl PointSet {
    pub fn lattice(denom: i128, dim: usize, coords: Vec<i64>) -> Result<Self> {
        if !(1..=LATTICE_DENOM_LIMIT).contains(&denom) {
            return invalid(format!("lattice denominator {denom} out of range"));
        }
        if dim == 0 || dim > LATTICE_DIM_LIMIT || !coords.len().is_multiple_of(dim) {
            return invalid(format!("lattice dimension {dim} does not fit {} coordinates", coords.len()));
        }
        if coords.iter().any(|&c| (c as i128).abs() > LATTICE_COORD_LIMIT) {
            return invalid("lattice coordinate too large");
        }
        Ok(PointSet::Lattice { denom, dim, coords })
    }

    /// Builds the tightest storage for rational coordinates given row-major.
    pub fn from_rationals(dim: usize, coords: Vec<Rational>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return invalid("coordinate list does not match the dimension");
        }
        if dim <= LATTICE_DIM_LIMIT {
            let mut l: i128 = 1;
            let mut ok = true;
            for c in &coords {
                match lcm_checked(l, *c.denom()) {
                    Some(v) if v <= LATTICE_DENOM_LIMIT => l = v,
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let mut ints = Vec::with_capacity(coords.len());
                for c in &coords {
                    let v = c.numer() * (l / c.denom());
                    if v.abs() > LATTICE_COORD_LIMIT {
                        ok = false;
                        break;
                    }
                    ints.push(v as i64);
                }
                if ok {
                    return Self::lattice(l, dim, ints);
                }
            }
        }
        Ok(PointSet::Exact { dim, coords })
    }

    pub fn cloud(table: Arc<PointCloud>, ids: Vec<usize>) -> Result<Self> {
        if ids.iter().any(|&i| i >= table.len()) {
            return invalid("cloud index out of range");
        }
        Ok(PointSet::Cloud {
            table,
            ids,
            extra_dim: 0,
            extra: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Lattice { dim, coords, .. } => coords.len() / dim,
            PointSet::Exact { dim, coords } => coords.len() / dim,
            PointSet::Cloud { ids, .. } => ids.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of explicit coordinates (for clouds, the extra cube coordinates).
    pub fn dim(&self) -> usize {
        match self {
            PointSet::Lattice { dim, .. } | PointSet::Exact { dim, .. } => *dim,
            PointSet::Cloud { extra_dim, .. } => *extra_dim,
        }
    }

    /// Exact coordinates of point `i`; clouds only expose their extra part.
    pub fn coords(&self, i: usize) -> Vec<Rational> {
        match self {
            PointSet::Lattice { denom, dim, coords } => coords[i * dim..(i + 1) * dim]
                .iter()
                .map(|&c| Rational::new(c as i128, *denom))
                .collect(),
            PointSet::Exact { dim, coords } => coords[i * dim..(i + 1) * dim].to_vec(),
            PointSet::Cloud {
                extra_dim, extra, ..
            } => extra[i * extra_dim..(i + 1) * extra_dim].to_vec(),
        }
    }

    pub fn coord(&self, i: usize, k: usize) -> Rational {
        match self {
            PointSet::Lattice { denom, dim, coords } => {
                Rational::new(coords[i * dim + k] as i128, *denom)
            }
            PointSet::Exact { dim, coords } => coords[i * dim + k],
            PointSet::Cloud {
                extra_dim, extra, ..
            } => extra[i * extra_dim + k],
        }
    }

    pub fn cloud_id(&self, i: usize) -> Option<usize> {
        match self {
            PointSet::Cloud { ids, .. } => Some(ids[i]),
            _ => None,
        }
    }

    fn lattice_sq(coords: &[i64], dim: usize, i: usize, j: usize) -> u128 {
        let (a, b) = (&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim]);
        let mut s: u128 = 0;
        for k in 0..dim {
            let d = (a[k] as i128 - b[k] as i128).unsigned_abs();
            s += d * d;
        }
        s
    }

    fn exact_sq(coords: &[Rational], dim: usize, i: usize, j: usize) -> Rational {
        let mut s = Rational::zero();
        for k in 0..dim {
            let d = coords[i * dim + k] - coords[j * dim + k];
            let dd = d.checked_mul(&d).expect("squared gap overflows i128 rationals");
            s = s.checked_add(&dd).expect("squared distance overflows i128 rationals");
        }
        s
    }

    /// Exact squared distance.
    pub fn sq_dist(&self, i: usize, j: usize) -> Rational {
        match self {
            PointSet::Lattice { denom, dim, coords } => {
                let s = Self::lattice_sq(coords, *dim, i, j);
                // S / L^2, reduced before building the ratio
                let l2 = (*denom as u128) * (*denom as u128);
                let g = s.gcd(&l2);
                let (n, d) = (s / g, l2 / g);
                match (i128::try_from(n), i128::try_from(d)) {
                    (Ok(n), Ok(d)) => Rational::new(n, d),
                    _ => panic!("squared distance does not fit i128 rationals"),
                }
            }
            PointSet::Exact { dim, coords } => Self::exact_sq(coords, *dim, i, j),
            PointSet::Cloud {
                table,
                ids,
                extra_dim,
                extra,
            } => {
                let d = table.distance(ids[i], ids[j]);
                let mut s = d * d;
                if *extra_dim > 0 {
                    s += Self::exact_sq(extra, *extra_dim, i, j);
                }
                s
            }
        }
    }

    pub fn dist_f64(&self, i: usize, j: usize) -> f64 {
        match self {
            PointSet::Lattice { denom, dim, coords } => {
                (Self::lattice_sq(coords, *dim, i, j) as f64).sqrt() / *denom as f64
            }
            _ => to_f64(&self.sq_dist(i, j)).sqrt(),
        }
    }

    pub fn threshold(&self, delta: &Rational) -> Threshold {
        let delta_sq = delta * delta;
        let lattice = match self {
            PointSet::Lattice { denom, .. } => {
                // delta^2 L^2 = (aL)^2 / b^2 reduced
                let al = BigInt::from(*delta.numer()) * BigInt::from(*denom);
                let b = BigInt::from(*delta.denom());
                let g = al.gcd(&b);
                let (num, den) = (&al / &g, &b / &g);
                let (num, den) = (&num * &num, &den * &den);
                match (num.to_u128(), den.to_u128()) {
                    (Some(n), Some(d)) => Some((n, d)),
                    _ => None,
                }
            }
            _ => None,
        };
        Threshold {
            delta: *delta,
            delta_sq,
            lattice,
        }
    }

    /// True when the distance between `i` and `j` is at most δ.
    pub fn within(&self, i: usize, j: usize, th: &Threshold) -> bool {
        match self {
            PointSet::Lattice { denom, dim, coords } => {
                let s = Self::lattice_sq(coords, *dim, i, j);
                if let Some((num, den)) = th.lattice {
                    if let Some(lhs) = s.checked_mul(den) {
                        return lhs <= num;
                    }
                }
                let l = BigUint::from(*denom as u128);
                let lhs = BigUint::from(s) * BigUint::from(th.delta.denom().unsigned_abs()).pow(2);
                let rhs = BigUint::from(th.delta.numer().unsigned_abs()).pow(2) * &l * &l;
                lhs <= rhs
            }
            PointSet::Exact { dim, coords } => {
                // decide in floating point unless the comparison is close
                let approx: f64 = (0..*dim)
                    .map(|k| to_f64(&coords[i * dim + k]) - to_f64(&coords[j * dim + k]))
                    .map(|g| g * g)
                    .sum();
                let target = to_f64(&th.delta_sq);
                if (approx - target).abs() > 1e-9 * target {
                    approx < target
                } else {
                    self.sq_dist(i, j) <= th.delta_sq
                }
            }
            _ => self.sq_dist(i, j) <= th.delta_sq,
        }
    }

    /// Grid cell of side δ containing point `i`, for spatial hashing.
    pub fn cell(&self, i: usize, delta: &Rational) -> Option<[i64; 4]> {
        let dim = self.dim();
        if dim > 4 || dim == 0 || matches!(self, PointSet::Cloud { .. }) {
            return None;
        }
        let mut key = [0i64; 4];
        match self {
            PointSet::Lattice { denom, coords, .. } => {
                // floor(c / L / (a/b)) = floor(c b / (a L))
                let den = i128::checked_mul(*delta.numer(), *denom)?;
                for k in 0..dim {
                    let num = (coords[i * dim + k] as i128).checked_mul(*delta.denom())?;
                    key[k] = Integer::div_floor(&num, &den).to_i64()?;
                }
            }
            PointSet::Exact { coords, .. } => {
                for k in 0..dim {
                    key[k] = (coords[i * dim + k] / delta).floor().to_integer().to_i64()?;
                }
            }
            PointSet::Cloud { .. } => return None,
        }
        Some(key)
    }

    /// Point indices sorted lexicographically by exact coordinates.
    pub fn lex_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        match self {
            PointSet::Lattice { dim, coords, .. } => {
                idx.sort_by(|&a, &b| coords[a * dim..(a + 1) * dim].cmp(&coords[b * dim..(b + 1) * dim]))
            }
            PointSet::Exact { dim, coords } => {
                idx.sort_by(|&a, &b| coords[a * dim..(a + 1) * dim].cmp(&coords[b * dim..(b + 1) * dim]))
            }
            PointSet::Cloud {
                ids,
                extra_dim,
                extra,
                ..
            } => idx.sort_by(|&a, &b| {
                ids[a].cmp(&ids[b]).then_with(|| {
                    extra[a * extra_dim..(a + 1) * extra_dim]
                        .cmp(&extra[b * extra_dim..(b + 1) * extra_dim])
                })
            }),
        }
        idx
    }

    pub fn subset(&self, indices: &[usize]) -> PointSet {
        match self {
            PointSet::Lattice { denom, dim, coords } => PointSet::Lattice {
                denom: *denom,
                dim: *dim,
                coords: indices
                    .iter()
                    .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
                    .collect(),
            },
            PointSet::Exact { dim, coords } => PointSet::Exact {
                dim: *dim,
                coords: indices
                    .iter()
                    .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
                    .collect(),
            },
            PointSet::Cloud {
                table,
                ids,
                extra_dim,
                extra,
            } => PointSet::Cloud {
                table: Arc::clone(table),
                ids: indices.iter().map(|&i| ids[i]).collect(),
                extra_dim: *extra_dim,
                extra: indices
                    .iter()
                    .flat_map(|&i| extra[i * extra_dim..(i + 1) * extra_dim].iter().copied())
                    .collect(),
            },
        }
    }

    /// True when two points coincide.
    pub fn same_point(&self, i: usize, j: usize) -> bool {
        self.sq_dist(i, j).is_zero()
    }

    /// Index pairs of coincident points, found by sorting.
    pub fn has_duplicates(&self) -> bool {
        let order = self.lex_order();
        order.windows(2).any(|w| self.compare(w[0], w[1]) == Ordering::Equal)
    }

    fn compare(&self, a: usize, b: usize) -> Ordering {
        match self {
            PointSet::Lattice { dim, coords, .. } => {
                coords[a * dim..(a + 1) * dim].cmp(&coords[b * dim..(b + 1) * dim])
            }
            PointSet::Exact { dim, coords } => {
                coords[a * dim..(a + 1) * dim].cmp(&coords[b * dim..(b + 1) * dim])
            }
            PointSet::Cloud { .. } => {
                if self.same_point(a, b) {
                    Ordering::Equal
                } else {
                    a.cmp(&b)
                }
            }
        }
    }

    /// Largest pairwise distance, exact, as a squared value.
    pub fn diameter_sq(&self) -> Rational {
        let n = self.len();
        if n < 2 {
            return Rational::zero();
        }
        if self.dim() == 1 && !matches!(self, PointSet::Cloud { .. }) {
            let order = self.lex_order();
            return self.sq_dist(order[0], order[n - 1]);
        }
        let mut best = Rational::zero();
        for i in 0..n {
            for j in i + 1..n {
                let d = self.sq_dist(i, j);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn is_negative_free(&self) -> bool {
        match self {
            PointSet::Lattice { coords, .. } => coords.iter().all(|&c| c >= 0),
            PointSet::Exact { coords, .. } => coords.iter().all(|c| !c.is_negative()),
            PointSet::Cloud { extra, .. } => extra.iter().all(|c| !c.is_negative()),
        }
    }
}
