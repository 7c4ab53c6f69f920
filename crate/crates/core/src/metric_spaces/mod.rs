//! Compact metric spaces with exact point representations.

pub(crate) mod net;
mod points;

pub use net::{build_net, cantor_depth_for_scale, product_net, ResolutionNet};
pub use points::{PointSet, Threshold, LATTICE_DENOM_LIMIT};

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::rational::{exact_sqrt, to_f64, Rational};

/// An explicit finite metric space given by its distance table.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    distances: Vec<Vec<Rational>>,
}

impl PointCloud {
    /// Validates symmetry, the zero diagonal, positivity off the diagonal and
    /// the triangle inequality.
    pub fn new(distances: Vec<Vec<Rational>>) -> Result<Self> {
        let n = distances.len();
        if n == 0 {
            return invalid("point cloud needs at least one point");
        }
        for (i, row) in distances.iter().enumerate() {
            if row.len() != n {
                return invalid(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            if !row[i].is_zero() {
                return invalid(format!("diagonal entry {i} is not zero"));
            }
            for j in 0..n {
                if row[j] != distances[j][i] {
                    return invalid(format!("table is not symmetric at ({i}, {j})"));
                }
                if i != j && !row[j].is_positive() {
                    return invalid(format!("distance ({i}, {j}) must be positive"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if distances[i][k] > distances[i][j] + distances[j][k] {
                        return invalid(format!("triangle inequality fails for ({i}, {j}, {k})"));
                    }
                }
            }
        }
        Ok(PointCloud { distances })
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> Rational {
        self.distances[i][j]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceDescriptor {
    UnitInterval,
    /// Digits in {0,1} base 3, the middle-thirds set scaled by 1/2.
    TriadicCantor,
    /// {0} ∪ {1/k : k ≥ 1}.
    HarmonicSequence,
    ProductWithCube {
        base: Box<SpaceDescriptor>,
        d: usize,
    },
    FinitePointCloud(Arc<PointCloud>),
}

impl SpaceDescriptor {
    pub fn product(base: SpaceDescriptor, d: usize) -> Self {
        SpaceDescriptor::ProductWithCube {
            base: Box::new(base),
            d,
        }
    }

    pub fn cloud(cloud: PointCloud) -> Self {
        SpaceDescriptor::FinitePointCloud(Arc::new(cloud))
    }

    pub fn name(&self) -> String {
        match self {
            SpaceDescriptor::UnitInterval => "interval".into(),
            SpaceDescriptor::TriadicCantor => "cantor".into(),
            SpaceDescriptor::HarmonicSequence => "harmonic".into(),
            SpaceDescriptor::ProductWithCube { base, d } => format!("{}x[0,1]^{d}", base.name()),
            SpaceDescriptor::FinitePointCloud(c) => format!("cloud({})", c.len()),
        }
    }
}

/// A finite {0,1} digit string read as Σ a_i 3^{-i}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitVector {
    digits: Vec<u8>,
}

/// Maximum digit depth that still fits exact i128 arithmetic comfortably.
pub const MAX_DIGIT_DEPTH: usize = 60;

impl DigitVector {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d > 1) {
            return invalid(format!("digit {d} is not in {{0,1}}"));
        }
        if digits.len() > MAX_DIGIT_DEPTH {
            return Err(Error::LimitExceeded {
                what: "digit depth",
                requested: digits.len(),
                limit: MAX_DIGIT_DEPTH,
            });
        }
        Ok(DigitVector { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// Digit `i` counted from 1, zero beyond the stored depth.
    pub fn digit(&self, i: usize) -> u8 {
        if i == 0 || i > self.digits.len() {
            0
        } else {
            self.digits[i - 1]
        }
    }

    /// Numerator of the encoded point over 3^depth.
    pub fn numerator(&self) -> i128 {
        self.digits.iter().fold(0i128, |acc, &d| acc * 3 + d as i128)
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.numerator(), 3i128.pow(self.depth() as u32))
    }

    /// Inverse of [`DigitVector::numerator`] at a fixed depth.
    pub fn from_numerator(mut numer: i128, depth: usize) -> Result<Self> {
        if depth > MAX_DIGIT_DEPTH {
            return invalid("digit depth too large");
        }
        let mut digits = vec![0u8; depth];
        for k in (0..depth).rev() {
            let r = numer.rem_euclid(3);
            if r > 1 {
                return invalid("value has a digit 2 and is not a Cantor point");
            }
            digits[k] = r as u8;
            numer = numer.div_euclid(3);
        }
        if numer != 0 {
            return invalid("value does not fit the requested depth");
        }
        Ok(DigitVector { digits })
    }

    /// Digits of an exact rational with a power-of-three denominator.
    pub fn from_rational(x: &Rational, depth: usize) -> Result<Self> {
        let scale = 3i128
            .checked_pow(depth as u32)
            .ok_or(Error::Overflow("digit depth"))?;
        let scaled = x * Rational::from_integer(scale);
        if !scaled.is_integer() {
            return invalid(format!("{x} is not a finite triadic expansion of depth {depth}"));
        }
        Self::from_numerator(scaled.to_integer(), depth)
    }

    /// The same point in the standard middle-thirds set (digits doubled).
    pub fn to_middle_thirds(&self) -> Rational {
        self.to_rational() * Rational::from_integer(2)
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A point of one of the described spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Real(Rational),
    Digits(DigitVector),
    Product(Box<Point>, Vec<Rational>),
    Cloud(usize),
}

/// An exact distance, kept squared so that products stay rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Distance {
    squared: Rational,
}

impl Distance {
    pub fn from_squared(squared: Rational) -> Self {
        Distance { squared }
    }

    pub fn squared(&self) -> Rational {
        self.squared
    }

    /// The distance itself when it is rational.
    pub fn exact(&self) -> Option<Rational> {
        exact_sqrt(&self.squared)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.squared).sqrt()
    }

    pub fn exceeds(&self, delta: &Rational) -> bool {
        self.squared > delta * delta
    }
}

fn check_member(space: &SpaceDescriptor, p: &Point) -> Result<()> {
    match (space, p) {
        (SpaceDescriptor::UnitInterval, Point::Real(x)) => {
            if x.is_negative() || *x > Rational::from_integer(1) {
                return invalid(format!("{x} is outside [0,1]"));
            }
        }
        (SpaceDescriptor::HarmonicSequence, Point::Real(x)) => {
            if !(x.is_zero() || (*x.numer() == 1 && x.is_positive())) {
                return invalid(format!("{x} is not 0 or 1/k"));
            }
        }
        (SpaceDescriptor::TriadicCantor, Point::Digits(_)) => {}
        (SpaceDescriptor::ProductWithCube { base, d }, Point::Product(b, z)) => {
            if z.len() != *d {
                return invalid(format!("cube part has {} coordinates, expected {d}", z.len()));
            }
            check_member(base, b)?;
        }
        (SpaceDescriptor::FinitePointCloud(c), Point::Cloud(i)) => {
            if *i >= c.len() {
                return invalid(format!("cloud index {i} out of range"));
            }
        }
        _ => return invalid(format!("point {p:?} does not belong to {}", space.name())),
    }
    Ok(())
}

/// Exact distance between two points of `space`.
pub fn metric(space: &SpaceDescriptor, x: &Point, y: &Point) -> Result<Distance> {
    check_member(space, x)?;
    check_member(space, y)?;
    Ok(Distance::from_squared(squared_distance(space, x, y)))
}

fn squared_distance(space: &SpaceDescriptor, x: &Point, y: &Point) -> Rational {
    match (space, x, y) {
        (_, Point::Real(a), Point::Real(b)) => (a - b) * (a - b),
        (_, Point::Digits(a), Point::Digits(b)) => {
            let d = a.to_rational() - b.to_rational();
            d * d
        }
        (SpaceDescriptor::ProductWithCube { base, .. }, Point::Product(a, za), Point::Product(b, zb)) => {
            let cube: Rational = za.iter().zip(zb).map(|(u, v)| (u - v) * (u - v)).sum();
            squared_distance(base, a, b) + cube
        }
        (SpaceDescriptor::FinitePointCloud(c), Point::Cloud(i), Point::Cloud(j)) => {
            let d = c.distance(*i, *j);
            d * d
        }
        _ => unreachable!("membership was checked"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn digits(d: &[u8]) -> Point {
        Point::Digits(DigitVector::new(d.to_vec()).unwrap())
    }

    #[test]
    fn cantor_distance() {
        let d = metric(&SpaceDescriptor::TriadicCantor, &digits(&[1, 0]), &digits(&[0, 1])).unwrap();
        assert_eq!(d.exact(), Some(rat(2, 9)));
    }

    #[test]
    fn product_distance() {
        let space = SpaceDescriptor::product(SpaceDescriptor::UnitInterval, 1);
        let x = Point::Product(Box::new(Point::Real(rat(1, 3))), vec![rat(0, 1)]);
        let y = Point::Product(Box::new(Point::Real(rat(1, 3))), vec![rat(1, 1)]);
        assert_eq!(metric(&space, &x, &y).unwrap().exact(), Some(rat(1, 1)));
    }

    #[test]
    fn harmonic_distance() {
        let d = metric(
            &SpaceDescriptor::HarmonicSequence,
            &Point::Real(rat(1, 2)),
            &Point::Real(rat(1, 3)),
        )
        .unwrap();
        assert_eq!(d.exact(), Some(rat(1, 6)));
    }

    #[test]
    fn mixed_representations_rejected() {
        let r = metric(&SpaceDescriptor::TriadicCantor, &digits(&[1]), &Point::Real(rat(1, 3)));
        assert!(r.is_err());
        assert!(metric(&SpaceDescriptor::HarmonicSequence, &Point::Real(rat(2, 3)), &Point::Real(rat(0, 1))).is_err());
    }

    #[test]
    fn digit_round_trip_and_doubling() {
        let v = DigitVector::new(vec![1, 0, 1, 1]).unwrap();
        assert_eq!(v.to_rational(), rat(27 + 3 + 1, 81));
        assert_eq!(DigitVector::from_rational(&v.to_rational(), 4).unwrap(), v);
        assert_eq!(v.to_middle_thirds(), rat(62, 81));
        assert!(DigitVector::from_rational(&rat(2, 3), 1).is_err());
        assert!(DigitVector::new(vec![2]).is_err());
    }

    #[test]
    fn cloud_validation() {
        let ok = PointCloud::new(vec![
            vec![rat(0, 1), rat(1, 1), rat(2, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
        ]);
        assert!(ok.is_ok());
        let bad = PointCloud::new(vec![
            vec![rat(0, 1), rat(1, 1), rat(3, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(3, 1), rat(1, 1), rat(0, 1)],
        ]);
        assert!(bad.is_err());
    }
}
