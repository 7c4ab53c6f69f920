use std::sync::Arc;

use super::{DigitVector, Point, PointSet, SpaceDescriptor};
use crate::error::{invalid, Error, Result};
use crate::rational::Rational;

/// Largest scale index accepted by [`build_net`]; nets grow like 2^n.
pub const MAX_NET_SCALE: u32 = 24;

/// A finite stand-in for a compact space at resolution 2^{-n}.
#[derive(Clone, Debug)]
pub struct ResolutionNet {
    space: SpaceDescriptor,
    scale_index: u32,
    points: PointSet,
    cantor_depth: Option<u32>,
}

impl ResolutionNet {
    pub fn new(space: SpaceDescriptor, scale_index: u32, points: PointSet) -> Self {
        ResolutionNet {
            space,
            scale_index,
            points,
            cantor_depth: None,
        }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn scale_index(&self) -> u32 {
        self.scale_index
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Digit depth of the Cantor factor, when there is one.
    pub fn cantor_depth(&self) -> Option<u32> {
        self.cantor_depth
    }

    /// The `i`-th point in the space's own representation.
    pub fn point(&self, i: usize) -> Point {
        let base_point = |space: &SpaceDescriptor, x: Rational| -> Point {
            match (space, self.cantor_depth) {
                (SpaceDescriptor::TriadicCantor, Some(depth)) => Point::Digits(
                    DigitVector::from_rational(&x, depth as usize).expect("net points are Cantor points"),
                ),
                _ => Point::Real(x),
            }
        };
        match &self.space {
            SpaceDescriptor::FinitePointCloud(_) => Point::Cloud(self.points.cloud_id(i).unwrap()),
            SpaceDescriptor::ProductWithCube { base, .. } => {
                if let Some(id) = self.points.cloud_id(i) {
                    return Point::Product(Box::new(Point::Cloud(id)), self.points.coords(i));
                }
                let c = self.points.coords(i);
                Point::Product(Box::new(base_point(base, c[0])), c[1..].to_vec())
            }
            space => base_point(space, self.points.coord(i, 0)),
        }
    }
}

/// Smallest digit depth j with 3^{-j} ≤ 2^{-n}, plus two digits of margin.
pub fn cantor_depth_for_scale(n: u32) -> u32 {
    let mut j = 0u32;
    while 3u128.pow(j) < 1u128 << n {
        j += 1;
    }
    j + 2
}

pub(crate) fn cantor_points(depth: u32) -> Result<PointSet> {
    if depth > 30 {
        return Err(Error::LimitExceeded {
            what: "Cantor net depth",
            requested: depth as usize,
            limit: 30,
        });
    }
    // numerators over 3^depth in increasing order: binary counting read in base 3
    let coords: Vec<i64> = (0u64..1 << depth)
        .map(|m| {
            let mut v = 0i64;
            for k in (0..depth).rev() {
                v = v * 3 + ((m >> k) & 1) as i64;
            }
            v
        })
        .collect();
    PointSet::lattice(3i128.pow(depth), 1, coords)
}

/// Builds the deterministic 2^{-n}-net of a described space.
pub fn build_net(space: &SpaceDescriptor, n: u32) -> Result<ResolutionNet> {
    if n > MAX_NET_SCALE {
        return Err(Error::LimitExceeded {
            what: "net scale index",
            requested: n as usize,
            limit: MAX_NET_SCALE as usize,
        });
    }
    match space {
        SpaceDescriptor::UnitInterval => {
            let coords: Vec<i64> = (0..=(1i64 << n)).collect();
            Ok(ResolutionNet::new(space.clone(), n, PointSet::lattice(1 << n, 1, coords)?))
        }
        SpaceDescriptor::TriadicCantor => {
            let depth = cantor_depth_for_scale(n);
            let mut net = ResolutionNet::new(space.clone(), n, cantor_points(depth)?);
            net.cantor_depth = Some(depth);
            Ok(net)
        }
        SpaceDescriptor::HarmonicSequence => {
            let kmax = 1i128 << n;
            let mut coords = vec![Rational::from_integer(0)];
            coords.extend((1..=kmax).rev().map(|k| Rational::new(1, k)));
            Ok(ResolutionNet::new(space.clone(), n, PointSet::Exact { dim: 1, coords }))
        }
        SpaceDescriptor::ProductWithCube { base, d } => {
            let base_net = build_net(base, n)?;
            product_net(&base_net, *d, n)
        }
        SpaceDescriptor::FinitePointCloud(cloud) => {
            let ids = (0..cloud.len()).collect();
            Ok(ResolutionNet::new(space.clone(), n, PointSet::cloud(Arc::clone(cloud), ids)?))
        }
    }
}

/// Net of `base × [0,1]^d`: the cube carries the grid of 2^n points per axis
/// with step 1/(2^n − 1), so consecutive points sit just over 2^{-n} apart
/// and a 2^{-n+1}-packing of the cube keeps every other one.
pub fn product_net(base: &ResolutionNet, d: usize, n: u32) -> Result<ResolutionNet> {
    if d == 0 {
        return invalid("cube dimension must be positive");
    }
    if base.scale_index() < n {
        return invalid(format!(
            "base net has scale {} but the product needs scale ≥ {n}",
            base.scale_index()
        ));
    }
    let side = 1usize << n;
    // grid step 1/(2^n − 1); a single point at n = 0
    let step_den = ((1i128 << n) - 1).max(1);
    let cells = side.checked_pow(d as u32).ok_or(Error::Overflow("product net size"))?;
    let total = cells.checked_mul(base.len()).ok_or(Error::Overflow("product net size"))?;
    if total > 1 << 26 {
        return Err(Error::LimitExceeded {
            what: "product net size",
            requested: total,
            limit: 1 << 26,
        });
    }
    let grid = |mut c: usize| -> Vec<i128> {
        let mut z = vec![0i128; d];
        for k in (0..d).rev() {
            z[k] = (c % side) as i128;
            c /= side;
        }
        z
    };
    let space = SpaceDescriptor::product(base.space().clone(), d);
    let points = match base.points() {
        PointSet::Cloud { table, ids, .. } => {
            let mut new_ids = Vec::with_capacity(total);
            let mut extra = Vec::with_capacity(total * d);
            for &id in ids {
                for c in 0..cells {
                    new_ids.push(id);
                    extra.extend(grid(c).into_iter().map(|z| Rational::new(z, step_den)));
                }
            }
            PointSet::Cloud {
                table: Arc::clone(table),
                ids: new_ids,
                extra_dim: d,
                extra,
            }
        }
        PointSet::Lattice { denom, dim, coords } => {
            let l = crate::rational::lcm_checked(*denom, step_den).ok_or(Error::Overflow("lattice"))?;
            let (fb, fz) = ((l / denom) as i64, (l / step_den) as i64);
            let mut out = Vec::with_capacity(total * (dim + d));
            for p in coords.chunks(*dim) {
                for c in 0..cells {
                    out.extend(p.iter().map(|&v| v * fb));
                    out.extend(grid(c).into_iter().map(|z| z as i64 * fz));
                }
            }
            PointSet::lattice(l, dim + d, out)?
        }
        PointSet::Exact { dim, coords } => {
            let mut out = Vec::with_capacity(total * (dim + d));
            for p in coords.chunks(*dim) {
                for c in 0..cells {
                    out.extend_from_slice(p);
                    out.extend(grid(c).into_iter().map(|z| Rational::new(z, step_den)));
                }
            }
            PointSet::Exact { dim: dim + d, coords: out }
        }
    };
    let mut net = ResolutionNet::new(space, n, points);
    net.cantor_depth = base.cantor_depth();
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_spaces::{metric, PointCloud};
    use crate::rational::rat;

    #[test]
    fn interval_net_has_endpoints() {
        let net = build_net(&SpaceDescriptor::UnitInterval, 1).unwrap();
        let xs: Vec<Rational> = (0..net.len()).map(|i| net.points().coord(i, 0)).collect();
        assert_eq!(xs, vec![rat(0, 1), rat(1, 2), rat(1, 1)]);
    }

    #[test]
    fn cantor_net_depth() {
        let net = build_net(&SpaceDescriptor::TriadicCantor, 2).unwrap();
        assert_eq!(net.cantor_depth(), Some(4));
        assert_eq!(net.len(), 16);
        assert_eq!(net.point(1), Point::Digits(DigitVector::new(vec![0, 0, 0, 1]).unwrap()));
        // 3^{-depth} ≤ 2^{-n} for every scale
        for n in 0..20 {
            let j = cantor_depth_for_scale(n);
            assert!(3u128.pow(j) >= 1 << n);
        }
    }

    #[test]
    fn harmonic_truncation() {
        let net = build_net(&SpaceDescriptor::HarmonicSequence, 4).unwrap();
        assert_eq!(net.len(), 17);
        assert_eq!(net.points().coord(0, 0), rat(0, 1));
        assert_eq!(net.points().coord(1, 0), rat(1, 16));
    }

    #[test]
    fn product_sizes() {
        let base = build_net(&SpaceDescriptor::UnitInterval, 2).unwrap();
        assert_eq!(product_net(&base, 1, 2).unwrap().len(), 20);
        let cantor = build_net(&SpaceDescriptor::TriadicCantor, 1).unwrap();
        assert_eq!(product_net(&cantor, 2, 1).unwrap().len(), cantor.len() * 4);
        assert!(product_net(&cantor, 1, 2).is_err());
    }

    #[test]
    fn one_point_base() {
        let cloud = PointCloud::new(vec![vec![rat(0, 1)]]).unwrap();
        let base = build_net(&SpaceDescriptor::cloud(cloud), 2).unwrap();
        let p = product_net(&base, 1, 2).unwrap();
        assert_eq!(p.len(), 4);
        let zs: Vec<Rational> = (0..4).map(|i| p.points().coord(i, 0)).collect();
        assert_eq!(zs, vec![rat(0, 1), rat(1, 3), rat(2, 3), rat(1, 1)]);
        let d = metric(p.space(), &p.point(0), &p.point(3)).unwrap();
        assert_eq!(d.exact(), Some(rat(1, 1)));
    }

    #[test]
    fn net_points_match_metric() {
        let net = build_net(&SpaceDescriptor::product(SpaceDescriptor::TriadicCantor, 1), 2).unwrap();
        for (i, j) in [(0, 5), (7, 40), (3, 3)] {
            let d = metric(net.space(), &net.point(i), &net.point(j)).unwrap();
            assert_eq!(d.squared(), net.points().sq_dist(i, j));
        }
    }
}
