use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::estimators::{packing_count, PackingMethod, DEFAULT_EXACT_LIMIT};
use crate::metric_spaces::{build_net, SpaceDescriptor};
use crate::rational::{dyadic, Rational};

/// Deepest digit (or dyadic) level used for satellites.
const SATELLITE_DEPTH_LIMIT: u32 = 34;

/// Base spaces the construction supports: both are perfect subsets of [0,1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseSpace {
    Cantor,
    Interval,
}

impl BaseSpace {
    pub fn from_descriptor(space: &SpaceDescriptor) -> Result<Self> {
        match space {
            SpaceDescriptor::TriadicCantor => Ok(BaseSpace::Cantor),
            SpaceDescriptor::UnitInterval => Ok(BaseSpace::Interval),
            other => Err(Error::Unsupported(format!(
                "the layered construction needs the Cantor set or the unit interval, not {}",
                other.name()
            ))),
        }
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        match self {
            BaseSpace::Cantor => SpaceDescriptor::TriadicCantor,
            BaseSpace::Interval => SpaceDescriptor::UnitInterval,
        }
    }

    /// Radix of the exact point lattice: 3 for Cantor digits, 2 for dyadics.
    pub fn radix(&self) -> i128 {
        match self {
            BaseSpace::Cantor => 3,
            BaseSpace::Interval => 2,
        }
    }
}

/// Everything layer n of the construction needs.
#[derive(Clone, Debug)]
pub struct LayerSpec {
    pub n: u32,
    pub d: usize,
    /// ⌊2^n n^{-2}⌋, so each coordinate of S_n has this many steps.
    pub grid_max_index: u32,
    /// 2^{-n+3}
    pub grid_step: Rational,
    pub s_n: u64,
    pub k_n: usize,
    pub k_method: PackingMethod,
    pub m_n: u64,
    pub ell_n: u64,
    pub packing_points: Vec<Rational>,
    pub eps_n: Rational,
    /// satellites[k][i] sits within eps_n of packing_points[k]
    pub satellites: Vec<Vec<Rational>>,
    pub bump_radius: Rational,
    sorted: Vec<(Rational, usize)>,
}

impl LayerSpec {
    /// All points of S_n, coordinates as grid multiples.
    pub fn grid(&self) -> Vec<Vec<Rational>> {
        let side = self.grid_max_index as u64 + 1;
        (0..self.s_n)
            .map(|mut c| {
                let mut v = vec![Rational::from_integer(0); self.d];
                for k in (0..self.d).rev() {
                    v[k] = self.grid_step * Rational::from_integer((c % side) as i128);
                    c /= side;
                }
                v
            })
            .collect()
    }

    pub fn grid_value(&self, index: &[u32]) -> Vec<Rational> {
        index
            .iter()
            .map(|&c| self.grid_step * Rational::from_integer(c as i128))
            .collect()
    }

    /// Satellites of the layer, flattened.
    pub fn satellite_set(&self) -> impl Iterator<Item = &Rational> {
        self.satellites.iter().flatten()
    }

    /// Index i of the satellite within bump range of x, with the distance.
    pub(crate) fn nearest_in_range(&self, x: &Rational) -> Option<(usize, Rational)> {
        let pos = self.sorted.partition_point(|(s, _)| s < x);
        [pos.checked_sub(1), Some(pos)]
            .into_iter()
            .flatten()
            .filter_map(|p| self.sorted.get(p))
            .map(|(s, i)| (*i, (s - x).abs()))
            .find(|(_, dist)| *dist < self.bump_radius)
    }
}

/// Layers 1..=N over one base space.
#[derive(Clone, Debug)]
pub struct WitnessConstruction {
    pub space: BaseSpace,
    pub d: usize,
    pub layers: Vec<LayerSpec>,
}

impl WitnessConstruction {
    pub fn layer(&self, n: u32) -> Option<&LayerSpec> {
        self.layers.get((n as usize).checked_sub(1)?)
    }

    pub fn depth(&self) -> u32 {
        self.layers.len() as u32
    }
}

/// Smallest m with (1 − 1/s)^m ≤ 1/(s k 2^n), i.e. (s−1)^m s k 2^n ≤ s^m.
fn replication_exponent(s: u64, k: usize, n: u32) -> u64 {
    if s <= 1 {
        return 1;
    }
    let target = BigUint::from(s) * BigUint::from(k as u64) * (BigUint::one() << n);
    let (mut lhs, mut rhs) = (BigUint::one(), BigUint::one());
    let mut m = 0u64;
    loop {
        m += 1;
        lhs *= s - 1;
        rhs *= s;
        if &lhs * &target <= rhs {
            return m;
        }
    }
}

fn min_gap(sorted: &[Rational]) -> Option<Rational> {
    sorted.windows(2).map(|w| w[1] - w[0]).min()
}

/// Builds layer n given the layers before it (their satellites are avoided).
pub fn build_layer(space: BaseSpace, n: u32, d: usize, earlier: &[LayerSpec]) -> Result<LayerSpec> {
    if n == 0 {
        return invalid("layers start at n = 1");
    }
    if d == 0 || d > 4 {
        return invalid("target dimension must be between 1 and 4");
    }
    let grid_max_index = ((1u64 << n) / (n as u64 * n as u64)) as u32;
    let s_n = (grid_max_index as u64 + 1)
        .checked_pow(d as u32)
        .ok_or(Error::Overflow("grid size"))?;
    let grid_step = Rational::new(8, 1i128 << n);

    let net = build_net(&space.descriptor(), n + 1)?;
    let delta = dyadic(n);
    let packing = packing_count(net.points(), &delta, DEFAULT_EXACT_LIMIT)?;
    let mut packing_points: Vec<Rational> = packing.witness.iter().map(|&i| net.points().coord(i, 0)).collect();
    packing_points.sort();
    let k_n = packing_points.len();
    let m_n = replication_exponent(s_n, k_n, n);
    let ell_n = s_n.checked_mul(m_n).ok_or(Error::Overflow("replication count"))?;

    let eps_n = match min_gap(&packing_points) {
        Some(g) => (g - delta) / Rational::from_integer(3),
        // a single packing point: any ball inside the space will do
        None => delta / Rational::from_integer(3),
    };
    if !eps_n.is_positive() {
        return invalid("packing points are not separated beyond 2^{-n}");
    }

    let used: HashSet<Rational> = earlier.iter().flat_map(|l| l.satellite_set().copied()).collect();
    let satellites = place_satellites(space, &packing_points, &eps_n, ell_n as usize, &used)?;

    let mut all: Vec<Rational> = satellites.iter().flatten().copied().collect();
    all.sort();
    let mut limit = eps_n;
    if let Some(g) = min_gap(&all) {
        limit = limit.min(g);
    }
    let mut earlier_sorted: Vec<Rational> = used.iter().copied().collect();
    earlier_sorted.sort();
    for s in &all {
        let p = earlier_sorted.partition_point(|e| e < s);
        for q in [p.checked_sub(1), Some(p)].into_iter().flatten() {
            if let Some(e) = earlier_sorted.get(q) {
                limit = limit.min((e - s).abs());
            }
        }
    }
    let third = limit / Rational::from_integer(3);
    let mut bump_radius = Rational::from_integer(1);
    while bump_radius >= third {
        bump_radius /= Rational::from_integer(space.radix());
    }

    let mut sorted: Vec<(Rational, usize)> = satellites
        .iter()
        .flat_map(|row| row.iter().enumerate().map(|(i, s)| (*s, i)))
        .collect();
    sorted.sort();

    Ok(LayerSpec {
        n,
        d,
        grid_max_index,
        grid_step,
        s_n,
        k_n,
        k_method: packing.method,
        m_n,
        ell_n,
        packing_points,
        eps_n,
        satellites,
        bump_radius,
        sorted,
    })
}

fn place_satellites(
    space: BaseSpace,
    centres: &[Rational],
    eps: &Rational,
    ell: usize,
    used: &HashSet<Rational>,
) -> Result<Vec<Vec<Rational>>> {
    match space {
        BaseSpace::Cantor => {
            // first digit level j whose cylinders fit in the ε-ball: 3^{-j}/2 ≤ ε,
            // and deep enough that centres have no digits beyond it
            let mut j = 0u32;
            while Rational::new(1, 2 * 3i128.pow(j)) > *eps || centres.iter().any(|c| !3i128.pow(j).is_multiple_of_denom(c)) {
                j += 1;
                if j > SATELLITE_DEPTH_LIMIT {
                    return Err(satellite_error(j));
                }
            }
            let mut b = 0u32;
            while (1usize << b) < ell {
                b += 1;
            }
            loop {
                if j + b > SATELLITE_DEPTH_LIMIT {
                    return Err(satellite_error(j + b));
                }
                let scale = 3i128.pow(j + b);
                let mut out = Vec::with_capacity(centres.len());
                let mut enough = true;
                for c in centres {
                    let base = c * Rational::from_integer(scale);
                    let base = base.to_integer();
                    let row: Vec<Rational> = (0u64..1 << b)
                        .map(|e| {
                            let mut v = 0i128;
                            for k in (0..b).rev() {
                                v = v * 3 + ((e >> k) & 1) as i128;
                            }
                            Rational::new(base + v, scale)
                        })
                        .filter(|p| !used.contains(p))
                        .take(ell)
                        .collect();
                    if row.len() < ell {
                        enough = false;
                        break;
                    }
                    out.push(row);
                }
                if enough {
                    return Ok(out);
                }
                b += 1;
            }
        }
        BaseSpace::Interval => {
            let mut j = 0u32;
            loop {
                if j > SATELLITE_DEPTH_LIMIT {
                    return Err(satellite_error(j));
                }
                let step = dyadic(j);
                let reach = (eps / step).floor().to_integer();
                let mut out = Vec::with_capacity(centres.len());
                let mut enough = true;
                for c in centres {
                    let mut row = Vec::with_capacity(ell);
                    let offsets = std::iter::once(0).chain((1..=reach).flat_map(|o| [o, -o]));
                    for o in offsets {
                        let p = c + step * Rational::from_integer(o);
                        if p.is_negative() || p > Rational::from_integer(1) || used.contains(&p) {
                            continue;
                        }
                        row.push(p);
                        if row.len() == ell {
                            break;
                        }
                    }
                    if row.len() < ell {
                        enough = false;
                        break;
                    }
                    out.push(row);
                }
                if enough {
                    return Ok(out);
                }
                j += 1;
            }
        }
    }
}

trait DenomCheck {
    fn is_multiple_of_denom(&self, x: &Rational) -> bool;
}

impl DenomCheck for i128 {
    fn is_multiple_of_denom(&self, x: &Rational) -> bool {
        self % x.denom() == 0
    }
}

fn satellite_error(depth: u32) -> Error {
    Error::InvalidInput(format!(
        "cannot place the satellites within digit depth {SATELLITE_DEPTH_LIMIT} (needed {depth}); use fewer layers or a deeper net"
    ))
}

/// Layers 1..=n_max, each avoiding the satellites of the previous ones.
pub fn build_layers(space: BaseSpace, d: usize, n_max: u32) -> Result<WitnessConstruction> {
    let mut layers: Vec<LayerSpec> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let layer = build_layer(space, n, d, &layers)?;
        layers.push(layer);
    }
    Ok(WitnessConstruction { space, d, layers })
}
