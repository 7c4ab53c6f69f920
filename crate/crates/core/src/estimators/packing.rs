//! Maximum 2^{-n}-packings: greedy with spatial hashing, exact by branch and bound.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::metric_spaces::{PointSet, ResolutionNet};
use crate::rational::{dyadic, Rational};

pub const DEFAULT_EXACT_LIMIT: usize = 64;
const BITSET_LIMIT: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackingMethod {
    Greedy,
    Exact,
}

impl PackingMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PackingMethod::Greedy => "greedy",
            PackingMethod::Exact => "exact",
        }
    }
}

/// A δ-packing: all pairwise distances of the witness strictly exceed δ.
#[derive(Clone, Debug)]
pub struct PackingResult {
    pub delta: Rational,
    /// Set when δ = 2^{-n}.
    pub scale_index: Option<u32>,
    pub count: usize,
    /// Indices into the point set the packing was computed on.
    pub witness: Vec<usize>,
    pub method: PackingMethod,
}

impl PackingResult {
    /// Exact check of the packing property.
    pub fn verify(&self, points: &PointSet) -> bool {
        let th = points.threshold(&self.delta);
        self.count == self.witness.len()
            && self
                .witness
                .iter()
                .enumerate()
                .all(|(a, &i)| self.witness[a + 1..].iter().all(|&j| !points.within(i, j, &th)))
    }
}

/// Greedy insertion in lexicographic order of exact coordinates.
///
/// The result is maximal: every point of the set lies within δ of the
/// witness, so it is also a δ-cover.
pub fn greedy_packing(points: &PointSet, delta: &Rational) -> Result<PackingResult> {
    if points.is_empty() {
        return invalid("cannot pack an empty point set");
    }
    if *delta <= Rational::from_integer(0) {
        return invalid("packing radius must be positive");
    }
    let th = points.threshold(delta);
    let order = points.lex_order();
    let mut witness: Vec<usize> = Vec::new();
    let hashed = points.cell(0, delta).is_some();
    if hashed {
        let dim = points.dim();
        let mut grid: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
        let offsets = neighbour_offsets(dim);
        for &i in &order {
            let Some(cell) = points.cell(i, delta) else {
                return greedy_linear(points, delta, &order);
            };
            let blocked = offsets.iter().any(|off| {
                let mut key = cell;
                for k in 0..dim {
                    key[k] += off[k];
                }
                grid.get(&key)
                    .is_some_and(|v| v.iter().any(|&j| points.within(i, j, &th)))
            });
            if !blocked {
                witness.push(i);
                grid.entry(cell).or_default().push(i);
            }
        }
    } else {
        return greedy_linear(points, delta, &order);
    }
    Ok(result(delta, witness, PackingMethod::Greedy))
}

fn greedy_linear(points: &PointSet, delta: &Rational, order: &[usize]) -> Result<PackingResult> {
    let th = points.threshold(delta);
    let mut witness: Vec<usize> = Vec::new();
    for &i in order {
        if !witness.iter().any(|&j| points.within(i, j, &th)) {
            witness.push(i);
        }
    }
    Ok(result(delta, witness, PackingMethod::Greedy))
}

fn neighbour_offsets(dim: usize) -> Vec<[i64; 4]> {
    let mut out = vec![[0i64; 4]];
    for k in 0..dim {
        let mut next = Vec::with_capacity(out.len() * 3);
        for o in &out {
            for s in [-1, 0, 1] {
                let mut v = *o;
                v[k] = s;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn result(delta: &Rational, witness: Vec<usize>, method: PackingMethod) -> PackingResult {
    let scale_index = if *delta.numer() == 1 && delta.denom().count_ones() == 1 {
        Some(delta.denom().trailing_zeros())
    } else {
        None
    };
    PackingResult {
        delta: *delta,
        scale_index,
        count: witness.len(),
        witness,
        method,
    }
}

/// Maximum δ-packing by branch and bound on the compatibility graph.
///
/// The search is a maximum-clique search (edges join points farther apart
/// than δ) with greedy colouring bounds.
pub fn exact_packing(points: &PointSet, delta: &Rational, limit: usize) -> Result<PackingResult> {
    let n = points.len();
    if n == 0 {
        return invalid("cannot pack an empty point set");
    }
    if *delta <= Rational::from_integer(0) {
        return invalid("packing radius must be positive");
    }
    let limit = limit.min(BITSET_LIMIT);
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "exact packing instance",
            requested: n,
            limit,
        });
    }
    let th = points.threshold(delta);
    let order = points.lex_order();
    let mut adj = vec![0u128; n];
    for a in 0..n {
        for b in a + 1..n {
            if !points.within(order[a], order[b], &th) {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    let all: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    // a greedy solution seeds the incumbent
    let mut best: Vec<usize> = Vec::new();
    let mut cand = all;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        best.push(v);
        cand &= adj[v];
    }
    let mut current = Vec::new();
    expand(&adj, all, &mut current, &mut best);
    let mut witness: Vec<usize> = best.iter().map(|&v| order[v]).collect();
    witness.sort_by_key(|i| order.iter().position(|o| o == i));
    Ok(result(delta, witness, PackingMethod::Exact))
}

fn colour_bounds(adj: &[u128], mut p: u128) -> Vec<(usize, usize)> {
    // returns vertices with their colour class index, in non-decreasing colour order
    let mut out = Vec::new();
    let mut colour = 0;
    while p != 0 {
        colour += 1;
        let mut q = p;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1u128 << v);
            q &= !adj[v];
            p &= !(1u128 << v);
            out.push((v, colour));
        }
    }
    out
}

fn expand(adj: &[u128], mut p: u128, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    let coloured = colour_bounds(adj, p);
    for &(v, c) in coloured.iter().rev() {
        if current.len() + c <= best.len() {
            return;
        }
        current.push(v);
        let np = p & adj[v];
        if np == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(adj, np, current, best);
        }
        current.pop();
        p &= !(1u128 << v);
    }
}

/// Exact when the set is within `limit`, greedy otherwise.
pub fn packing_count(points: &PointSet, delta: &Rational, limit: usize) -> Result<PackingResult> {
    if points.len() <= limit.min(BITSET_LIMIT) {
        exact_packing(points, delta, limit)
    } else {
        greedy_packing(points, delta)
    }
}

/// Greedy 2^{-n}-packing of a net.
pub fn max_packing_greedy(net: &ResolutionNet, n: u32) -> Result<PackingResult> {
    greedy_packing(net.points(), &dyadic(n))
}

/// Exact maximum 2^{-n}-packing of a net of at most [`DEFAULT_EXACT_LIMIT`] points.
pub fn max_packing_exact(net: &ResolutionNet, n: u32) -> Result<PackingResult> {
    exact_packing(net.points(), &dyadic(n), DEFAULT_EXACT_LIMIT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_spaces::{build_net, SpaceDescriptor};
    use crate::rational::rat;

    fn line(xs: &[Rational]) -> PointSet {
        PointSet::from_rationals(1, xs.to_vec()).unwrap()
    }

    #[test]
    fn three_points() {
        let ps = line(&[rat(0, 1), rat(1, 2), rat(1, 1)]);
        assert_eq!(greedy_packing(&ps, &rat(2, 5)).unwrap().count, 3);
        let r = greedy_packing(&ps, &rat(3, 5)).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.witness, vec![0, 2]);
    }

    #[test]
    fn strict_inequality() {
        let ps = line(&[rat(0, 1), rat(1, 8)]);
        assert_eq!(exact_packing(&ps, &rat(1, 8), 64).unwrap().count, 1);
        assert_eq!(exact_packing(&line(&[rat(1, 3)]), &rat(1, 2), 64).unwrap().count, 1);
    }

    #[test]
    fn greedy_matches_exact_on_cantor() {
        let net = build_net(&SpaceDescriptor::TriadicCantor, 3).unwrap();
        assert!(net.len() <= 64);
        let g = max_packing_greedy(&net, 3).unwrap();
        let e = max_packing_exact(&net, 3).unwrap();
        assert_eq!(g.count, e.count);
        assert!(g.verify(net.points()) && e.verify(net.points()));
    }

    #[test]
    fn interval_exact_count() {
        // on a fine enough grid the maximum 2^{-n}-packing of [0,1] has 2^n points
        for n in 1..=4 {
            let net = build_net(&SpaceDescriptor::UnitInterval, n + 1).unwrap();
            let grid = build_net(&SpaceDescriptor::UnitInterval, 2 * n).unwrap();
            let e = if grid.len() <= 64 { max_packing_exact(&grid, n).unwrap().count } else { 0 };
            if e > 0 {
                assert_eq!(e, 1 << n);
            }
            assert!(max_packing_exact(&net, n).unwrap().count <= 1 << n);
        }
    }

    #[test]
    fn refuses_large_instances() {
        let net = build_net(&SpaceDescriptor::UnitInterval, 7).unwrap();
        assert!(matches!(max_packing_exact(&net, 3), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn plane_greedy_hash_agrees_with_linear() {
        let net = build_net(&SpaceDescriptor::product(SpaceDescriptor::UnitInterval, 1), 3).unwrap();
        let d = rat(1, 4);
        let hashed = greedy_packing(net.points(), &d).unwrap();
        let linear = greedy_linear(net.points(), &d, &net.points().lex_order()).unwrap();
        assert_eq!(hashed.witness, linear.witness);
    }
}
