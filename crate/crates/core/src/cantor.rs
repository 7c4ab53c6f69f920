//! Digit functions on the scaled Cantor set and exact mesh counts of their graphs.
//!
//! For x = Σ a_i 3^{-i} with a_i ∈ {0,1}, the odd-digit function reads
//! a_1, a_3, a_5, … as a new base-3 expansion and the even-digit function
//! reads a_2, a_4, …. Both graphs have 2^{3n} mesh squares of side 9^{-n};
//! the graph of their sum has 2^{2n}(3^n + 1).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::estimators::{mesh_count_2d, ScaleSeries};
use crate::metric_spaces::DigitVector;
use crate::rational::Rational;

/// Default cap on materialized enumeration depth.
pub const ENUMERATION_LIMIT: u32 = 24;
/// Cap on the streaming mesh counter's digit depth (4n).
pub const MESH_DEPTH_LIMIT: u32 = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DigitFunction {
    OddDigits,
    EvenDigits,
    Sum,
}

impl DigitFunction {
    pub const ALL: [DigitFunction; 3] = [DigitFunction::OddDigits, DigitFunction::EvenDigits, DigitFunction::Sum];

    pub fn name(&self) -> &'static str {
        match self {
            DigitFunction::OddDigits => "f",
            DigitFunction::EvenDigits => "g",
            DigitFunction::Sum => "f+g",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" | "odd" => Some(DigitFunction::OddDigits),
            "g" | "even" => Some(DigitFunction::EvenDigits),
            "f+g" | "sum" => Some(DigitFunction::Sum),
            _ => None,
        }
    }

    /// Does digit position `i` (from 1) contribute, and at which power of 1/3.
    fn weight_exponent(&self, i: u32) -> Option<u32> {
        let odd = i % 2 == 1;
        match (self, odd) {
            (DigitFunction::OddDigits, true) | (DigitFunction::Sum, true) => Some(i.div_ceil(2)),
            (DigitFunction::EvenDigits, false) | (DigitFunction::Sum, false) => Some(i / 2),
            _ => None,
        }
    }
}

/// Exact value of the digit function on the stored digits.
pub fn eval(func: DigitFunction, digits: &DigitVector) -> Rational {
    let depth = digits.depth() as u32;
    let h = depth.div_ceil(2);
    let mut numer: i128 = 0;
    for i in 1..=depth {
        if let (Some(e), 1) = (func.weight_exponent(i), digits.digit(i as usize)) {
            numer += 3i128.pow(h - e);
        }
    }
    Rational::new(numer, 3i128.pow(h))
}

/// Integer form of graph points: x over 2·3^D, y over 2·3^{⌈D/2⌉}.
struct Weights {
    x: Vec<u64>,
    y: Vec<u64>,
    /// y-offset of the right endpoint (all remaining digits equal to 1).
    y_right: u64,
}

fn weights(func: DigitFunction, depth: u32) -> Weights {
    let h = depth.div_ceil(2);
    let x = (1..=depth).map(|i| 2 * 3u64.pow(depth - i)).collect();
    let y = (1..=depth)
        .map(|i| func.weight_exponent(i).map_or(0, |e| 2 * 3u64.pow(h - e)))
        .collect();
    // an infinite run of ones beyond position D adds Σ_{j≥j0} 3^{-j} = 3^{-(j0-1)}/2
    // to a digit function whose first omitted position is j0: ⌈D/2⌉+1 for
    // odd digits, ⌊D/2⌋+1 for even digits
    let odd_tail = 1;
    let even_tail = 3u64.pow(h - depth / 2);
    let y_right = match func {
        DigitFunction::OddDigits => odd_tail,
        DigitFunction::EvenDigits => even_tail,
        DigitFunction::Sum => odd_tail + even_tail,
    };
    Weights { x, y, y_right }
}

/// Points (x, h(x)) of a graph, stored as integer numerators.
#[derive(Clone, Debug)]
pub struct GraphEnumeration {
    pub func: DigitFunction,
    pub depth: u32,
    /// True when right cylinder endpoints are included.
    pub closed: bool,
    x_denom: i128,
    y_denom: i128,
    xs: Vec<u64>,
    ys: Vec<u64>,
}

impl GraphEnumeration {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn point(&self, i: usize) -> (Rational, Rational) {
        (
            Rational::new(self.xs[i] as i128, self.x_denom),
            Rational::new(self.ys[i] as i128, self.y_denom),
        )
    }

    pub fn points(&self) -> Vec<(Rational, Rational)> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

fn enumerate(func: DigitFunction, depth: u32, closed: bool) -> Result<GraphEnumeration> {
    if depth > ENUMERATION_LIMIT {
        return Err(Error::LimitExceeded {
            what: "graph enumeration depth",
            requested: depth as usize,
            limit: ENUMERATION_LIMIT as usize,
        });
    }
    let w = weights(func, depth);
    let count = 1usize << depth;
    let per = if closed { 2 } else { 1 };
    let mut xs = Vec::with_capacity(count * per);
    let mut ys = Vec::with_capacity(count * per);
    for m in 0..count as u64 {
        let (mut x, mut y) = (0u64, 0u64);
        for i in 0..depth as usize {
            if (m >> (depth as usize - 1 - i)) & 1 == 1 {
                x += w.x[i];
                y += w.y[i];
            }
        }
        xs.push(x);
        ys.push(y);
        if closed {
            xs.push(x + 1);
            ys.push(y + w.y_right);
        }
    }
    Ok(GraphEnumeration {
        func,
        depth,
        closed,
        x_denom: 2 * 3i128.pow(depth),
        y_denom: 2 * 3i128.pow(depth.div_ceil(2)),
        xs,
        ys,
    })
}

/// All 2^D points (x_h, h(x_h)) for digit vectors of length D, in increasing x.
pub fn enumerate_graph(func: DigitFunction, depth: u32) -> Result<GraphEnumeration> {
    enumerate(func, depth, false)
}

/// Like [`enumerate_graph`] but each depth-D cylinder also contributes its
/// right endpoint x_h + 3^{-D}/2 (all further digits equal to 1), which lies
/// in the Cantor set. These points reach the top mesh cell of each column
/// that left endpoints alone never touch.
pub fn enumerate_closed_graph(func: DigitFunction, depth: u32) -> Result<GraphEnumeration> {
    enumerate(func, depth, true)
}

/// Mesh count by materializing the closed enumeration and counting squares.
pub fn mesh_count_by_enumeration(func: DigitFunction, n: u32) -> Result<u64> {
    let g = enumerate_closed_graph(func, 4 * n)?;
    Ok(mesh_count_2d(g.points().iter(), n))
}

/// Number of 9^{-n} mesh squares meeting the graph, from the closed
/// enumeration at digit depth 4n.
///
/// Points are streamed in blocks sharing their first 2n digits. Each block
/// is checked to lie in a single mesh column, columns are checked to be
/// strictly increasing, and the distinct rows inside each column are
/// counted, so the total equals the number of distinct squares.
pub fn brute_force_mesh_count(func: DigitFunction, n: u32) -> Result<u64> {
    let depth = 4 * n;
    if depth > MESH_DEPTH_LIMIT {
        return Err(Error::LimitExceeded {
            what: "mesh count digit depth",
            requested: depth as usize,
            limit: MESH_DEPTH_LIMIT as usize,
        });
    }
    if n == 0 {
        return Ok(1);
    }
    let w = weights(func, depth);
    let p = (2 * n) as usize;
    let tails = 1usize << (depth as usize - p);
    // tail contributions of digits p+1..D, left endpoints
    let mut tx = vec![0u64; tails];
    let mut ty = vec![0u64; tails];
    for t in 0..tails {
        for k in 0..depth as usize - p {
            if (t >> (depth as usize - p - 1 - k)) & 1 == 1 {
                tx[t] += w.x[p + k];
                ty[t] += w.y[p + k];
            }
        }
    }
    let x_max = tx.iter().max().copied().unwrap_or(0) + 1;
    let mut tail_y: Vec<u64> = ty.iter().flat_map(|&y| [y, y + w.y_right]).collect();
    tail_y.sort_unstable();
    tail_y.dedup();
    // cell of x is floor(x 9^n) = xnum / (2·3^{2n}); of y, ynum·9^n / (2·3^{2n}) = ynum / 2
    let x_cell = 2 * 3u64.pow(2 * n);
    let blocks: Vec<(u64, u64)> = (0..1u64 << p)
        .into_par_iter()
        .map(|m| {
            let (mut x, mut y) = (0u64, 0u64);
            for i in 0..p {
                if (m >> (p - 1 - i)) & 1 == 1 {
                    x += w.x[i];
                    y += w.y[i];
                }
            }
            let (lo, hi) = (x / x_cell, (x + x_max) / x_cell);
            let column = if lo == hi { lo } else { u64::MAX };
            let mut distinct = 0u64;
            let mut last = u64::MAX;
            for &u in &tail_y {
                let c = (y + u) / 2;
                if c != last {
                    distinct += 1;
                    last = c;
                }
            }
            (column, distinct)
        })
        .collect();
    let ordered = blocks.windows(2).all(|b| b[0].0 < b[1].0) && blocks.iter().all(|b| b.0 != u64::MAX);
    if !ordered {
        return Err(Error::InvalidInput(
            "prefix blocks do not occupy distinct mesh columns".into(),
        ));
    }
    Ok(blocks.iter().map(|b| b.1).sum())
}

/// (2^{3n}, 2^{3n}, 2^{2n}(3^n + 1)).
pub fn closed_form_counts(n: u32) -> Result<(u128, u128, u128)> {
    if n == 0 {
        return invalid("closed forms start at n = 1");
    }
    let p2 = |e: u32| 1u128.checked_shl(e).filter(|_| e < 128);
    let f = p2(3 * n).ok_or(Error::Overflow("closed form count"))?;
    let s = p2(2 * n)
        .and_then(|a| 3u128.checked_pow(n).and_then(|b| a.checked_mul(b + 1)))
        .ok_or(Error::Overflow("closed form count"))?;
    Ok((f, f, s))
}

/// Brute-force counts for n in the range, as a base-9 series.
pub fn mesh_series(func: DigitFunction, scales: std::ops::RangeInclusive<u32>) -> Result<ScaleSeries> {
    let entries = scales
        .map(|n| Ok((n, brute_force_mesh_count(func, n)?)))
        .collect::<Result<Vec<_>>>()?;
    ScaleSeries::new(9, entries)
}

/// For every prefix of length 2n, the values of f+g over its extensions to
/// depth 4n meet each 3^{-2n}-cell of [(f+g)(x_h), (f+g)(x_h) + 3^{-n}).
pub fn surjectivity_check(n: u32) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let depth = 4 * n;
    if depth > ENUMERATION_LIMIT {
        return Err(Error::LimitExceeded {
            what: "surjectivity digit depth",
            requested: depth as usize,
            limit: ENUMERATION_LIMIT as usize,
        });
    }
    let w = weights(DigitFunction::Sum, depth);
    let p = 2 * n as usize;
    let cells = 3usize.pow(n);
    let ok = (0..1u64 << p).into_par_iter().all(|m| {
        let mut base = 0u64;
        for i in 0..p {
            if (m >> (p - 1 - i)) & 1 == 1 {
                base += w.y[i];
            }
        }
        let mut hit = vec![false; cells];
        for t in 0..1u64 << (depth as usize - p) {
            let mut v = base;
            for k in 0..depth as usize - p {
                if (t >> (depth as usize - p - 1 - k)) & 1 == 1 {
                    v += w.y[p + k];
                }
            }
            // y numerators are over 2·3^{2n}, one cell is 2 units
            let k = ((v - base) / 2) as usize;
            if k < cells {
                hit[k] = true;
            }
        }
        hit.iter().all(|&h| h)
    });
    Ok(ok)
}
