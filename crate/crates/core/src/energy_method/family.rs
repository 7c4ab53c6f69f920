use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::metric_spaces::{DigitVector, PointSet};
use crate::rational::Rational;

/// Deepest cylinder a family may use; leaves are enumerated explicitly.
pub const FAMILY_DIGIT_LIMIT: u32 = 30;

/// How the children of a piece are chosen among its sub-cylinders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Every sub-cylinder; branching must be 2^(depth step).
    Full,
    /// The first few in increasing order.
    Leftmost,
    /// Evenly spaced across the parent.
    Spread,
    /// Two children facing each other across one gap, `offset` digits
    /// below the parent: the last cylinder left of the gap and the first
    /// one right of it.
    Straddle { offset: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSpec {
    pub branching: usize,
    /// Digit depth of the pieces at this level.
    pub depth: u32,
    pub placement: Placement,
}

impl LevelSpec {
    pub fn full(depth: u32, parent_depth: u32) -> Self {
        LevelSpec {
            branching: 1 << (depth - parent_depth),
            depth,
            placement: Placement::Full,
        }
    }
}

/// Smallest digit depth j with 3^j ≥ 2^{n²}, which keeps level-n cylinders
/// (diameter 3^{-j}/2) within 2^{-n²}.
pub fn minimal_depth(n: u32) -> u32 {
    let target = (n * n) as f64 * std::f64::consts::LN_2 / 3f64.ln();
    let mut j = target.floor() as u32;
    while (j as f64) * 3f64.ln() < (n * n) as f64 * std::f64::consts::LN_2 - 1e-12 {
        j += 1;
    }
    j.max(1)
}

/// The full-branching schedule with minimal depths per level.
pub fn natural_schedule(levels: u32) -> Vec<LevelSpec> {
    let mut prev = 0;
    (1..=levels)
        .map(|n| {
            let depth = minimal_depth(n).max(prev + 1);
            let spec = LevelSpec::full(depth, prev);
            prev = depth;
            spec
        })
        .collect()
}

/// Number of levels [`lacunary_schedule`] provides.
pub const LACUNARY_LEVELS: u32 = 4;

/// A schedule of two-way splits across gaps whose sizes decay like 2^{-10n}:
/// the pair distances then shrink in step with the growth of 2^n. At most
/// [`LACUNARY_LEVELS`] levels are available.
pub fn lacunary_schedule(levels: u32) -> Vec<LevelSpec> {
    [(8, 2), (14, 0), (15, 0), (25, 0)]
        .into_iter()
        .take(levels as usize)
        .map(|(depth, offset)| LevelSpec {
            branching: 2,
            depth,
            placement: Placement::Straddle { offset },
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    /// Cylinder prefix in {0,1} digits.
    pub prefix: DigitVector,
    /// Index into the previous level, `None` on level 1.
    pub parent: Option<usize>,
}

impl Piece {
    /// Exact diameter of the cylinder: Σ_{i>j} 3^{-i} = 3^{-j}/2.
    pub fn diameter(&self) -> Rational {
        Rational::new(1, 2 * 3i128.pow(self.prefix.depth() as u32))
    }

    pub fn left_endpoint(&self) -> Rational {
        self.prefix.to_rational()
    }
}

/// Nested disjoint cylinder pieces, level n with diameter at most 2^{-n²}.
#[derive(Clone, Debug)]
pub struct NestedFamily {
    levels: Vec<LevelSpec>,
    pieces: Vec<Vec<Piece>>,
    leaf_index: HashMap<i128, usize>,
}

fn children(parent: &[u8], parent_depth: u32, spec: &LevelSpec) -> Result<Vec<Vec<u8>>> {
    let step = spec.depth - parent_depth;
    let available = 1u64 << step;
    let extend = |m: u64| -> Vec<u8> {
        let mut d = parent.to_vec();
        d.extend((0..step).rev().map(|k| ((m >> k) & 1) as u8));
        d
    };
    let a = spec.branching as u64;
    if a == 0 || a > available {
        return invalid(format!(
            "branching {a} does not fit {available} sub-cylinders at depth {}",
            spec.depth
        ));
    }
    Ok(match spec.placement {
        Placement::Full => {
            if a != available {
                return invalid(format!("full placement needs branching {available}, got {a}"));
            }
            (0..a).map(extend).collect()
        }
        Placement::Leftmost => (0..a).map(extend).collect(),
        Placement::Spread => {
            if a == 1 {
                vec![extend(0)]
            } else {
                (0..a).map(|k| extend(k * (available - 1) / (a - 1))).collect()
            }
        }
        Placement::Straddle { offset } => {
            if a != 2 {
                return invalid("straddle placement makes exactly two children");
            }
            if offset + 1 > step {
                return invalid(format!(
                    "straddle offset {offset} needs at least {} digits below the parent",
                    offset + 1
                ));
            }
            let rest = step - offset - 1;
            let mut left = parent.to_vec();
            left.extend(std::iter::repeat_n(0, offset as usize));
            let mut right = left.clone();
            left.push(0);
            left.extend(std::iter::repeat_n(1, rest as usize));
            right.push(1);
            right.extend(std::iter::repeat_n(0, rest as usize));
            vec![left, right]
        }
    })
}

/// Builds the family level by level from the root [0, 1/2].
pub fn build_nested_family(levels: &[LevelSpec]) -> Result<NestedFamily> {
    if levels.is_empty() {
        return invalid("a family needs at least one level");
    }
    if levels.len() > 4 {
        return Err(Error::LimitExceeded {
            what: "family levels",
            requested: levels.len(),
            limit: 4,
        });
    }
    let mut pieces: Vec<Vec<Piece>> = Vec::new();
    let mut parent_depth = 0;
    for (idx, spec) in levels.iter().enumerate() {
        let n = idx as u32 + 1;
        if spec.depth <= parent_depth {
            return invalid(format!("level {n} depth must exceed {parent_depth}"));
        }
        if spec.depth > FAMILY_DIGIT_LIMIT {
            return Err(Error::LimitExceeded {
                what: "family digit depth",
                requested: spec.depth as usize,
                limit: FAMILY_DIGIT_LIMIT as usize,
            });
        }
        let needed = minimal_depth(n);
        if spec.depth < needed {
            return invalid(format!(
                "level {n} pieces need digit depth at least {needed} to have diameter ≤ 2^-{}",
                n * n
            ));
        }
        let parents: Vec<(Option<usize>, Vec<u8>)> = match pieces.last() {
            None => vec![(None, Vec::new())],
            Some(prev) => prev
                .iter()
                .enumerate()
                .map(|(i, p)| (Some(i), p.prefix.digits().to_vec()))
                .collect(),
        };
        let mut level = Vec::new();
        for (parent, digits) in parents {
            for child in children(&digits, parent_depth, spec)? {
                level.push(Piece {
                    prefix: DigitVector::new(child)?,
                    parent,
                });
            }
        }
        pieces.push(level);
        parent_depth = spec.depth;
    }
    let leaf_index = pieces
        .last()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.prefix.numerator(), i))
        .collect();
    Ok(NestedFamily {
        levels: levels.to_vec(),
        pieces,
        leaf_index,
    })
}

impl NestedFamily {
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    /// Pieces of level n (1-based).
    pub fn pieces(&self, n: u32) -> &[Piece] {
        &self.pieces[n as usize - 1]
    }

    pub fn leaves(&self) -> &[Piece] {
        self.pieces.last().unwrap()
    }

    pub fn leaf_depth(&self) -> u32 {
        self.levels.last().unwrap().depth
    }

    /// The family cut after `levels` levels.
    pub fn truncate(&self, levels: u32) -> Result<NestedFamily> {
        if levels as usize > self.levels.len() {
            return invalid(format!("the family has only {} levels, not {levels}", self.levels.len()));
        }
        build_nested_family(&self.levels[..levels as usize])
    }

    /// Piece indices of the leaf and its ancestors, level 1 first.
    pub fn path(&self, leaf: usize) -> Vec<usize> {
        let mut path = vec![leaf];
        for level in self.pieces.iter().rev() {
            match level[*path.last().unwrap()].parent {
                Some(p) => path.push(p),
                None => break,
            }
        }
        path.reverse();
        path
    }

    /// Number of levels on which two leaves share a piece.
    pub fn common_levels(&self, a: usize, b: usize) -> u32 {
        self.path(a)
            .iter()
            .zip(self.path(b))
            .take_while(|(x, y)| **x == *y)
            .count() as u32
    }

    /// The leaf containing a Cantor point of finite expansion, if any.
    pub fn leaf_of(&self, x: &Rational) -> Option<usize> {
        let j = self.leaf_depth();
        let scale = Rational::from_integer(3i128.pow(j));
        let scaled = x * scale;
        let head = scaled.floor().to_integer();
        // the scaled cylinder is [head, head + 1/2]
        if scaled - Rational::from_integer(head) > Rational::new(1, 2) {
            return None;
        }
        self.leaf_index.get(&head).copied()
    }

    /// Left endpoints of all leaves extended by `extra` further digits.
    pub fn leaf_points(&self, extra: u32) -> Result<PointSet> {
        let j = self.leaf_depth() + extra;
        if j > FAMILY_DIGIT_LIMIT || self.leaves().len() << extra > 1 << 22 {
            return Err(Error::LimitExceeded {
                what: "family points",
                requested: self.leaves().len() << extra,
                limit: 1 << 22,
            });
        }
        let mut coords = Vec::with_capacity(self.leaves().len() << extra);
        for leaf in self.leaves() {
            let base = leaf.prefix.numerator() as i64 * 3i64.pow(extra);
            for m in 0u64..1 << extra {
                let mut v = 0i64;
                for k in (0..extra).rev() {
                    v = v * 3 + ((m >> k) & 1) as i64;
                }
                coords.push(base + v);
            }
        }
        PointSet::lattice(3i128.pow(j), 1, coords)
    }
}
