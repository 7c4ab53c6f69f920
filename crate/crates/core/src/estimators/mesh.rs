//! Counting 9^{-n} mesh squares met by a planar set.

use std::collections::HashSet;

use crate::rational::{floor_div, Rational};

/// Distinct half-open squares [k 9^{-n}, (k+1) 9^{-n}) × [m 9^{-n}, (m+1) 9^{-n})
/// containing at least one point.
pub fn mesh_count_2d<'a, I>(points: I, n: u32) -> u64
where
    I: IntoIterator<Item = &'a (Rational, Rational)>,
{
    let side = Rational::new(1, 9i128.pow(n));
    mesh_count_cells(points.into_iter().map(|(x, y)| (floor_div(x, &side), floor_div(y, &side))))
}

/// Distinct cells among precomputed integer cell indices.
pub fn mesh_count_cells<I: IntoIterator<Item = (i128, i128)>>(cells: I) -> u64 {
    cells.into_iter().collect::<HashSet<_>>().len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn origin_only() {
        for n in 0..4 {
            assert_eq!(mesh_count_2d(&[(rat(0, 1), rat(0, 1))], n), 1);
        }
    }

    #[test]
    fn half_open_boundary() {
        for n in 1..4 {
            let pts = [(rat(0, 1), rat(0, 1)), (rat(1, 9i128.pow(n)), rat(0, 1))];
            assert_eq!(mesh_count_2d(&pts, n), 2);
        }
        let pts = [(rat(0, 1), rat(0, 1)), (rat(1, 10), rat(1, 10))];
        assert_eq!(mesh_count_2d(&pts, 1), 1);
    }
}
