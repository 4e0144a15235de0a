//! Warping paths: validation, exhaustive enumeration and counting.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `m1 + m2` accepted by [`enumerate_warping_paths`].
pub const ENUMERATION_GUARD: usize = 16;

/// A monotone sequence of index pairs.
///
/// Pairs are stored 0-based; [`WarpingPath::one_based`] gives the external
/// 1-based view used in files and reports.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WarpingPath {
    pairs: Vec<(usize, usize)>,
}

impl WarpingPath {
    /// Wraps 0-based pairs without checking them. Use [`validate_warping_path`]
    /// or [`WarpingPath::is_valid`] before relying on the invariants.
    pub fn from_pairs(pairs: Vec<(usize, usize)>) -> Self {
        WarpingPath { pairs }
    }

    /// Builds a path from 1-based pairs.
    pub fn from_one_based(pairs: &[(usize, usize)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(i, j)| {
                if i == 0 || j == 0 {
                    Err(Error::input("warping path indices are 1-based"))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(WarpingPath::from_pairs)
    }

    /// The diagonal path `(1,1), (2,2), ..., (m,m)`.
    pub fn diagonal(m: usize) -> Self {
        WarpingPath {
            pairs: (0..m).map(|i| (i, i)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn one_based(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(i, j)| (i + 1, j + 1))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn has_diagonal_step(&self) -> bool {
        self.pairs
            .windows(2)
            .any(|w| w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1)
    }

    /// True iff the path runs from `(1,1)` to `(m1,m2)` with unit monotone steps.
    pub fn is_valid(&self, m1: usize, m2: usize) -> bool {
        if m1 == 0 || m2 == 0 {
            return false;
        }
        match (self.pairs.first(), self.pairs.last()) {
            (Some(&(0, 0)), Some(&last)) if last == (m1 - 1, m2 - 1) => {}
            _ => return false,
        }
        self.pairs.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            let di = b.0.wrapping_sub(a.0);
            let dj = b.1.wrapping_sub(a.1);
            di <= 1 && dj <= 1 && di + dj >= 1
        })
    }
}

/// True iff `w` is a warping path from `(1,1)` to `(m1, m2)`.
pub fn validate_warping_path(w: &WarpingPath, m1: usize, m2: usize) -> bool {
    w.is_valid(m1, m2)
}

/// Every warping path from `(1,1)` to `(m1, m2)`, diagonal steps included.
pub fn enumerate_warping_paths(m1: usize, m2: usize) -> Result<Vec<WarpingPath>> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::input("path endpoints must be positive"));
    }
    if m1 + m2 > ENUMERATION_GUARD {
        return Err(Error::Size(format!(
            "m1 + m2 = {} exceeds the enumeration guard {ENUMERATION_GUARD}",
            m1 + m2
        )));
    }
    let mut out = Vec::new();
    let mut stack = vec![(0, 0)];
    extend_paths(&mut stack, m1 - 1, m2 - 1, &mut out);
    Ok(out)
}

fn extend_paths(
    stack: &mut Vec<(usize, usize)>,
    end_i: usize,
    end_j: usize,
    out: &mut Vec<WarpingPath>,
) {
    let (i, j) = *stack.last().expect("stack starts nonempty");
    if (i, j) == (end_i, end_j) {
        out.push(WarpingPath::from_pairs(stack.clone()));
        return;
    }
    for (di, dj) in [(1, 1), (1, 0), (0, 1)] {
        let next = (i + di, j + dj);
        if next.0 <= end_i && next.1 <= end_j {
            stack.push(next);
            extend_paths(stack, end_i, end_j, out);
            stack.pop();
        }
    }
}

/// Delannoy number `D(a, b)`: lattice paths from `(0,0)` to `(a,b)` with
/// east, north and north-east steps.
pub fn delannoy(a: usize, b: usize) -> BigUint {
    let mut row: Vec<BigUint> = vec![BigUint::from(1u32); b + 1];
    for _ in 0..a {
        let mut next = Vec::with_capacity(b + 1);
        next.push(BigUint::from(1u32));
        for j in 1..=b {
            let v = &next[j - 1] + &row[j] + &row[j - 1];
            next.push(v);
        }
        row = next;
    }
    row.swap_remove(b)
}

/// Number of warping paths from `(1,1)` to `(m1,m2)`, i.e. `D(m1-1, m2-1)`.
pub fn count_warping_paths(m1: usize, m2: usize) -> BigUint {
    assert!(m1 > 0 && m2 > 0, "path endpoints must be positive");
    delannoy(m1 - 1, m2 - 1)
}

/// Number of monotone lattice paths on an `m x k` grid using only axis steps:
/// `C(m + k - 2, m - 1)`.
pub fn count_monotone_paths_no_diagonal(m: usize, k: usize) -> BigUint {
    assert!(m > 0 && k > 0, "grid dimensions must be positive");
    num_integer::binomial(BigUint::from(m + k - 2), BigUint::from(m - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(pairs: &[(usize, usize)]) -> WarpingPath {
        WarpingPath::from_one_based(pairs).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_warping_path(&WarpingPath::diagonal(3), 3, 3));
        assert!(!validate_warping_path(&path(&[(1, 1), (3, 1)]), 3, 1));
        assert!(!validate_warping_path(
            &path(&[(1, 1), (2, 2), (3, 2)]),
            3,
            3
        ));
        assert!(!validate_warping_path(
            &path(&[(1, 1), (1, 1), (2, 2)]),
            2,
            2
        ));
        assert!(!validate_warping_path(
            &path(&[(1, 1), (2, 2), (2, 1)]),
            2,
            1
        ));
        assert!(!validate_warping_path(&path(&[(2, 2)]), 2, 2));
        assert!(!validate_warping_path(
            &WarpingPath::from_pairs(vec![]),
            1,
            1
        ));
        assert!(validate_warping_path(&path(&[(1, 1)]), 1, 1));
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(
            enumerate_warping_paths(1, 1).unwrap(),
            vec![path(&[(1, 1)])]
        );
        let two = enumerate_warping_paths(2, 2).unwrap();
        assert_eq!(two.len(), 3);
        assert!(two.contains(&path(&[(1, 1), (2, 2)])));
        assert!(two.contains(&path(&[(1, 1), (2, 1), (2, 2)])));
        assert!(two.contains(&path(&[(1, 1), (1, 2), (2, 2)])));
        assert_eq!(enumerate_warping_paths(3, 3).unwrap().len(), 13);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(enumerate_warping_paths(9, 8), Err(Error::Size(_))));
        assert!(enumerate_warping_paths(0, 3).is_err());
    }

    #[test]
    fn monotone_counts() {
        assert_eq!(count_monotone_paths_no_diagonal(2, 2), BigUint::from(2u32));
        assert_eq!(count_monotone_paths_no_diagonal(1, 7), BigUint::from(1u32));
        assert_eq!(count_monotone_paths_no_diagonal(4, 3), BigUint::from(10u32));
    }

    #[test]
    fn delannoy_values() {
        let expected = [1u32, 3, 13, 63, 321, 1683];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(delannoy(n, n), BigUint::from(*e));
        }
        assert_eq!(delannoy(0, 5), BigUint::from(1u32));
    }
}
