//! Dynamic time warping with squared Euclidean ground cost.

use crate::error::{Error, Result};
use crate::path::WarpingPath;
use crate::sequence::{squared_dist, PointSequence};

fn check_dims(a: &PointSequence, b: &PointSequence) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// DTW distance: the minimum over warping paths of the summed squared
/// distances of paired points. No square root is taken.
pub fn dtw_distance(a: &PointSequence, b: &PointSequence) -> Result<f64> {
    check_dims(a, b)?;
    let (m1, m2) = (a.len(), b.len());
    let mut prev = vec![0.0f64; m2];
    let mut cur = vec![0.0f64; m2];
    for i in 0..m1 {
        let p = a.point(i);
        for j in 0..m2 {
            let c = squared_dist(p, b.point(j));
            cur[j] = c + match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[j],
                _ => prev[j - 1].min(prev[j]).min(cur[j - 1]),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m2 - 1])
}

/// Full cumulative-cost matrix, row-major `m1 x m2`.
fn cost_matrix(a: &PointSequence, b: &PointSequence) -> Vec<f64> {
    let (m1, m2) = (a.len(), b.len());
    let mut acc = vec![0.0f64; m1 * m2];
    for i in 0..m1 {
        let p = a.point(i);
        let row = i * m2;
        for j in 0..m2 {
            let c = squared_dist(p, b.point(j));
            acc[row + j] = c + match (i, j) {
                (0, 0) => 0.0,
                (0, _) => acc[j - 1],
                (_, 0) => acc[row - m2],
                _ => {
                    let diag = acc[row - m2 + j - 1];
                    let up = acc[row - m2 + j];
                    let left = acc[row + j - 1];
                    diag.min(up).min(left)
                }
            };
        }
    }
    acc
}

/// An optimal warping path between `a` and `b` together with its cost.
///
/// Backtracking ties are resolved in the fixed order diagonal, then
/// advance-in-`a` (predecessor `(i-1, j)`), then advance-in-`b`.
pub fn optimal_warping_path_with_cost(
    a: &PointSequence,
    b: &PointSequence,
) -> Result<(WarpingPath, f64)> {
    check_dims(a, b)?;
    let (m1, m2) = (a.len(), b.len());
    let acc = cost_matrix(a, b);
    let cost = acc[m1 * m2 - 1];
    let mut pairs = Vec::with_capacity(m1 + m2 - 1);
    let (mut i, mut j) = (m1 - 1, m2 - 1);
    pairs.push((i, j));
    while (i, j) != (0, 0) {
        if i == 0 {
            j -= 1;
        } else if j == 0 {
            i -= 1;
        } else {
            let diag = acc[(i - 1) * m2 + j - 1];
            let up = acc[(i - 1) * m2 + j];
            let left = acc[i * m2 + j - 1];
            if diag <= up && diag <= left {
                i -= 1;
                j -= 1;
            } else if up <= left {
                i -= 1;
            } else {
                j -= 1;
            }
        }
        pairs.push((i, j));
    }
    pairs.reverse();
    Ok((WarpingPath::from_pairs(pairs), cost))
}

pub fn optimal_warping_path(a: &PointSequence, b: &PointSequence) -> Result<WarpingPath> {
    optimal_warping_path_with_cost(a, b).map(|(w, _)| w)
}

/// Cost of an arbitrary path between `a` and `b` (path assumed in range).
pub fn path_cost(a: &PointSequence, b: &PointSequence, w: &WarpingPath) -> f64 {
    w.pairs()
        .iter()
        .map(|&(i, j)| squared_dist(a.point(i), b.point(j)))
        .sum()
}
