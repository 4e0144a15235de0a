use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtw::optimal_warping_path_with_cost;
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::path::WarpingPath;
use crate::sequence::{squared_dist, Instance, PointSequence};

/// One warping path per input sequence against a common mean of length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentMap {
    m: usize,
    k: usize,
    paths: Vec<WarpingPath>,
}

impl AssignmentMap {
    /// Validates every path against endpoints `(m, k)`.
    pub fn new(paths: Vec<WarpingPath>, m: usize, k: usize) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::input("assignment map needs at least one path"));
        }
        if let Some(bad) = paths.iter().position(|w| !w.is_valid(m, k)) {
            return Err(Error::input(format!(
                "path {} is not a warping path from (1,1) to ({m},{k})",
                bad + 1
            )));
        }
        Ok(AssignmentMap { m, k, paths })
    }

    /// Diagonal map for `n` sequences with `k == m`.
    pub fn diagonal(n: usize, m: usize) -> Self {
        AssignmentMap {
            m,
            k: m,
            paths: vec![WarpingPath::diagonal(m); n],
        }
    }

    pub fn paths(&self) -> &[WarpingPath] {
        &self.paths
    }

    pub fn n(&self) -> usize {
        self.paths.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Checks that the map fits the shape of `x`.
    pub fn check_against(&self, x: &Instance) -> Result<()> {
        if self.n() != x.n() || self.m != x.m() {
            return Err(Error::input(format!(
                "assignment map for n={}, m={} does not fit instance with n={}, m={}",
                self.n(),
                self.m,
                x.n(),
                x.m()
            )));
        }
        Ok(())
    }

    /// `|S_i(pi)|` for every mean index.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for w in &self.paths {
            for &(_, j) in w.pairs() {
                sizes[j] += 1;
            }
        }
        sizes
    }

    /// Input points assigned to mean index `idx` (0-based), as `(sequence, position)`.
    pub fn cluster(&self, idx: usize) -> Vec<(usize, usize)> {
        self.paths
            .iter()
            .enumerate()
            .flat_map(|(s, w)| {
                w.pairs()
                    .iter()
                    .filter(move |&&(_, j)| j == idx)
                    .map(move |&(i, _)| (s, i))
            })
            .collect()
    }
}

/// A mean (average) point sequence of length `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanSequence(PointSequence);

impl MeanSequence {
    pub fn new(seq: PointSequence) -> Self {
        MeanSequence(seq)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn as_sequence(&self) -> &PointSequence {
        &self.0
    }

    pub fn into_inner(self) -> PointSequence {
        self.0
    }
}

impl Deref for MeanSequence {
    type Target = PointSequence;

    fn deref(&self) -> &PointSequence {
        &self.0
    }
}

/// Centroid sequence `C_pi`: `c_i` is the arithmetic mean of the cluster `S_i(pi)`.
pub fn compute_mean(x: &Instance, pi: &AssignmentMap) -> Result<MeanSequence> {
    pi.check_against(x)?;
    let d = x.dim();
    let k = pi.k();
    let mut sums = vec![CompensatedSum::new(); k * d];
    let mut counts = vec![0usize; k];
    for (seq, w) in x.sequences().iter().zip(pi.paths()) {
        for &(i, j) in w.pairs() {
            counts[j] += 1;
            for (acc, &c) in sums[j * d..(j + 1) * d].iter_mut().zip(seq.point(i)) {
                acc.add(c);
            }
        }
    }
    let coords = sums
        .iter()
        .enumerate()
        .map(|(idx, s)| s.value() / counts[idx / d] as f64)
        .collect();
    Ok(MeanSequence(PointSequence::from_flat(d, coords)?))
}

/// Optimal warping path of every input sequence against `c`.
pub fn optimal_assignment(x: &Instance, c: &MeanSequence) -> Result<AssignmentMap> {
    if x.dim() != c.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: instance {} vs mean {}",
            x.dim(),
            c.dim()
        )));
    }
    let paths = x
        .sequences()
        .par_iter()
        .map(|s| optimal_warping_path_with_cost(s, c).map(|(w, _)| w))
        .collect::<Result<Vec<_>>>()?;
    Ok(AssignmentMap {
        m: x.m(),
        k: c.k(),
        paths,
    })
}

/// Total warping distance `Psi_pi(c)`.
pub fn total_warping_distance(x: &Instance, pi: &AssignmentMap, c: &MeanSequence) -> Result<f64> {
    pi.check_against(x)?;
    if c.k() != pi.k() || c.dim() != x.dim() {
        return Err(Error::input("mean does not match the assignment map"));
    }
    Ok(compensated_sum(
        x.sequences().iter().zip(pi.paths()).flat_map(|(seq, w)| {
            w.pairs()
                .iter()
                .map(move |&(i, j)| squared_dist(seq.point(i), c.point(j)))
        }),
    ))
}

/// Inertia `I_pi`: the total warping distance of `pi` against its own centroid sequence.
pub fn inertia(x: &Instance, pi: &AssignmentMap) -> Result<f64> {
    let c = compute_mean(x, pi)?;
    total_warping_distance(x, pi, &c)
}
