//! Initial assignments and means.

use rand::Rng;
use rayon::prelude::*;

use crate::dba::{AssignmentMap, MeanSequence};
use crate::dtw::dtw_distance;
use crate::error::{Error, Result};
use crate::path::WarpingPath;
use crate::rng::rng_from_seed;
use crate::sequence::Instance;

/// Random monotone walk from `(1,1)` to `(m,k)`: at interior cells each of the
/// three moves has probability 1/3; on a boundary the only feasible move is taken.
pub fn random_walk_path<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> WarpingPath {
    let (mut i, mut j) = (0usize, 0usize);
    let mut pairs = Vec::with_capacity(m + k - 1);
    pairs.push((0, 0));
    while (i, j) != (m - 1, k - 1) {
        if i == m - 1 {
            j += 1;
        } else if j == k - 1 {
            i += 1;
        } else {
            match rng.gen_range(0..3u8) {
                0 => i += 1,
                1 => j += 1,
                _ => {
                    i += 1;
                    j += 1;
                }
            }
        }
        pairs.push((i, j));
    }
    WarpingPath::from_pairs(pairs)
}

/// Random-walk initialization driven by an existing generator; one walk per
/// input sequence, drawn in sequence order.
pub fn random_walk_init_with<R: Rng + ?Sized>(
    x: &Instance,
    k: usize,
    rng: &mut R,
) -> Result<AssignmentMap> {
    if k == 0 {
        return Err(Error::input("mean length k must be positive"));
    }
    let m = x.m();
    let paths = (0..x.n()).map(|_| random_walk_path(m, k, rng)).collect();
    AssignmentMap::new(paths, m, k)
}

pub fn random_walk_init(x: &Instance, k: usize, seed: u64) -> Result<AssignmentMap> {
    random_walk_init_with(x, k, &mut rng_from_seed(seed))
}

/// The input sequence minimizing the summed DTW distance to all others
/// (lowest index on ties). The mean length becomes `m`.
pub fn medoid_init(x: &Instance) -> Result<MeanSequence> {
    let seqs = x.sequences();
    let n = seqs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let dists = pairs
        .par_iter()
        .map(|&(a, b)| dtw_distance(&seqs[a], &seqs[b]))
        .collect::<Result<Vec<_>>>()?;
    let mut totals = vec![0.0f64; n];
    for (&(a, b), d) in pairs.iter().zip(dists) {
        totals[a] += d;
        totals[b] += d;
    }
    let best = totals
        .iter()
        .enumerate()
        .fold(0, |best, (i, &t)| if t < totals[best] { i } else { best });
    Ok(MeanSequence::new(seqs[best].clone()))
}

/// Validates a prescribed initial assignment for `x` and passes it through.
pub fn explicit_init(x: &Instance, pi: AssignmentMap) -> Result<AssignmentMap> {
    pi.check_against(x)?;
    AssignmentMap::new(pi.paths().to_vec(), pi.m(), pi.k())
}
