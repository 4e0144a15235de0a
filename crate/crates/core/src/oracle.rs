//! Exhaustive ground truth for tiny instances.

use itertools::Itertools;
use num_bigint::BigUint;

use crate::dba::{
    compute_mean, optimal_assignment, total_warping_distance, AssignmentMap, MeanSequence,
};
use crate::error::{Error, Result};
use crate::path::{count_warping_paths, enumerate_warping_paths};
use crate::sequence::Instance;

/// Largest number of assignment maps the oracle will enumerate.
pub const ASSIGNMENT_GUARD: u64 = 1_000_000;

/// Number of valid assignment maps: `D(m-1, k-1)^n`.
pub fn count_assignment_maps(n: usize, m: usize, k: usize) -> BigUint {
    count_warping_paths(m, k).pow(n as u32)
}

/// Every valid assignment map for `n` sequences of length `m` and mean length `k`.
pub fn enumerate_assignment_maps(
    n: usize,
    m: usize,
    k: usize,
) -> Result<impl Iterator<Item = AssignmentMap>> {
    if n == 0 || m == 0 || k == 0 {
        return Err(Error::input("n, m and k must be positive"));
    }
    let total = count_assignment_maps(n, m, k);
    if total > BigUint::from(ASSIGNMENT_GUARD) {
        return Err(Error::Size(format!(
            "{total} assignment maps exceed the guard {ASSIGNMENT_GUARD}"
        )));
    }
    let paths = enumerate_warping_paths(m, k)?;
    Ok(std::iter::repeat_n(paths, n)
        .multi_cartesian_product()
        .map(move |combo| AssignmentMap::new(combo, m, k).expect("enumerated paths are valid")))
}

/// Globally optimal length-`k` mean and its cost, by minimizing the inertia
/// over all assignment maps.
pub fn exact_mean(x: &Instance, k: usize) -> Result<(MeanSequence, f64)> {
    let mut best: Option<(MeanSequence, f64)> = None;
    for pi in enumerate_assignment_maps(x.n(), x.m(), k)? {
        let c = compute_mean(x, &pi)?;
        let cost = total_warping_distance(x, &pi, &c)?;
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((c, cost));
        }
    }
    Ok(best.expect("at least one assignment map exists"))
}

/// True iff re-assigning against `c` and re-centering reproduces `c`
/// (coordinate-wise, relative tolerance 1e-12).
pub fn is_fixed_point(x: &Instance, c: &MeanSequence) -> bool {
    let Ok(pi) = optimal_assignment(x, c) else {
        return false;
    };
    let Ok(next) = compute_mean(x, &pi) else {
        return false;
    };
    next.as_flat()
        .iter()
        .zip(c.as_flat())
        .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::PointSequence;

    #[test]
    fn map_counts() {
        assert_eq!(enumerate_assignment_maps(1, 2, 2).unwrap().count(), 3);
        assert_eq!(enumerate_assignment_maps(2, 2, 2).unwrap().count(), 9);
        assert_eq!(count_assignment_maps(2, 3, 3), BigUint::from(169u32));
        for pi in enumerate_assignment_maps(2, 3, 2).unwrap() {
            assert!(pi.paths().iter().all(|w| w.is_valid(3, 2)));
        }
    }

    #[test]
    fn guard() {
        // D(6,6)^2 = 8989^2 > 1e6
        assert!(matches!(
            enumerate_assignment_maps(2, 7, 7),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn exact_mean_trivial_cases() {
        let s = PointSequence::from_scalars(&[0.0, 2.0, -1.0]).unwrap();
        let one = Instance::new(vec![s.clone()]).unwrap();
        let (c, cost) = exact_mean(&one, 3).unwrap();
        assert_eq!(c.as_sequence(), &s);
        assert_eq!(cost, 0.0);
        let two = Instance::new(vec![s.clone(), s.clone()]).unwrap();
        let (c, cost) = exact_mean(&two, 3).unwrap();
        assert_eq!(c.as_sequence(), &s);
        assert_eq!(cost, 0.0);
    }

    #[test]
    fn fixed_point_checks() {
        let s = PointSequence::from_scalars(&[0.0, 2.0, -1.0]).unwrap();
        let x = Instance::new(vec![s.clone()]).unwrap();
        assert!(is_fixed_point(&x, &MeanSequence::new(s)));
        let far = MeanSequence::new(PointSequence::from_scalars(&[100.0, 100.0, 100.0]).unwrap());
        assert!(!is_fixed_point(&x, &far));
    }
}
