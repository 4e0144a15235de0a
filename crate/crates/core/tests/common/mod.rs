#![allow(dead_code)]

use dba_core::{Instance, PointSequence};
use proptest::prelude::*;

/// One sequence of `len` points in `[0,1]^dim`.
pub fn sequence(len: usize, dim: usize) -> impl Strategy<Value = PointSequence> {
    proptest::collection::vec(0.0..=1.0f64, len * dim)
        .prop_map(move |c| PointSequence::from_flat(dim, c).unwrap())
}

/// Random instance with the given size ranges; coordinates in `[0,1]`.
pub fn instance(
    n: std::ops::RangeInclusive<usize>,
    m: std::ops::RangeInclusive<usize>,
    dim: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Instance> {
    (n, m, dim).prop_flat_map(|(n, m, d)| {
        proptest::collection::vec(sequence(m, d), n).prop_map(|s| Instance::new(s).unwrap())
    })
}

/// Straightforward minimum over all enumerated warping paths.
pub fn brute_force_dtw(a: &PointSequence, b: &PointSequence) -> f64 {
    dba_core::path::enumerate_warping_paths(a.len(), b.len())
        .unwrap()
        .iter()
        .map(|w| dba_core::dtw::path_cost(a, b, w))
        .fold(f64::INFINITY, f64::min)
}

pub fn squared(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
