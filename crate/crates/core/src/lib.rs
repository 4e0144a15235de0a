//! DTW Barycenter Averaging (DBA) with full iteration tracing.
//!
//! Besides the algorithm itself the crate ships the tools used to study its
//! iteration count: the adversarial gadget family, a Gaussian perturbation
//! harness, exhaustive oracles for tiny instances, and the experiment runner
//! behind the `dba` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dba;
pub mod dtw;
pub mod error;
pub mod experiment;
pub mod init;
pub mod lowerbound;
pub mod numeric;
pub mod oracle;
pub mod path;
pub mod rng;
pub mod sequence;
pub mod smoothed;

pub use dba::{
    compute_mean, inertia, optimal_assignment, run_dba, total_warping_distance, AssignmentMap,
    DbaOptions, DbaRun, MeanSequence, Termination,
};
pub use dtw::{dtw_distance, optimal_warping_path};
pub use error::{Error, Result};
pub use path::{validate_warping_path, WarpingPath};
pub use sequence::{Instance, PointSequence};
