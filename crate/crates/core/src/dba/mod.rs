//! The DBA iteration: centroid update, optimal re-assignment, tracing, and
//! the iteration-count bound calculators.

mod assignment;
mod bounds;
mod run;

pub use assignment::{
    compute_mean, inertia, optimal_assignment, total_warping_distance, AssignmentMap, MeanSequence,
};
pub use bounds::{potential_bound, smoothed_bound, smoothed_bound_log, worst_case_bound_log};
pub use run::{
    run_dba, run_dba_from_mean, run_dba_observed, DbaOptions, DbaRun, IterationRecord,
    IterationView, Termination, DEFAULT_CAP,
};
