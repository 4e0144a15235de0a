use serde::{Deserialize, Serialize};

use super::assignment::{
    compute_mean, optimal_assignment, total_warping_distance, AssignmentMap, MeanSequence,
};
use crate::error::{Error, Result};
use crate::sequence::Instance;

/// Default iteration cap.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The new assignment map equals the previous one.
    Converged,
    /// The iteration cap was reached first.
    IterationCap,
    /// The assignment changed but its cost did not decrease.
    CostStall,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::IterationCap => "iteration_cap",
            Termination::CostStall => "cost_stall",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DbaOptions {
    pub cap: usize,
    /// Keep every intermediate assignment map in the trace.
    pub keep_assignments: bool,
}

impl Default for DbaOptions {
    fn default() -> Self {
        DbaOptions {
            cap: DEFAULT_CAP,
            keep_assignments: false,
        }
    }
}

impl DbaOptions {
    pub fn with_cap(cap: usize) -> Self {
        DbaOptions {
            cap,
            ..Self::default()
        }
    }
}

/// Record of iteration `j`: the mean `C_j = C(pi_{j-1})` and the assignment
/// `pi_j` computed against it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub mean: MeanSequence,
    /// `Phi(pi_j)`: cost of the new assignment against `C_j`.
    pub phi: f64,
    /// Inertia of the assignment `C_j` was computed from.
    pub inertia: f64,
    /// Euclidean norm of `C_j - C_{j-1}`; `None` on the first iteration.
    pub mean_displacement: Option<f64>,
    pub assignment: Option<AssignmentMap>,
}

/// What an observer sees after each iteration.
pub struct IterationView<'a> {
    pub iteration: usize,
    pub mean: &'a MeanSequence,
    pub previous: &'a AssignmentMap,
    pub assignment: &'a AssignmentMap,
    pub phi: f64,
    pub inertia: f64,
}

/// Full trace of one DBA execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbaRun {
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub termination: Termination,
    pub initial_assignment: AssignmentMap,
    pub final_assignment: AssignmentMap,
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl DbaRun {
    pub fn final_mean(&self) -> &MeanSequence {
        &self
            .trace
            .last()
            .expect("a run has at least one iteration")
            .mean
    }

    pub fn final_phi(&self) -> f64 {
        self.trace
            .last()
            .expect("a run has at least one iteration")
            .phi
    }

    pub fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        self.trace.iter().map(|r| r.phi)
    }

    /// Minimum of `sum_i ||c_i(alpha) - c_i(beta)||^2` over consecutive
    /// visited means that differ. This is the separation parameter restricted
    /// to the pairs the run actually stepped between.
    pub fn visited_separation(&self) -> Result<f64> {
        self.trace
            .windows(2)
            .filter_map(|w| {
                let d = w[0]
                    .mean
                    .squared_distance(&w[1].mean)
                    .expect("means of one run share a shape");
                (d > 0.0).then_some(d)
            })
            .reduce(f64::min)
            .ok_or_else(|| Error::Undefined("run visited fewer than two distinct means".into()))
    }
}

/// Runs DBA from the initial assignment `init` with mean length `k`.
pub fn run_dba(x: &Instance, k: usize, init: &AssignmentMap, opts: DbaOptions) -> Result<DbaRun> {
    run_dba_observed(x, k, init, opts, |_| {})
}

/// Runs DBA from an initial mean: the first assignment is the optimal
/// assignment against `mean`.
pub fn run_dba_from_mean(x: &Instance, mean: &MeanSequence, opts: DbaOptions) -> Result<DbaRun> {
    let init = optimal_assignment(x, mean)?;
    run_dba(x, mean.k(), &init, opts)
}

/// [`run_dba`] with a callback invoked after every iteration.
pub fn run_dba_observed<F>(
    x: &Instance,
    k: usize,
    init: &AssignmentMap,
    opts: DbaOptions,
    mut observe: F,
) -> Result<DbaRun>
where
    F: FnMut(&IterationView<'_>),
{
    if opts.cap == 0 {
        return Err(Error::input("iteration cap must be at least 1"));
    }
    init.check_against(x)?;
    if init.k() != k {
        return Err(Error::input(format!(
            "initial assignment has mean length {}, expected {k}",
            init.k()
        )));
    }
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut prev = init.clone();
    let mut termination = Termination::IterationCap;
    for iteration in 1..=opts.cap {
        let mean = compute_mean(x, &prev)?;
        let inertia = total_warping_distance(x, &prev, &mean)?;
        let next = optimal_assignment(x, &mean)?;
        let phi = total_warping_distance(x, &next, &mean)?;
        let mean_displacement = trace
            .last()
            .map(|r| r.mean.squared_distance(&mean).map(f64::sqrt))
            .transpose()?;
        observe(&IterationView {
            iteration,
            mean: &mean,
            previous: &prev,
            assignment: &next,
            phi,
            inertia,
        });
        let converged = next == prev;
        let stalled = !converged && trace.last().is_some_and(|r| phi >= r.phi);
        trace.push(IterationRecord {
            iteration,
            mean,
            phi,
            inertia,
            mean_displacement,
            assignment: opts.keep_assignments.then(|| next.clone()),
        });
        prev = next;
        if converged {
            termination = Termination::Converged;
            break;
        }
        if stalled {
            termination = Termination::CostStall;
            break;
        }
    }
    Ok(DbaRun {
        iterations: trace.len(),
        trace,
        termination,
        initial_assignment: init.clone(),
        final_assignment: prev,
        n: x.n(),
        m: x.m(),
        k,
    })
}
