use std::fmt;

use serde::Serialize;

use crate::dba::{potential_bound, smoothed_bound_log, worst_case_bound_log, DbaRun};
use crate::error::Result;
use crate::sequence::Instance;
use crate::smoothed::normalization_parameter;

/// Empirical check of one run against the potential-function bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunCheck {
    pub iterations: usize,
    pub b: f64,
    /// `None` when the run never moved between distinct means.
    pub eps_visited: Option<f64>,
    pub potential_bound: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub d: usize,
    pub sigma: f64,
    pub worst_case_log: f64,
    /// Natural log of the smoothed bound, or why it is unavailable.
    pub smoothed_log: std::result::Result<f64, String>,
    pub run: Option<RunCheck>,
}

impl RunCheck {
    pub fn from_run(x: &Instance, run: &DbaRun) -> Result<Self> {
        let b = normalization_parameter(x);
        let eps_visited = run.visited_separation().ok();
        let potential_bound = match eps_visited {
            Some(eps) if b > 0.0 => Some(potential_bound(b, run.m, run.k, eps)?),
            _ => None,
        };
        // Without two distinct visited means the run can only have stepped once.
        let pass = match potential_bound {
            Some(bound) => run.iterations as f64 <= bound,
            None => run.iterations <= 2,
        };
        Ok(RunCheck {
            iterations: run.iterations,
            b,
            eps_visited,
            potential_bound,
            pass,
        })
    }
}

pub fn report_bounds(
    n: usize,
    m: usize,
    k: usize,
    d: usize,
    sigma: f64,
    run: Option<(&Instance, &DbaRun)>,
) -> Result<BoundsReport> {
    let worst_case_log = worst_case_bound_log(n, m, k, d)?;
    if d == 1 {
        log::warn!("the smoothed bound needs d >= 2");
    }
    let smoothed_log = smoothed_bound_log(n, m, k, d, sigma).map_err(|e| e.to_string());
    let run = run.map(|(x, r)| RunCheck::from_run(x, r)).transpose()?;
    Ok(BoundsReport {
        n,
        m,
        k,
        d,
        sigma,
        worst_case_log,
        smoothed_log,
        run,
    })
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n={} m={} k={} d={} sigma={}",
            self.n, self.m, self.k, self.d, self.sigma
        )?;
        writeln!(f, "worst_case_log={}", self.worst_case_log)?;
        match &self.smoothed_log {
            Ok(v) => writeln!(f, "smoothed_log={v} smoothed={}", v.exp())?,
            Err(e) => writeln!(f, "smoothed_log=unavailable ({e})")?,
        }
        if let Some(r) = &self.run {
            let show = |x: Option<f64>| x.map_or("undefined".to_string(), |v| v.to_string());
            writeln!(
                f,
                "iterations={} B={} eps_visited={} potential_bound={} {}",
                r.iterations,
                r.b,
                show(r.eps_visited),
                show(r.potential_bound),
                if r.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}
