use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::runner::ExperimentResult;
use crate::dba::DbaRun;
use crate::error::Result;
use crate::rng::RNG_ALGORITHM;
use crate::smoothed::IterationTail;

/// Shortest representation that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}

pub fn summary_csv(res: &ExperimentResult) -> String {
    let mut out = String::from("grid_value,mean_iters,var_iters,repeats\n");
    for s in &res.summary {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_f64(s.grid_value),
            opt(s.mean_iters),
            opt(s.var_iters),
            s.repeats
        );
    }
    out
}

pub fn raw_csv(res: &ExperimentResult) -> String {
    let mut out = String::from("grid_value,repeat_index,seed,iterations,phi_final,termination\n");
    for r in &res.raw {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_f64(r.grid_value),
            r.repeat_index,
            r.seed,
            r.iterations,
            format_f64(r.phi_final),
            r.termination
        );
    }
    out
}

pub fn exponents_csv(res: &ExperimentResult) -> String {
    let mut out = String::from("series_label,exponent,intercept,r_squared\n");
    for e in &res.exponents {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.series_label,
            format_f64(e.fit.exponent),
            format_f64(e.fit.intercept),
            format_f64(e.fit.r_squared)
        );
    }
    out
}

pub fn trace_csv(run: &DbaRun) -> String {
    let mut out = String::from("iteration,phi,inertia,mean_l2_displacement\n");
    for r in &run.trace {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.iteration,
            format_f64(r.phi),
            format_f64(r.inertia),
            opt(r.mean_displacement)
        );
    }
    out
}

pub fn tail_csv(tail: &IterationTail) -> String {
    let mut out = String::from("trial,seed,iterations,phi_final,eps_visited,B\n");
    for t in &tail.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            t.trial,
            t.seed,
            t.iterations,
            format_f64(t.phi_final),
            opt(t.eps_visited),
            format_f64(t.b)
        );
    }
    out
}

/// Reproducibility record written next to every output set.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest<T: Serialize> {
    pub rng: &'static str,
    pub seed: u64,
    pub version: &'static str,
    pub config: T,
}

impl<T: Serialize> Manifest<T> {
    pub fn new(seed: u64, config: T) -> Self {
        Manifest {
            rng: RNG_ALGORITHM,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            config,
        }
    }
}

/// Writes `summary.csv`, `raw.csv`, `exponents.csv` into `dir` and returns their paths.
pub fn write_experiment(dir: &Path, res: &ExperimentResult) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files = [
        ("summary.csv", summary_csv(res)),
        ("raw.csv", raw_csv(res)),
        ("exponents.csv", exponents_csv(res)),
    ];
    let mut paths = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        fs::write(&p, body)?;
        paths.push(p);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0, 25.0, 1e-7, 1.0 / 3.0, 6.02e23] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_f64(25.0), "25.0");
    }
}
