//! Gaussian perturbation model and Monte Carlo estimators for the
//! normalization/separation parameters and iteration-count tails.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dba::{run_dba, run_dba_from_mean, AssignmentMap, DbaOptions, DbaRun, Termination};
use crate::error::{Error, Result};
use crate::init::{medoid_init, random_walk_init_with};
use crate::rng::rng_from_seed;
use crate::sequence::{Instance, PointSequence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub sigma: f64,
    pub seed: u64,
    pub trials: usize,
}

impl PerturbationConfig {
    pub fn new(sigma: f64, seed: u64, trials: usize) -> Result<Self> {
        let cfg = PerturbationConfig {
            sigma,
            seed,
            trials,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::input("sigma must be positive and finite"));
        }
        if self.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        Ok(())
    }
}

/// Adds i.i.d. `N(0, sigma)` noise to every coordinate, drawing from `rng`.
///
/// For `sigma > 1` the equivalent scaled-down model is used instead: the
/// instance is divided by `sigma` and unit-variance noise is added. DBA
/// iteration counts are invariant under this rescaling.
pub fn perturb_with<R: Rng + ?Sized>(x: &Instance, sigma: f64, rng: &mut R) -> Result<Instance> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::input("sigma must be positive and finite"));
    }
    let outside = x
        .sequences()
        .iter()
        .flat_map(|s| s.as_flat())
        .any(|&c| !(0.0..=1.0).contains(&c));
    if outside {
        log::warn!("perturbing an instance with coordinates outside the unit box");
    }
    let (scale, std) = if sigma > 1.0 {
        (1.0 / sigma, 1.0)
    } else {
        (1.0, sigma)
    };
    let noise = Normal::new(0.0, std).expect("std is positive");
    let sequences = x
        .sequences()
        .iter()
        .map(|s| {
            let coords = s
                .as_flat()
                .iter()
                .map(|&c| c * scale + noise.sample(rng))
                .collect();
            PointSequence::from_flat(s.dim(), coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(sequences)
}

/// Perturbation seeded from `cfg.seed`.
pub fn perturb(x: &Instance, cfg: &PerturbationConfig) -> Result<Instance> {
    cfg.validate()?;
    perturb_with(x, cfg.sigma, &mut rng_from_seed(cfg.seed))
}

/// Tightest normalization parameter `B`: the largest squared point norm.
pub fn normalization_parameter(x: &Instance) -> f64 {
    x.max_squared_norm()
}

/// Separation over the consecutive distinct means a run visited.
pub fn visited_separation(run: &DbaRun) -> Result<f64> {
    run.visited_separation()
}

/// Norm threshold `sqrt(d) + t sigma sqrt(2 d ln(n m))` from the Gaussian tail bound.
pub fn norm_tail_threshold(n: usize, m: usize, d: usize, sigma: f64, t: f64) -> f64 {
    let d = d as f64;
    d.sqrt() + t * sigma * (2.0 * d * ((n * m) as f64).ln()).sqrt()
}

/// Probability bound `e^{1 - t^2}` for exceeding [`norm_tail_threshold`].
pub fn norm_tail_probability_bound(t: f64) -> f64 {
    (1.0 - t * t).exp()
}

/// How each trial's first assignment is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitScheme {
    RandomWalk,
    Medoid,
    /// A fixed map, reused for every perturbed copy.
    Explicit(AssignmentMap),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub iterations: usize,
    pub phi_final: f64,
    /// `None` when the run visited fewer than two distinct means.
    pub eps_visited: Option<f64>,
    pub b: f64,
    pub termination: Termination,
}

/// Empirical distribution of iteration counts over perturbed trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTail {
    pub records: Vec<TrialRecord>,
    pub sorted_iterations: Vec<usize>,
    pub mean: f64,
}

impl IterationTail {
    /// Empirical `P(iterations <= v)`.
    pub fn cdf(&self, v: usize) -> f64 {
        let below = self.sorted_iterations.partition_point(|&x| x <= v);
        below as f64 / self.sorted_iterations.len() as f64
    }

    pub fn capped_trials(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.termination == Termination::IterationCap)
            .count()
    }
}

/// Runs DBA on one perturbed copy of `x_base`.
pub fn run_trial(
    x_base: &Instance,
    k: usize,
    sigma: f64,
    seed: u64,
    init: &InitScheme,
    opts: DbaOptions,
) -> Result<(Instance, DbaRun)> {
    let mut rng = rng_from_seed(seed);
    let x = perturb_with(x_base, sigma, &mut rng)?;
    let run = match init {
        InitScheme::RandomWalk => {
            let pi = random_walk_init_with(&x, k, &mut rng)?;
            run_dba(&x, k, &pi, opts)?
        }
        InitScheme::Medoid => run_dba_from_mean(&x, &medoid_init(&x)?, opts)?,
        InitScheme::Explicit(pi) => run_dba(&x, k, pi, opts)?,
    };
    Ok((x, run))
}

/// DBA on `cfg.trials` independent perturbations; trial `t` uses seed `seed ^ t`.
/// Capped trials are kept.
pub fn iteration_tail(
    x_base: &Instance,
    k: usize,
    cfg: &PerturbationConfig,
    init: &InitScheme,
    opts: DbaOptions,
) -> Result<IterationTail> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = cfg.seed ^ trial as u64;
            let (x, run) = run_trial(x_base, k, cfg.sigma, seed, init, opts)?;
            Ok(TrialRecord {
                trial,
                seed,
                iterations: run.iterations,
                phi_final: run.final_phi(),
                eps_visited: run.visited_separation().ok(),
                b: normalization_parameter(&x),
                termination: run.termination,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sorted_iterations: Vec<usize> = records.iter().map(|r| r.iterations).collect();
    sorted_iterations.sort_unstable();
    let mean = sorted_iterations.iter().sum::<usize>() as f64 / sorted_iterations.len() as f64;
    Ok(IterationTail {
        records,
        sorted_iterations,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_instance() -> Instance {
        let s = PointSequence::from_points(&[[0.2, 0.4], [0.9, 0.1], [0.5, 0.5]]).unwrap();
        Instance::new(vec![s.clone(), s]).unwrap()
    }

    #[test]
    fn tiny_sigma_barely_moves_points() {
        let x = unit_instance();
        let y = perturb(&x, &PerturbationConfig::new(1e-12, 3, 1).unwrap()).unwrap();
        for (a, b) in x.sequences().iter().zip(y.sequences()) {
            for (p, q) in a.as_flat().iter().zip(b.as_flat()) {
                assert!((p - q).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn perturbation_is_reproducible() {
        let x = unit_instance();
        let cfg = PerturbationConfig::new(0.3, 11, 1).unwrap();
        assert_eq!(perturb(&x, &cfg).unwrap(), perturb(&x, &cfg).unwrap());
    }

    #[test]
    fn large_sigma_rescales() {
        let x = unit_instance();
        let y = perturb(&x, &PerturbationConfig::new(4.0, 1, 1).unwrap()).unwrap();
        assert_eq!(y.n(), 2);
        assert!(PerturbationConfig::new(0.0, 1, 1).is_err());
        assert!(PerturbationConfig::new(0.5, 1, 0).is_err());
    }

    #[test]
    fn normalization_examples() {
        let zero = Instance::new(vec![PointSequence::from_points(&[[0.0, 0.0]]).unwrap()]).unwrap();
        assert_eq!(normalization_parameter(&zero), 0.0);
        let tri = Instance::new(vec![PointSequence::from_points(&[[3.0, 4.0]]).unwrap()]).unwrap();
        assert_eq!(normalization_parameter(&tri), 25.0);
    }

    #[test]
    fn single_trial_tail() {
        let x = unit_instance();
        let cfg = PerturbationConfig::new(0.1, 5, 1).unwrap();
        let tail =
            iteration_tail(&x, 2, &cfg, &InitScheme::RandomWalk, DbaOptions::default()).unwrap();
        assert_eq!(tail.sorted_iterations.len(), 1);
        assert_eq!(tail.mean, tail.sorted_iterations[0] as f64);
        assert_eq!(tail.cdf(tail.sorted_iterations[0]), 1.0);
        assert_eq!(tail.records[0].seed, 5);
    }
}
