use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ingest::Corpus;
use super::regression::{loglog_exponent, RegressionResult};
use crate::dba::{run_dba, run_dba_from_mean, DbaOptions, DbaRun, Termination};
use crate::error::{Error, Result};
use crate::init::{medoid_init, random_walk_init_with};
use crate::lowerbound::{generate_gadget_instance, GadgetParams, DEFAULT_SCALE};
use crate::rng::{mix_seed, rng_from_seed};
use crate::sequence::Instance;
use crate::smoothed::{iteration_tail, InitScheme, PerturbationConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Grid over the number of series; consecutive series from a random start.
    VaryN,
    /// Grid over the window length; all series, shared random start day.
    VaryM,
    /// Grid over the mean length; all series at full length.
    VaryK,
    /// Grid over the gadget count of the adversarial construction.
    LowerboundDemo,
    /// Grid over sigma; the corpus is normalized into the unit box and perturbed.
    SmoothedTail,
    /// Grid over the mean length, whole corpus, no regression.
    SingleRun,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::VaryN,
        Mode::VaryM,
        Mode::VaryK,
        Mode::LowerboundDemo,
        Mode::SmoothedTail,
        Mode::SingleRun,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::VaryN => "vary_n",
            Mode::VaryM => "vary_m",
            Mode::VaryK => "vary_k",
            Mode::LowerboundDemo => "lowerbound_demo",
            Mode::SmoothedTail => "smoothed_tail",
            Mode::SingleRun => "single_run",
        }
    }

    fn integer_grid(self) -> bool {
        self != Mode::SmoothedTail
    }

    fn needs_corpus(self) -> bool {
        self != Mode::LowerboundDemo
    }

    fn fits_exponent(self) -> bool {
        matches!(self, Mode::VaryN | Mode::VaryM | Mode::VaryK)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown experiment mode {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    #[default]
    RandomWalk,
    Medoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub grid: Vec<f64>,
    pub repeats: usize,
    pub seed: u64,
    /// Mean length; defaults to the window length `m`.
    pub k: Option<usize>,
    /// Window length for `vary_n` (required) and `vary_k` (optional).
    pub length: Option<usize>,
    pub cap: usize,
    pub init: InitKind,
    /// Weight multiplier for `lowerbound_demo`.
    pub scale: usize,
}

impl ExperimentConfig {
    pub fn new(mode: Mode, grid: Vec<f64>) -> Self {
        ExperimentConfig {
            mode,
            grid,
            repeats: 10,
            seed: 0,
            k: None,
            length: None,
            cap: crate::dba::DEFAULT_CAP,
            init: InitKind::RandomWalk,
            scale: DEFAULT_SCALE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::input("grid is empty"));
        }
        if self.repeats == 0 {
            return Err(Error::input("repeats must be at least 1"));
        }
        if self.cap == 0 {
            return Err(Error::input("cap must be at least 1"));
        }
        for &g in &self.grid {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::input(format!("grid value {g} must be positive")));
            }
            if self.mode.integer_grid() && g.fract() != 0.0 {
                return Err(Error::input(format!("grid value {g} must be an integer")));
            }
        }
        if self.mode == Mode::VaryN && self.length.is_none() {
            return Err(Error::input("vary_n needs a window length"));
        }
        if self.k == Some(0) || self.length == Some(0) {
            return Err(Error::input("k and length must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub grid_value: f64,
    pub repeat_index: usize,
    pub seed: u64,
    pub iterations: usize,
    pub phi_final: f64,
    pub termination: Termination,
}

/// Per grid value aggregate; statistics are `None` for infeasible grid values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub grid_value: f64,
    pub mean_iters: Option<f64>,
    /// Population variance.
    pub var_iters: Option<f64>,
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub series_label: String,
    pub fit: RegressionResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub raw: Vec<RawRow>,
    pub summary: Vec<SummaryRow>,
    pub exponents: Vec<ExponentRow>,
}

/// Builds the instance for one repeat, or `None` if the grid value does not fit the corpus.
fn build_instance(
    cfg: &ExperimentConfig,
    corpus: &Corpus,
    grid: usize,
    rng: &mut impl Rng,
) -> Result<Option<(Instance, usize)>> {
    let (count, total_len) = (corpus.len(), corpus.series_len());
    let (first, n, len) = match cfg.mode {
        Mode::VaryN => {
            let len = cfg.length.expect("validated");
            if grid > count || len > total_len {
                return Ok(None);
            }
            (rng.gen_range(0..=count - grid), grid, len)
        }
        Mode::VaryM => {
            if grid > total_len {
                return Ok(None);
            }
            (0, count, grid)
        }
        Mode::VaryK | Mode::SingleRun => {
            let len = cfg.length.unwrap_or(total_len);
            if len > total_len {
                return Ok(None);
            }
            (0, count, len)
        }
        Mode::LowerboundDemo | Mode::SmoothedTail => unreachable!("handled separately"),
    };
    let start = rng.gen_range(0..=total_len - len);
    let k = match cfg.mode {
        Mode::VaryK | Mode::SingleRun => grid,
        _ => cfg.k.unwrap_or(len),
    };
    Ok(Some((corpus.window(first, n, start, len)?, k)))
}

fn run_once(
    x: &Instance,
    k: usize,
    init: InitKind,
    cap: usize,
    rng: &mut impl Rng,
) -> Result<DbaRun> {
    let opts = DbaOptions::with_cap(cap);
    match init {
        InitKind::RandomWalk => {
            let pi = random_walk_init_with(x, k, rng)?;
            run_dba(x, k, &pi, opts)
        }
        InitKind::Medoid => run_dba_from_mean(x, &medoid_init(x)?, opts),
    }
}

fn raw_row(grid_value: f64, repeat_index: usize, seed: u64, run: &DbaRun) -> RawRow {
    RawRow {
        grid_value,
        repeat_index,
        seed,
        iterations: run.iterations,
        phi_final: run.final_phi(),
        termination: run.termination,
    }
}

fn corpus_rows(cfg: &ExperimentConfig, corpus: &Corpus) -> Result<Vec<Option<RawRow>>> {
    let jobs: Vec<(usize, usize)> = (0..cfg.grid.len())
        .flat_map(|g| (0..cfg.repeats).map(move |r| (g, r)))
        .collect();
    jobs.into_par_iter()
        .map(|(g, r)| {
            let seed = mix_seed(cfg.seed, ((g as u64) << 32) | r as u64);
            let mut rng = rng_from_seed(seed);
            let value = cfg.grid[g];
            match build_instance(cfg, corpus, value as usize, &mut rng)? {
                None => Ok(None),
                Some((x, k)) => {
                    let run = run_once(&x, k, cfg.init, cfg.cap, &mut rng)?;
                    Ok(Some(raw_row(value, r, seed, &run)))
                }
            }
        })
        .collect()
}

fn smoothed_rows(cfg: &ExperimentConfig, corpus: &Corpus) -> Result<Vec<Option<RawRow>>> {
    let base = corpus.to_instance()?.normalized_to_unit_box();
    let k = cfg.k.unwrap_or(base.m());
    let init = match cfg.init {
        InitKind::RandomWalk => InitScheme::RandomWalk,
        InitKind::Medoid => InitScheme::Medoid,
    };
    let mut rows = Vec::new();
    for (g, &sigma) in cfg.grid.iter().enumerate() {
        let pcfg = PerturbationConfig::new(sigma, mix_seed(cfg.seed, g as u64), cfg.repeats)?;
        let tail = iteration_tail(&base, k, &pcfg, &init, DbaOptions::with_cap(cfg.cap))?;
        rows.extend(tail.records.into_iter().map(|t| {
            Some(RawRow {
                grid_value: sigma,
                repeat_index: t.trial,
                seed: t.seed,
                iterations: t.iterations,
                phi_final: t.phi_final,
                termination: t.termination,
            })
        }));
    }
    Ok(rows)
}

/// The adversarial construction is deterministic, so each grid value runs once.
fn lowerbound_rows(cfg: &ExperimentConfig) -> Result<Vec<Option<RawRow>>> {
    cfg.grid
        .par_iter()
        .map(|&g| {
            let params = GadgetParams::new(g as usize).with_scale(cfg.scale);
            let gi = generate_gadget_instance(&params, true)?;
            let run = run_dba(
                &gi.instance,
                gi.k,
                &gi.initial_assignment,
                DbaOptions::with_cap(cfg.cap),
            )?;
            Ok(Some(raw_row(g, 0, cfg.seed, &run)))
        })
        .collect()
}

fn summarize(grid: &[f64], rows: &[Option<RawRow>]) -> Vec<SummaryRow> {
    grid.iter()
        .map(|&value| {
            let its: Vec<f64> = rows
                .iter()
                .flatten()
                .filter(|r| r.grid_value == value)
                .map(|r| r.iterations as f64)
                .collect();
            if its.is_empty() {
                return SummaryRow {
                    grid_value: value,
                    mean_iters: None,
                    var_iters: None,
                    repeats: 0,
                };
            }
            let n = its.len() as f64;
            let mean = its.iter().sum::<f64>() / n;
            let var = its.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            SummaryRow {
                grid_value: value,
                mean_iters: Some(mean),
                var_iters: Some(var),
                repeats: its.len(),
            }
        })
        .collect()
}

/// Runs every grid value `repeats` times. Results do not depend on the
/// thread count: each repeat draws from its own seed derived from
/// `(seed, grid index, repeat)` and rows keep grid-then-repeat order.
///
/// Grid values that do not fit the corpus are skipped with a warning and
/// reported with empty statistics.
pub fn run_experiment(cfg: &ExperimentConfig, corpus: Option<&Corpus>) -> Result<ExperimentResult> {
    cfg.validate()?;
    let rows = if cfg.mode.needs_corpus() {
        let corpus = corpus
            .filter(|c| !c.is_empty())
            .ok_or_else(|| Error::input(format!("mode {} needs a corpus", cfg.mode)))?;
        if cfg.mode == Mode::SmoothedTail {
            smoothed_rows(cfg, corpus)?
        } else {
            corpus_rows(cfg, corpus)?
        }
    } else {
        lowerbound_rows(cfg)?
    };
    let summary = summarize(&cfg.grid, &rows);
    for s in summary.iter().filter(|s| s.repeats == 0) {
        log::warn!(
            "grid value {} does not fit the corpus; skipped",
            s.grid_value
        );
    }
    if summary.iter().all(|s| s.repeats == 0) {
        return Err(Error::Infeasible("no grid value fits the corpus".into()));
    }
    let mut exponents = Vec::new();
    if cfg.mode.fits_exponent() {
        let pts: Vec<(f64, f64)> = summary
            .iter()
            .filter_map(|s| s.mean_iters.map(|m| (s.grid_value, m)))
            .collect();
        match loglog_exponent(&pts) {
            Ok(fit) => exponents.push(ExponentRow {
                series_label: format!("{}_mean_iters", cfg.mode),
                fit,
            }),
            Err(e) => log::warn!("no exponent fitted: {e}"),
        }
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        raw: rows.into_iter().flatten().collect(),
        summary,
        exponents,
    })
}
