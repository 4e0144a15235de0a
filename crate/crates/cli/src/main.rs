//! `dba`: command-line front end for running DBA, parameter sweeps,
//! adversarial instances, perturbation studies and bound reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dba_core::dba::{run_dba, run_dba_from_mean, DbaOptions, DbaRun};
use dba_core::experiment::{
    corpus_csv, ingest_csv, report_bounds, run_experiment, tail_csv, trace_csv, write_experiment,
    Corpus, ExperimentConfig, InitKind, Manifest, Mode,
};
use dba_core::init::{medoid_init, random_walk_init};
use dba_core::lowerbound::{generate_gadget_instance, GadgetInstance, GadgetParams, DEFAULT_SCALE};
use dba_core::oracle::{exact_mean, is_fixed_point};
use dba_core::rng::mix_seed;
use dba_core::smoothed::{iteration_tail, InitScheme, PerturbationConfig};
use dba_core::{Error, Instance};

#[derive(Parser, Debug)]
#[command(name = "dba", version, about = "DTW barycenter averaging experiments")]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per DBA run.
    #[arg(long, global = true, default_value_t = dba_core::dba::DEFAULT_CAP)]
    cap: usize,
    /// Directory for output files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Point dimension of input CSV values (consecutive groups of this many cells).
    #[arg(long, global = true, default_value_t = 1)]
    dim: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run DBA once on a corpus and write its trace.
    Run(RunArgs),
    /// Parameter sweep over a grid.
    Experiment(ExperimentArgs),
    /// Generate the adversarial gadget instance.
    Lowerbound(LowerboundArgs),
    /// Iteration counts under Gaussian perturbation.
    Smoothed(SmoothedArgs),
    /// Report the worst-case, smoothed and potential bounds.
    Bounds(BoundsArgs),
    /// Compare DBA against the exhaustive optimum on a tiny instance.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitArg {
    RandomWalk,
    Medoid,
}

impl From<InitArg> for InitKind {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::RandomWalk => InitKind::RandomWalk,
            InitArg::Medoid => InitKind::Medoid,
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    /// Mean length; defaults to the series length.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "random-walk")]
    init: InitArg,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Corpus CSV; not needed for `lowerbound_demo`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// One of vary_n, vary_m, vary_k, lowerbound_demo, smoothed_tail, single_run.
    #[arg(long)]
    mode: Mode,
    /// Comma-separated grid values.
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long)]
    k: Option<usize>,
    /// Window length (required for vary_n).
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, value_enum, default_value = "random-walk")]
    init: InitArg,
    /// Weight multiplier for lowerbound_demo.
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: usize,
}

#[derive(Args, Debug)]
struct LowerboundArgs {
    /// Number of gadgets.
    #[arg(long)]
    gadgets: usize,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: usize,
    /// Do not prepend the length-balancing gadget.
    #[arg(long)]
    no_balance: bool,
    /// Also run DBA from the prescribed assignment and write its trace.
    #[arg(long)]
    run: bool,
}

#[derive(Args, Debug)]
struct SmoothedArgs {
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base instance CSV; normalized into the unit box before perturbing.
    #[arg(long, conflicts_with = "gadgets")]
    input: Option<PathBuf>,
    /// Use the gadget instance with this many gadgets as base.
    #[arg(long)]
    gadgets: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "random-walk")]
    init: InitArg,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Defaults to `--dim`.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Run DBA on this corpus and check the potential bound; n, m and d default to it.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// Random-walk starts to compare against the optimum.
    #[arg(long, default_value_t = 20)]
    inits: usize,
}

/// A violated internal invariant (exit code 3).
#[derive(Debug)]
struct AssertionFailure(String);

impl std::fmt::Display for AssertionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "assertion failed: {}", self.0)
    }
}

impl std::error::Error for AssertionFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<AssertionFailure>().is_some() {
        return 3;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Infeasible(_) | Error::Size(_)) => 2,
        Some(Error::Undefined(_)) => 3,
        _ => 1,
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let p = dir.join(name);
    fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
    Ok(p)
}

fn load(path: &Path, dim: usize) -> anyhow::Result<Corpus> {
    Ok(ingest_csv(path, dim)?)
}

fn run_with_init(
    x: &Instance,
    k: usize,
    init: InitArg,
    seed: u64,
    cap: usize,
) -> anyhow::Result<DbaRun> {
    let opts = DbaOptions::with_cap(cap);
    Ok(match init {
        InitArg::RandomWalk => run_dba(x, k, &random_walk_init(x, k, seed)?, opts)?,
        InitArg::Medoid => run_dba_from_mean(x, &medoid_init(x)?, opts)?,
    })
}

fn print_run(run: &DbaRun) {
    println!(
        "iterations={} termination={} phi_final={}",
        run.iterations,
        run.termination,
        run.final_phi()
    );
}

fn cmd_run(cli: &Cli, a: &RunArgs) -> anyhow::Result<()> {
    let x = load(&a.input, cli.dim)?.to_instance()?;
    let k = a.k.unwrap_or(x.m());
    let run = run_with_init(&x, k, a.init, cli.seed, cli.cap)?;
    write_file(&cli.out_dir, "trace.csv", &trace_csv(&run))?;
    let mean = Corpus {
        labels: vec!["mean".into()],
        series: vec![run.final_mean().as_sequence().clone()],
    };
    write_file(&cli.out_dir, "mean.csv", &corpus_csv(&mean))?;
    print_run(&run);
    Ok(())
}

fn cmd_experiment(cli: &Cli, a: &ExperimentArgs) -> anyhow::Result<()> {
    let corpus = a.input.as_deref().map(|p| load(p, cli.dim)).transpose()?;
    let cfg = ExperimentConfig {
        mode: a.mode,
        grid: a.grid.clone(),
        repeats: a.repeats,
        seed: cli.seed,
        k: a.k,
        length: a.length,
        cap: cli.cap,
        init: a.init.into(),
        scale: a.scale,
    };
    let res = run_experiment(&cfg, corpus.as_ref())?;
    write_experiment(&cli.out_dir, &res)?;
    write_file(
        &cli.out_dir,
        "manifest.json",
        &serde_json::to_string_pretty(&Manifest::new(cli.seed, &cfg))?,
    )?;
    for s in &res.summary {
        match s.mean_iters {
            Some(mean) => println!("{}: mean_iters={mean} repeats={}", s.grid_value, s.repeats),
            None => println!("{}: skipped", s.grid_value),
        }
    }
    for e in &res.exponents {
        println!(
            "{}: exponent={} r_squared={}",
            e.series_label, e.fit.exponent, e.fit.r_squared
        );
    }
    Ok(())
}

fn gadget(gadgets: usize, scale: usize, balance: bool) -> anyhow::Result<GadgetInstance> {
    Ok(generate_gadget_instance(
        &GadgetParams::new(gadgets).with_scale(scale),
        balance,
    )?)
}

fn cmd_lowerbound(cli: &Cli, a: &LowerboundArgs) -> anyhow::Result<()> {
    let gi = gadget(a.gadgets, a.scale, !a.no_balance)?;
    let corpus = Corpus {
        labels: vec!["gamma1".into(), "gamma2".into()],
        series: gi.instance.sequences().to_vec(),
    };
    write_file(&cli.out_dir, "instance.csv", &corpus_csv(&corpus))?;
    let paths: Vec<Vec<(usize, usize)>> = gi
        .initial_assignment
        .paths()
        .iter()
        .map(|w| w.one_based().collect())
        .collect();
    let sidecar = json!({
        "params": gi.params,
        "n": gi.instance.n(),
        "m": gi.instance.m(),
        "d": gi.instance.dim(),
        "k": gi.k,
        "f": gi.f,
        "balance_position": gi.balance_position,
        "positions": gi.positions,
        "initial_assignment": paths,
    });
    write_file(
        &cli.out_dir,
        "instance.json",
        &serde_json::to_string_pretty(&sidecar)?,
    )?;
    println!("m={} k={}", gi.instance.m(), gi.k);
    if a.run {
        let run = run_dba(
            &gi.instance,
            gi.k,
            &gi.initial_assignment,
            DbaOptions::with_cap(cli.cap),
        )?;
        write_file(&cli.out_dir, "trace.csv", &trace_csv(&run))?;
        print_run(&run);
    }
    Ok(())
}

fn cmd_smoothed(cli: &Cli, a: &SmoothedArgs) -> anyhow::Result<()> {
    let (base, k, init) = match (&a.input, a.gadgets) {
        (Some(p), _) => {
            let x = load(p, cli.dim)?.to_instance()?.normalized_to_unit_box();
            let k = a.k.unwrap_or(x.m());
            let init = match a.init {
                InitArg::RandomWalk => InitScheme::RandomWalk,
                InitArg::Medoid => InitScheme::Medoid,
            };
            (x, k, init)
        }
        (None, Some(g)) => {
            let gi = gadget(g, a.scale, true)?;
            let x = gi.instance.normalized_to_unit_box();
            (x, gi.k, InitScheme::Explicit(gi.initial_assignment))
        }
        (None, None) => bail!(Error::input("smoothed needs --input or --gadgets")),
    };
    let cfg = PerturbationConfig::new(a.sigma, cli.seed, a.trials)?;
    let tail = iteration_tail(&base, k, &cfg, &init, DbaOptions::with_cap(cli.cap))?;
    write_file(&cli.out_dir, "tail.csv", &tail_csv(&tail))?;
    println!(
        "trials={} mean_iters={} max_iters={} capped={}",
        a.trials,
        tail.mean,
        tail.sorted_iterations.last().copied().unwrap_or(0),
        tail.capped_trials()
    );
    Ok(())
}

fn cmd_bounds(cli: &Cli, a: &BoundsArgs) -> anyhow::Result<()> {
    let data = match &a.input {
        Some(p) => {
            let x = load(p, cli.dim)?.to_instance()?;
            let k = a.k.unwrap_or(x.m());
            let run = run_with_init(&x, k, InitArg::RandomWalk, cli.seed, cli.cap)?;
            Some((x, run))
        }
        None => None,
    };
    let from_input = |f: fn(&Instance) -> usize| data.as_ref().map(|(x, _)| f(x));
    let n =
        a.n.or(from_input(Instance::n))
            .ok_or_else(|| Error::input("missing --n"))?;
    let m =
        a.m.or(from_input(Instance::m))
            .ok_or_else(|| Error::input("missing --m"))?;
    let k =
        a.k.or(data.as_ref().map(|(_, r)| r.k))
            .ok_or_else(|| Error::input("missing --k"))?;
    let d = a.d.or(from_input(Instance::dim)).unwrap_or(cli.dim);
    let report = report_bounds(n, m, k, d, a.sigma, data.as_ref().map(|(x, r)| (x, r)))?;
    print!("{report}");
    Ok(())
}

fn cmd_oracle(cli: &Cli, a: &OracleArgs) -> anyhow::Result<()> {
    let x = load(&a.input, cli.dim)?.to_instance()?;
    let (_, best) = exact_mean(&x, a.k)?;
    let mut rows = String::from("init,seed,iterations,phi_final,gap,fixed_point\n");
    let mut hits = 0;
    for i in 0..a.inits {
        let seed = mix_seed(cli.seed, i as u64);
        let run = run_with_init(&x, a.k, InitArg::RandomWalk, seed, cli.cap)?;
        let gap = run.final_phi() - best;
        if gap < -1e-9 * best.abs().max(1.0) {
            bail!(AssertionFailure(format!(
                "DBA cost {} below exhaustive optimum {best}",
                run.final_phi()
            )));
        }
        if gap <= 1e-9 * best.abs().max(1.0) {
            hits += 1;
        }
        let fixed = is_fixed_point(&x, run.final_mean());
        rows.push_str(&format!(
            "{i},{seed},{},{:?},{gap:?},{fixed}\n",
            run.iterations,
            run.final_phi()
        ));
    }
    write_file(&cli.out_dir, "oracle.csv", &rows)?;
    println!("exact_cost={best} optimal_hits={hits}/{}", a.inits);
    Ok(())
}

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    if cli.dim == 0 {
        bail!(Error::input("--dim must be positive"));
    }
    if cli.cap == 0 {
        bail!(Error::input("--cap must be positive"));
    }
    match &cli.command {
        Command::Run(a) => cmd_run(cli, a),
        Command::Experiment(a) => cmd_experiment(cli, a),
        Command::Lowerbound(a) => cmd_lowerbound(cli, a),
        Command::Smoothed(a) => cmd_smoothed(cli, a),
        Command::Bounds(a) => cmd_bounds(cli, a),
        Command::OracleCheck(a) => cmd_oracle(cli, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| dispatch(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(3),
    }
}
