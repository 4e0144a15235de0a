//! Experiment harness: corpus ingestion, parameter sweeps, regressions,
//! bound reports and CSV output.

mod ingest;
mod output;
mod regression;
mod report;
mod runner;

use rand::Rng;
use rand_distr::{Distribution, Normal};

pub use ingest::{ingest_csv, parse_corpus, Corpus};
pub use output::{
    exponents_csv, format_f64, raw_csv, summary_csv, tail_csv, trace_csv, write_experiment,
    Manifest,
};
pub use regression::{loglog_exponent, RegressionResult};
pub use report::{report_bounds, BoundsReport, RunCheck};
pub use runner::{
    run_experiment, ExperimentConfig, ExperimentResult, ExponentRow, InitKind, Mode, RawRow,
    SummaryRow,
};

use crate::rng::rng_from_seed;
use crate::sequence::PointSequence;

/// `count` AR(1) series `x_t = 0.8 x_{t-1} + N(0, 1)` of `len` points in
/// dimension `dim`, shifted to be positive. Stands in for a real corpus in
/// smoke tests.
pub fn synthetic_corpus(count: usize, len: usize, dim: usize, seed: u64) -> Corpus {
    let mut rng = rng_from_seed(seed);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let series = (0..count)
        .map(|_| {
            let mut state: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut coords = Vec::with_capacity(len * dim);
            for _ in 0..len {
                for s in state.iter_mut() {
                    *s = 0.8 * *s + noise.sample(&mut rng);
                    coords.push(*s + 10.0);
                }
            }
            PointSequence::from_flat(dim, coords).expect("finite values")
        })
        .collect();
    Corpus {
        labels: (0..count).map(|i| format!("s{i}")).collect(),
        series,
    }
}

/// Renders a corpus in the format [`parse_corpus`] reads (ID column, no header).
pub fn corpus_csv(corpus: &Corpus) -> String {
    let mut out = String::new();
    for (label, s) in corpus.labels.iter().zip(&corpus.series) {
        if !label.is_empty() {
            out.push_str(label);
            out.push(',');
        }
        let cells: Vec<String> = s.as_flat().iter().map(|&v| format_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
