//! Seeded trial runner with an oracle gate and aggregate statistics.

use std::time::Instant;

use frselect::{gamma_of, select_with, IterationTrace, Metrics, Params, RngStream, SelectError, SelectOptions};
use rayon::prelude::*;

use crate::generate::{generate, InputSpec};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SELECTBENCH_THREADS";

const LANE_INPUT: u64 = 0;
const LANE_SELECT: u64 = 1;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ExperimentError {
    #[error("trial {trial}: {source}")]
    Select {
        trial: u64,
        #[source]
        source: SelectError,
    },
    #[error("trial {trial}: returned {got} is not the {k}-th smallest")]
    OracleMismatch { trial: u64, k: usize, got: u64 },
    #[error("trial {trial}: selection changed the multiset of keys")]
    NotAPermutation { trial: u64 },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub trials: u64,
    pub master_seed: u64,
    pub trace: bool,
    /// Worker threads; `None` reads [`THREADS_ENV`] and falls back to the
    /// rayon default.
    pub threads: Option<usize>,
}

impl RunOptions {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        Self {
            trials,
            master_seed,
            trace: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub k: usize,
    pub value: u64,
    pub metrics: Metrics,
    pub time_ms: f64,
    pub trace: Option<Vec<IterationTrace>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub spec: InputSpec,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub avg: f64,
    pub max: f64,
    pub min: f64,
}

impl Spread {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let (mut sum, mut count) = (0.0, 0usize);
        let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
        for v in values {
            sum += v;
            count += 1;
            max = max.max(v);
            min = min.min(v);
        }
        if count == 0 {
            return Self { avg: 0.0, max: 0.0, min: 0.0 };
        }
        Self {
            avg: sum / count as f64,
            max,
            min,
        }
    }
}

impl TrialReport {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn trials(&self) -> usize {
        self.records.len()
    }

    fn mean(&self, f: impl Fn(&Metrics) -> u64) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| f(&r.metrics) as f64).sum::<f64>() / self.records.len() as f64
    }

    /// `C / n` per trial.
    pub fn comparisons(&self) -> Spread {
        let n = self.n() as f64;
        Spread::of(self.records.iter().map(|r| r.metrics.comparisons as f64 / n))
    }

    pub fn time_ms(&self) -> Spread {
        Spread::of(self.records.iter().map(|r| r.time_ms))
    }

    pub fn c_avg(&self) -> f64 {
        self.mean(|m| m.comparisons)
    }

    /// `(C_avg - 1.5 n) / f(n)`
    pub fn gamma_avg(&self) -> f64 {
        gamma_of(self.c_avg(), self.n())
    }

    /// `L_avg / n`
    pub fn l_avg(&self) -> f64 {
        self.mean(|m| m.partition_mass) / self.n() as f64
    }

    /// `P_avg / ln n`
    pub fn p_avg_ln(&self) -> f64 {
        self.mean(|m| m.select_partitions) / ln(self.n())
    }

    /// `N_avg / ln n`
    pub fn n_avg_ln(&self) -> f64 {
        self.mean(|m| m.sselect_calls) / ln(self.n())
    }

    /// Small-file partitions per small-file call, pooled over trials.
    pub fn p_avg(&self) -> f64 {
        let calls: u64 = self.records.iter().map(|r| r.metrics.sselect_calls).sum();
        let parts: u64 = self.records.iter().map(|r| r.metrics.sselect_partitions).sum();
        if calls == 0 {
            0.0
        } else {
            parts as f64 / calls as f64
        }
    }

    /// Sampled elements as a percentage of `n`.
    pub fn s_avg_pct(&self) -> f64 {
        100.0 * self.mean(|m| m.sampled) / self.n() as f64
    }

    pub fn restarts(&self) -> u64 {
        self.records.iter().map(|r| r.metrics.restarts).sum()
    }

    pub fn max_depth(&self) -> u32 {
        self.records.iter().map(|r| r.metrics.max_depth).max().unwrap_or(0)
    }
}

fn ln(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

/// Thread count from `explicit`, else [`THREADS_ENV`], else `None`.
pub fn thread_cap(explicit: Option<usize>) -> Option<usize> {
    explicit
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&t| t > 0)
}

/// Runs `trials` independent selections with the default options.
pub fn run_experiment(
    spec: InputSpec,
    params: &Params,
    trials: u64,
    master_seed: u64,
) -> Result<TrialReport, ExperimentError> {
    run_experiment_with(spec, params, RunOptions::new(trials, master_seed))
}

pub fn run_experiment_with(
    spec: InputSpec,
    params: &Params,
    options: RunOptions,
) -> Result<TrialReport, ExperimentError> {
    if options.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap(options.threads) {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
    let records = pool.install(|| {
        (0..options.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, params, options, t))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(TrialReport { spec, records })
}

/// One seeded trial. Inputs and selection use separate streams derived
/// from the master seed and the trial index.
pub fn run_trial(
    spec: InputSpec,
    params: &Params,
    options: RunOptions,
    trial: u64,
) -> Result<TrialRecord, ExperimentError> {
    let mut input_rng = RngStream::for_trial(options.master_seed, trial, LANE_INPUT);
    let mut data = generate(spec.family, spec.n, &mut input_rng);
    let before = fingerprint(&data);
    let k = spec.k();
    let mut rng = RngStream::for_trial(options.master_seed, trial, LANE_SELECT);
    let select_options = SelectOptions {
        trace: options.trace,
        verify_zones: false,
    };
    let start = Instant::now();
    let sel = select_with(&mut data, k, params, &mut rng, select_options)
        .map_err(|source| ExperimentError::Select { trial, source })?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;

    if fingerprint(&data) != before {
        return Err(ExperimentError::NotAPermutation { trial });
    }
    if !is_kth_smallest(&data, k, &sel.value) {
        return Err(ExperimentError::OracleMismatch {
            trial,
            k,
            got: sel.value,
        });
    }
    Ok(TrialRecord {
        trial,
        k,
        value: sel.value,
        metrics: sel.metrics,
        time_ms,
        trace: sel.trace,
    })
}

/// `x` is the `k`-th smallest of `data` iff at most `k - 1` elements are
/// below it and at least `k` are at or below it.
pub fn is_kth_smallest<T: Ord>(data: &[T], k: usize, x: &T) -> bool {
    let below = data.iter().filter(|y| *y < x).count();
    let at_or_below = data.iter().filter(|y| *y <= x).count();
    below < k && at_or_below >= k
}

/// Order-independent summary of a key multiset.
fn fingerprint(data: &[u64]) -> (usize, u64, u64) {
    data.iter().fold((0, 0u64, 0u64), |(n, s, q), &x| {
        (n + 1, s.wrapping_add(x), q.wrapping_add(x.wrapping_mul(x)))
    })
}
