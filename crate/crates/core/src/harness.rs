//! The three front-end commands as library functions: `gen` writes an
//! instance file, `run` replays one algorithm and renders a per-step CSV,
//! `bench` sweeps consumer counts, algorithms and seeds and aggregates.
//!
//! All output is rendered into strings so callers control where it goes.

use std::fmt::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{ProblemInstance, ServiceTrace, StepRecord};
use crate::policy::{PolicyConfig, PolicyError};
use crate::sim::{self, Halt, HaltKind};
use crate::solver::{export_lp, OptProtocol, OptTracker, PinSet};
use crate::workload::{generate, write_instance, FormatError, GenSpec, InvalidSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

pub const RUN_HEADER: &str = "step,consumer,demand,synthetic,policy_cost,opt_cost,ratio";
pub const BENCH_HEADER: &str = "consumers,policy,mean_final_cost,stddev_final_cost,mean_max_ratio,seeds";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Spec(#[from] InvalidSpec),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("invalid run matrix: {0}")]
    Matrix(&'static str),
}

/// What `run` and `bench` execute: an online policy or the offline optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algo {
    Policy(PolicyConfig),
    Opt(OptProtocol),
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Policy(c) => c.kind.name(),
            Algo::Opt(_) => "opt",
        }
    }

    fn with_seed(self, seed: u64) -> Self {
        match self {
            Algo::Policy(c) => Algo::Policy(PolicyConfig { seed, ..c }),
            opt => opt,
        }
    }
}

/// Canonical instance text for `spec`.
pub fn cmd_gen(spec: &GenSpec) -> Result<String, HarnessError> {
    let (instance, trace) = generate(spec)?;
    Ok(write_instance(&instance, &trace)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub csv: String,
    pub halt: Option<Halt>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.halt.is_some() {
            EXIT_INFEASIBLE
        } else {
            EXIT_OK
        }
    }
}

fn push_record(out: &mut String, r: &StepRecord) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{:?}",
        r.step,
        r.consumer + 1,
        r.demand,
        u8::from(r.synthetic),
        r.policy_cost,
        r.opt_cost,
        r.ratio
    );
}

/// A finished replay of one algorithm over a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub records: Vec<StepRecord>,
    pub final_cost: f64,
    pub opt_final: f64,
    pub max_ratio: f64,
    pub halt: Option<Halt>,
}

impl Replay {
    pub fn to_report(&self) -> RunReport {
        let mut csv = String::new();
        csv.push_str(RUN_HEADER);
        csv.push('\n');
        for r in &self.records {
            push_record(&mut csv, r);
        }
        let _ = writeln!(
            csv,
            "#final,{},{},{:?}",
            self.final_cost, self.opt_final, self.max_ratio
        );
        if let Some(h) = self.halt {
            let _ = writeln!(csv, "#error,{},{}", h.kind.name(), h.step);
        }
        RunReport { csv, halt: self.halt }
    }
}

/// Offline optimum replayed over the trace: one row per demand and one
/// synthetic row per failure, carrying the weight the optimum lost.
fn replay_opt(instance: &ProblemInstance, trace: &ServiceTrace, protocol: OptProtocol) -> Replay {
    let mut tracker = OptTracker::new(instance, protocol);
    let mut records = Vec::new();
    let mut halt = None;
    'steps: for (k, d) in trace.demands().iter().enumerate() {
        let step = k + 1;
        let Ok(sol) = tracker.demand(d.consumer, d.amount) else {
            halt = Some(Halt {
                kind: HaltKind::Infeasible,
                step,
            });
            break;
        };
        records.push(StepRecord::new(
            step,
            d.consumer,
            d.amount,
            false,
            sol.objective,
            sol.objective,
        ));
        for f in trace.failures_after(step) {
            let Ok(stage) = tracker.fail(f.edge) else {
                halt = Some(Halt {
                    kind: HaltKind::Infeasible,
                    step,
                });
                break 'steps;
            };
            let cost = stage.after.objective;
            records.push(StepRecord::new(step, f.edge.consumer, stage.lost, true, cost, cost));
        }
    }
    let last = records.last().map_or(0.0, |r| r.opt_cost);
    Replay {
        records,
        final_cost: last,
        opt_final: last,
        max_ratio: 1.0,
        halt,
    }
}

/// Replays `algo` over the trace. Policies are always measured against the
/// hindsight optimum.
pub fn replay(instance: &ProblemInstance, trace: &ServiceTrace, algo: &Algo) -> Result<Replay, HarnessError> {
    match algo {
        Algo::Opt(protocol) => Ok(replay_opt(instance, trace, *protocol)),
        Algo::Policy(config) => {
            config.validate()?;
            let res = sim::run(instance, trace, config).map_err(|e| match e {
                sim::SimError::Config(p) => HarnessError::Policy(p),
                sim::SimError::EmptySeries => unreachable!("runs never summarize"),
            })?;
            Ok(Replay {
                records: res.records,
                final_cost: res.final_cost,
                opt_final: res.opt_final,
                max_ratio: res.max_ratio,
                halt: res.halt,
            })
        }
    }
}

pub fn cmd_run(instance: &ProblemInstance, trace: &ServiceTrace, algo: &Algo) -> Result<RunReport, HarnessError> {
    Ok(replay(instance, trace, algo)?.to_report())
}

/// LP text of the failure-free offline problem over the trace's total
/// demand, the form an external LP solver is given.
pub fn lp_text(instance: &ProblemInstance, trace: &ServiceTrace) -> String {
    let demands = trace.cumulative_demands(instance.num_consumers(), trace.len());
    export_lp(instance, &demands, &vec![true; instance.num_edges()], &PinSet::new())
}

/// A bench sweep. Every `(consumers, algo, seed)` cell generates the
/// instance from `template` with that consumer count and seed; the same
/// seed also seeds the policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMatrixSpec {
    pub consumers: Vec<usize>,
    pub algos: Vec<Algo>,
    pub seeds: Vec<u64>,
    pub template: GenSpec,
}

impl RunMatrixSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.consumers.is_empty() || self.algos.is_empty() || self.seeds.is_empty() {
            return Err(HarnessError::Matrix("consumers, policies and seeds must be non-empty"));
        }
        if self.consumers.contains(&0) {
            return Err(HarnessError::Matrix("consumer counts must be positive"));
        }
        for algo in &self.algos {
            if let Algo::Policy(c) = algo {
                c.validate()?;
            }
        }
        for &n in &self.consumers {
            GenSpec {
                num_consumers: n,
                ..self.template.clone()
            }
            .validate()?;
        }
        Ok(())
    }
}

/// Aggregate over the seeds of one `(consumers, algo)` cell. A cell with
/// any failed run reports NaN statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub consumers: usize,
    pub policy: &'static str,
    pub mean_final_cost: f64,
    pub stddev_final_cost: f64,
    pub mean_max_ratio: f64,
    pub seeds: usize,
    pub failed: usize,
}

/// `(final_cost, max_ratio)` of one run, `None` if it stopped early.
fn bench_once(spec: &RunMatrixSpec, consumers: usize, algo: Algo, seed: u64) -> Option<(f64, f64)> {
    let gen = GenSpec {
        num_consumers: consumers,
        seed,
        ..spec.template.clone()
    };
    let (instance, trace) = generate(&gen).ok()?;
    let run = replay(&instance, &trace, &algo.with_seed(seed)).ok()?;
    run.halt.is_none().then_some((run.final_cost, run.max_ratio))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation.
fn stddev(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Runs the whole matrix in parallel and aggregates per cell, rows sorted
/// by consumer count then policy name.
pub fn bench_rows(spec: &RunMatrixSpec) -> Result<Vec<BenchRow>, HarnessError> {
    spec.validate()?;
    let mut cells: Vec<(usize, Algo)> = Vec::new();
    for &c in &spec.consumers {
        for &a in &spec.algos {
            cells.push((c, a));
        }
    }
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|cell| spec.seeds.iter().map(move |&s| (cell, s)))
        .collect();
    let results: Vec<Option<(f64, f64)>> = jobs
        .par_iter()
        .map(|&(cell, seed)| {
            let (c, a) = cells[cell];
            bench_once(spec, c, a, seed)
        })
        .collect();

    let per_cell = spec.seeds.len();
    let mut rows: Vec<BenchRow> = cells
        .iter()
        .enumerate()
        .map(|(i, &(consumers, algo))| {
            let runs = &results[i * per_cell..(i + 1) * per_cell];
            let ok: Vec<(f64, f64)> = runs.iter().flatten().copied().collect();
            let failed = per_cell - ok.len();
            let (mean_cost, sd, mean_ratio) = if failed > 0 {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                let costs: Vec<f64> = ok.iter().map(|r| r.0).collect();
                let ratios: Vec<f64> = ok.iter().map(|r| r.1).collect();
                (mean(&costs), stddev(&costs), mean(&ratios))
            };
            BenchRow {
                consumers,
                policy: algo.name(),
                mean_final_cost: mean_cost,
                stddev_final_cost: sd,
                mean_max_ratio: mean_ratio,
                seeds: per_cell,
                failed,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.consumers.cmp(&b.consumers).then(a.policy.cmp(b.policy)));
    Ok(rows)
}

/// Aggregate CSV with one `#warn` line per cell that had failed runs.
pub fn cmd_bench(spec: &RunMatrixSpec) -> Result<String, HarnessError> {
    let rows = bench_rows(spec)?;
    let mut out = String::new();
    out.push_str(BENCH_HEADER);
    out.push('\n');
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.consumers, r.policy, r.mean_final_cost, r.stddev_final_cost, r.mean_max_ratio, r.seeds
        );
    }
    for r in rows.iter().filter(|r| r.failed > 0) {
        let _ = writeln!(
            out,
            "#warn,{},{},{} of {} runs failed",
            r.consumers, r.policy, r.failed, r.seeds
        );
    }
    Ok(out)
}
