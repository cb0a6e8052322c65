//! Drives a policy over a trace, applies edge failures with internal
//! re-demands, and records policy cost against the offline optimum after
//! every demand and every re-demand.

use thiserror::Error;

use crate::model::{cost_ratio, AllocationState, EdgeId, ProblemInstance, ServiceTrace, StepRecord};
use crate::policy::{self, Policy, PolicyConfig, PolicyError, PolicyKind};
use crate::solver::{OptProtocol, OptTracker};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] PolicyError),
    #[error("empty cost series")]
    EmptySeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltKind {
    /// The policy could not place a demand or re-demand.
    InsufficientCapacity,
    /// No offline allocation exists for the demands so far.
    Infeasible,
}

impl HaltKind {
    pub fn name(&self) -> &'static str {
        match self {
            HaltKind::InsufficientCapacity => "InsufficientCapacity",
            HaltKind::Infeasible => "Infeasible",
        }
    }
}

/// Why and where a run stopped early. Records end before `step`'s own
/// record (or before its re-demand, if the failure handling broke).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halt {
    pub kind: HaltKind,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub records: Vec<StepRecord>,
    pub final_state: AllocationState,
    pub final_cost: f64,
    pub opt_final: f64,
    pub max_ratio: f64,
    pub failures_processed: usize,
    pub halt: Option<Halt>,
}

/// What an observer sees after each record is appended.
pub struct StepView<'a> {
    pub record: &'a StepRecord,
    pub state: &'a AllocationState,
    /// Per-consumer demand delivered so far; after a re-demand completes
    /// the state's satisfied totals match this again.
    pub delivered: &'a [f64],
}

/// Zeroes a failed edge and frees its producer capacity. Returns the weight
/// lost, which the caller re-places for the same consumer. Failing a dead
/// edge is a no-op returning 0.
pub fn apply_failure(instance: &ProblemInstance, state: &mut AllocationState, edge: EdgeId) -> f64 {
    state.kill_edge(instance, edge)
}

/// Runs `config` over `trace`. A derandomized config returns its best run.
pub fn run(
    instance: &ProblemInstance,
    trace: &ServiceTrace,
    config: &PolicyConfig,
) -> Result<SimulationResult, SimError> {
    if config.kind == PolicyKind::Derandomized {
        return policy::derandomized_run(instance, trace, config).map(|o| o.best);
    }
    run_observed(instance, trace, config, |_| {})
}

/// Like [`run`] for a single policy stream, calling `observer` after every
/// record. Derandomized configs run as one randomized stream here.
pub fn run_observed<F>(
    instance: &ProblemInstance,
    trace: &ServiceTrace,
    config: &PolicyConfig,
    mut observer: F,
) -> Result<SimulationResult, SimError>
where
    F: FnMut(StepView<'_>),
{
    let mut policy = Policy::new(*config)?;
    let mut opt = OptTracker::new(instance, OptProtocol::Hindsight);
    let mut state = AllocationState::new(instance);
    let mut delivered = vec![0.0; instance.num_consumers()];
    let mut records: Vec<StepRecord> = Vec::new();
    let mut failures_processed = 0;
    let mut halt = None;

    'steps: for (k, d) in trace.demands().iter().enumerate() {
        let step = k + 1;
        if policy.allocate(instance, &mut state, d.consumer, d.amount).is_err() {
            halt = Some(Halt {
                kind: HaltKind::InsufficientCapacity,
                step,
            });
            break;
        }
        delivered[d.consumer] += d.amount;
        let opt_cost = match opt.demand(d.consumer, d.amount) {
            Ok(sol) => sol.objective,
            Err(_) => {
                halt = Some(Halt {
                    kind: HaltKind::Infeasible,
                    step,
                });
                break;
            }
        };
        records.push(StepRecord::new(
            step,
            d.consumer,
            d.amount,
            false,
            state.cumulative_cost(),
            opt_cost,
        ));
        observer(StepView {
            record: records.last().unwrap(),
            state: &state,
            delivered: &delivered,
        });

        for f in trace.failures_after(step) {
            let lost = apply_failure(instance, &mut state, f.edge);
            failures_processed += 1;
            let opt_cost = match opt.fail(f.edge) {
                Ok(stage) => stage.after.objective,
                Err(_) => {
                    halt = Some(Halt {
                        kind: HaltKind::Infeasible,
                        step,
                    });
                    break 'steps;
                }
            };
            if lost <= 0.0 {
                continue;
            }
            if policy.allocate(instance, &mut state, f.edge.consumer, lost).is_err() {
                halt = Some(Halt {
                    kind: HaltKind::InsufficientCapacity,
                    step,
                });
                break 'steps;
            }
            records.push(StepRecord::new(
                step,
                f.edge.consumer,
                lost,
                true,
                state.cumulative_cost(),
                opt_cost,
            ));
            observer(StepView {
                record: records.last().unwrap(),
                state: &state,
                delivered: &delivered,
            });
        }
    }

    let (final_cost, opt_final) = records.last().map_or((0.0, 0.0), |r| (r.policy_cost, r.opt_cost));
    let max_ratio = records
        .iter()
        .map(|r| r.ratio)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    Ok(SimulationResult {
        records,
        final_state: state,
        final_cost,
        opt_final,
        max_ratio: max_ratio.unwrap_or(1.0),
        failures_processed,
        halt,
    })
}

/// Least-squares line `policy_cost ≈ slope · opt_cost + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitiveSummary {
    pub ratios: Vec<f64>,
    /// Largest per-step ratio.
    pub empirical_alpha: f64,
    /// `None` when every record has the same optimum (no spread to fit).
    pub startup_fit: Option<AffineFit>,
}

pub fn competitive_series(records: &[StepRecord]) -> Result<CompetitiveSummary, SimError> {
    if records.is_empty() {
        return Err(SimError::EmptySeries);
    }
    let ratios: Vec<f64> = records.iter().map(|r| cost_ratio(r.policy_cost, r.opt_cost)).collect();
    let empirical_alpha = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let n = records.len() as f64;
    let mean_x = records.iter().map(|r| r.opt_cost).sum::<f64>() / n;
    let mean_y = records.iter().map(|r| r.policy_cost).sum::<f64>() / n;
    let sxx: f64 = records.iter().map(|r| (r.opt_cost - mean_x).powi(2)).sum();
    let sxy: f64 = records
        .iter()
        .map(|r| (r.opt_cost - mean_x) * (r.policy_cost - mean_y))
        .sum();
    let startup_fit = (sxx > 0.0).then(|| {
        let slope = sxy / sxx;
        AffineFit {
            slope,
            intercept: mean_y - slope * mean_x,
        }
    });
    Ok(CompetitiveSummary {
        ratios,
        empirical_alpha,
        startup_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, FailureEvent};
    use crate::solver::{opt_prefix_series, OptProtocol};

    fn worked() -> ProblemInstance {
        ProblemInstance::new(2, 2, vec![47.0, 17.0, 11.0, 2.0], vec![26.0, 839.0]).unwrap()
    }

    fn worked_trace(inst: &ProblemInstance) -> ServiceTrace {
        let f = FailureEvent {
            after_demand: 1,
            edge: inst.edge_from_flat(3).unwrap(),
        };
        ServiceTrace::in_consumer_order(inst, &[97.0, 78.0], vec![f]).unwrap()
    }

    fn costs(r: &SimulationResult) -> Vec<(usize, f64, f64, f64)> {
        r.records
            .iter()
            .map(|x| (x.step, x.policy_cost, x.opt_cost, x.ratio))
            .collect()
    }

    #[test]
    fn listing_run_with_failure() {
        let inst = worked();
        let out = run(&inst, &worked_trace(&inst), &PolicyConfig::greedy()).unwrap();
        assert_eq!(costs(&out), vec![(1, 1649.0, 1649.0, 1.0), (2, 1805.0, 1805.0, 1.0)]);
        assert_eq!(out.failures_processed, 1);
        assert!(!out.final_state.is_alive(EdgeId::new(1, 0)));
        assert_eq!(out.final_cost, 1805.0);
        assert_eq!(out.max_ratio, 1.0);
        assert_eq!(out.halt, None);
    }

    #[test]
    fn empty_trace() {
        let inst = worked();
        let out = run(&inst, &ServiceTrace::empty(), &PolicyConfig::greedy()).unwrap();
        assert!(out.records.is_empty());
        assert_eq!((out.final_cost, out.opt_final, out.max_ratio), (0.0, 0.0, 1.0));
    }

    #[test]
    fn equal_column_family_greedy_is_optimal() {
        // columns x=10 and x+5 with M_1 = R_1: p1 can never hold more than 5
        // units whoever uses it, so greedy's 350 is also the optimum
        let inst = ProblemInstance::new(2, 2, vec![10.0, 15.0, 10.0, 15.0], vec![5.0, 100.0]).unwrap();
        let trace = ServiceTrace::in_consumer_order(&inst, &[5.0, 20.0], vec![]).unwrap();
        let out = run(&inst, &trace, &PolicyConfig::greedy()).unwrap();
        assert_eq!(out.final_cost, 350.0);
        assert_eq!(out.opt_final, 350.0);
        assert_eq!(out.max_ratio, 1.0);
    }

    #[test]
    fn greedy_loses_when_cheap_edge_is_contended() {
        // c1 is indifferent-ish (1 vs 2) but c2 badly needs p1 (1 vs 10)
        let inst = ProblemInstance::new(2, 2, vec![1.0, 2.0, 1.0, 10.0], vec![5.0, 100.0]).unwrap();
        let trace = ServiceTrace::in_consumer_order(&inst, &[5.0, 5.0], vec![]).unwrap();
        let out = run(&inst, &trace, &PolicyConfig::greedy()).unwrap();
        assert_eq!(out.final_cost, 5.0 + 50.0);
        assert_eq!(out.opt_final, 10.0 + 5.0);
        assert_eq!(out.max_ratio, 55.0 / 15.0);
    }

    #[test]
    fn loaded_failure_triggers_re_demand() {
        let inst = ProblemInstance::new(2, 2, vec![1.0, 4.0, 2.0, 3.0], vec![50.0, 50.0]).unwrap();
        let f = FailureEvent {
            after_demand: 1,
            edge: EdgeId::new(0, 0),
        };
        let trace = ServiceTrace::in_consumer_order(&inst, &[40.0, 5.0], vec![f]).unwrap();
        let mut dips = Vec::new();
        let out = run_observed(&inst, &trace, &PolicyConfig::greedy(), |v| {
            assert_eq!(validate(&inst, v.state, v.delivered), Ok(()));
            dips.push(v.record.synthetic);
        })
        .unwrap();
        assert_eq!(dips, vec![false, true, false]);
        let re = &out.records[1];
        assert_eq!((re.step, re.consumer, re.demand), (1, 0, 40.0));
        assert_eq!(out.final_state.weight(EdgeId::new(0, 1)), 40.0);
        assert_eq!(out.final_state.satisfied(0), 40.0);
        // c2 still finds p1 free
        assert_eq!(out.final_cost, 160.0 + 10.0);
    }

    #[test]
    fn apply_failure_examples() {
        let inst = worked();
        let mut s = AllocationState::new(&inst);
        let e = EdgeId::new(0, 1);
        assert_eq!(apply_failure(&inst, &mut s, e), 0.0);
        assert!(!s.is_alive(e));
        assert_eq!(apply_failure(&inst, &mut s, e), 0.0);

        let mut s = AllocationState::new(&inst);
        s.add_weight(&inst, e, 40.0);
        assert_eq!(apply_failure(&inst, &mut s, e), 40.0);
        assert_eq!(s.satisfied(0), 0.0);
        assert_eq!(apply_failure(&inst, &mut s, e), 0.0);
    }

    #[test]
    fn halts_when_capacity_runs_out() {
        let inst = ProblemInstance::new(2, 1, vec![1.0, 1.0], vec![5.0]).unwrap();
        let trace = ServiceTrace::in_consumer_order(&inst, &[3.0, 3.0], vec![]).unwrap();
        let out = run(&inst, &trace, &PolicyConfig::greedy()).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(
            out.halt,
            Some(Halt {
                kind: HaltKind::InsufficientCapacity,
                step: 2
            })
        );
        assert_eq!(out.final_cost, 3.0);
    }

    #[test]
    fn halts_when_failure_strands_demand() {
        let inst = ProblemInstance::new(1, 1, vec![5.0], vec![10.0]).unwrap();
        let f = FailureEvent {
            after_demand: 1,
            edge: EdgeId::new(0, 0),
        };
        let trace = ServiceTrace::in_consumer_order(&inst, &[10.0], vec![f]).unwrap();
        let out = run(&inst, &trace, &PolicyConfig::greedy()).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.halt.unwrap().kind, HaltKind::Infeasible);
    }

    #[test]
    fn engine_optimum_matches_prefix_series() {
        let inst = worked();
        let trace = worked_trace(&inst);
        let out = run(&inst, &trace, &PolicyConfig::greedy()).unwrap();
        let series = opt_prefix_series(&inst, &trace, OptProtocol::Hindsight);
        let engine: Vec<(usize, f64)> = out.records.iter().map(|r| (r.step, r.opt_cost)).collect();
        assert_eq!(engine, series.per_demand());
    }

    #[test]
    fn competitive_series_examples() {
        let same = vec![
            StepRecord::new(1, 0, 1.0, false, 5.0, 5.0),
            StepRecord::new(2, 1, 1.0, false, 9.0, 9.0),
        ];
        let s = competitive_series(&same).unwrap();
        assert_eq!(s.ratios, vec![1.0, 1.0]);
        assert_eq!(s.empirical_alpha, 1.0);

        let two = vec![
            StepRecord::new(1, 0, 1.0, false, 100.0, 100.0),
            StepRecord::new(2, 1, 1.0, false, 350.0, 275.0),
        ];
        let s = competitive_series(&two).unwrap();
        assert_eq!(s.empirical_alpha, 350.0 / 275.0);
        let fit = s.startup_fit.unwrap();
        assert!((fit.slope - 10.0 / 7.0).abs() < 1e-12);
        assert!((fit.intercept - (100.0 - 100.0 * 10.0 / 7.0)).abs() < 1e-9);

        assert_eq!(competitive_series(&[]), Err(SimError::EmptySeries));
    }

    #[test]
    fn runs_are_deterministic() {
        let inst = ProblemInstance::new(
            3,
            3,
            vec![3.0, 5.0, 7.0, 2.0, 9.0, 4.0, 6.0, 1.0, 8.0],
            vec![10.0, 10.0, 10.0],
        )
        .unwrap();
        let trace = ServiceTrace::in_consumer_order(&inst, &[8.0, 9.0, 7.0], vec![]).unwrap();
        let c = PolicyConfig::randomized(4.0, 77);
        assert_eq!(run(&inst, &trace, &c).unwrap(), run(&inst, &trace, &c).unwrap());
    }
}
