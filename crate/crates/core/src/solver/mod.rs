//! Exact offline optimum of the transportation LP
//!
//! ```text
//! minimize   Σ d_ij · w_ij
//! subject to Σ_j w_ij = R_i      (alive edges only)
//!            Σ_i w_ij ≤ M_j
//!            w_ij ≥ pin_ij ≥ 0
//! ```
//!
//! solved exactly by a min-cost-flow reduction
//! `source → consumer (R_i) → producer (alive edges, cost d_ij) → sink (M_j)`.
//! Pinned lower bounds are shifted out before the flow is built.

mod flow;
mod lp;
mod oracle;

use thiserror::Error;

use crate::model::{tolerance, total_cost, EdgeId, ProblemInstance, ServiceTrace};

pub use lp::export_lp;
pub use oracle::{brute_force_oracle, ORACLE_STATE_LIMIT};

use flow::MinCostFlow;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("infeasible: {unmet} units of demand cannot be placed")]
    Infeasible { unmet: f64 },
    #[error("infeasible at stage {stage}")]
    InfeasibleStage { stage: usize },
    #[error("expected {expected} {what}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("demand of consumer {consumer} must be non-negative and finite, got {value}")]
    InvalidDemand { consumer: usize, value: f64 },
    #[error("invalid pin on edge {edge}: {reason}")]
    InvalidPin { edge: EdgeId, reason: &'static str },
    #[error("brute-force enumeration exceeded {limit} states")]
    TooLarge { limit: u64 },
    #[error("brute-force oracle needs integer demands and capacities")]
    NonInteger,
}

/// An optimal allocation for a demand vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineSolution {
    /// Row-major weight matrix; zero on dead edges.
    pub weights: Vec<f64>,
    pub objective: f64,
}

impl OfflineSolution {
    pub fn weight(&self, instance: &ProblemInstance, edge: EdgeId) -> f64 {
        self.weights[instance.index(edge)]
    }
}

/// Lower bounds `w_ij ≥ pin` on a set of alive edges.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PinSet {
    pins: Vec<(EdgeId, f64)>,
}

impl PinSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a pin; pinning the same edge twice keeps the larger bound.
    pub fn pin(&mut self, edge: EdgeId, weight: f64) {
        match self.pins.iter_mut().find(|(e, _)| *e == edge) {
            Some((_, w)) => *w = w.max(weight),
            None => self.pins.push((edge, weight)),
        }
    }

    /// Pins every positive weight of `weights` on edges alive in `alive`.
    pub fn from_weights(instance: &ProblemInstance, weights: &[f64], alive: &[bool]) -> Self {
        let pins = instance
            .edges()
            .filter(|&e| {
                let i = instance.index(e);
                alive[i] && weights[i] > 0.0
            })
            .map(|e| (e, weights[instance.index(e)]))
            .collect();
        Self { pins }
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }

    /// Pins sorted by flat edge order.
    pub fn sorted(&self) -> Vec<(EdgeId, f64)> {
        let mut v = self.pins.clone();
        v.sort_by_key(|(e, _)| *e);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = &(EdgeId, f64)> {
        self.pins.iter()
    }
}

fn check_inputs(instance: &ProblemInstance, demands: &[f64], alive: &[bool], pins: &PinSet) -> Result<(), SolverError> {
    if demands.len() != instance.num_consumers() {
        return Err(SolverError::DimensionMismatch {
            what: "demands",
            expected: instance.num_consumers(),
            actual: demands.len(),
        });
    }
    if alive.len() != instance.num_edges() {
        return Err(SolverError::DimensionMismatch {
            what: "alive flags",
            expected: instance.num_edges(),
            actual: alive.len(),
        });
    }
    for (consumer, &r) in demands.iter().enumerate() {
        if !(r.is_finite() && r >= 0.0) {
            return Err(SolverError::InvalidDemand { consumer, value: r });
        }
    }
    let mut pinned_use = vec![0.0; instance.num_producers()];
    for &(edge, w) in pins.iter() {
        if edge.consumer >= instance.num_consumers() || edge.producer >= instance.num_producers() {
            return Err(SolverError::InvalidPin {
                edge,
                reason: "edge out of range",
            });
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(SolverError::InvalidPin {
                edge,
                reason: "weight must be non-negative",
            });
        }
        if !alive[instance.index(edge)] {
            return Err(SolverError::InvalidPin {
                edge,
                reason: "edge is dead",
            });
        }
        pinned_use[edge.producer] += w;
    }
    for (j, &used) in pinned_use.iter().enumerate() {
        let cap = instance.capacity(j);
        if used > cap + tolerance(cap) {
            let edge = pins.iter().find(|(e, _)| e.producer == j).map(|(e, _)| *e).unwrap();
            return Err(SolverError::InvalidPin {
                edge,
                reason: "pins exceed producer capacity",
            });
        }
    }
    Ok(())
}

/// Minimum-cost allocation meeting `demands` exactly over alive edges.
pub fn solve(
    instance: &ProblemInstance,
    demands: &[f64],
    alive: &[bool],
    pins: &PinSet,
) -> Result<OfflineSolution, SolverError> {
    check_inputs(instance, demands, alive, pins)?;
    let n = instance.num_consumers();
    let m = instance.num_producers();

    let mut base = vec![0.0; instance.num_edges()];
    let mut residual_demand = demands.to_vec();
    let mut residual_cap = instance.capacities().to_vec();
    for &(edge, w) in pins.iter() {
        base[instance.index(edge)] = w;
        residual_demand[edge.consumer] -= w;
        residual_cap[edge.producer] -= w;
    }
    for (i, r) in residual_demand.iter_mut().enumerate() {
        if *r < -tolerance(demands[i]) {
            // pins already exceed what the consumer asked for
            return Err(SolverError::Infeasible { unmet: -*r });
        }
        *r = r.max(0.0);
    }
    for c in residual_cap.iter_mut() {
        *c = c.max(0.0);
    }

    let scale = demands.iter().fold(instance.capacity_scale(), |a, &r| a.max(r));
    let eps = 1e-12 * scale;
    let source = 0;
    let sink = n + m + 1;
    let mut g = MinCostFlow::new(n + m + 2, eps);
    for (i, &r) in residual_demand.iter().enumerate() {
        g.add_arc(source, 1 + i, r, 0.0);
    }
    let mut edge_arcs = Vec::new();
    for (i, &r) in residual_demand.iter().enumerate() {
        for j in 0..m {
            let e = EdgeId::new(i, j);
            let idx = instance.index(e);
            if alive[idx] {
                let arc = g.add_arc(1 + i, 1 + n + j, r, instance.distance(e));
                edge_arcs.push((idx, arc));
            }
        }
    }
    for (j, &c) in residual_cap.iter().enumerate() {
        g.add_arc(1 + n + j, sink, c, 0.0);
    }

    let total: f64 = residual_demand.iter().sum();
    let out = g.run(source, sink, total);
    if total - out.flow > tolerance(total) {
        return Err(SolverError::Infeasible {
            unmet: total - out.flow,
        });
    }
    let mut weights = base;
    for (idx, arc) in edge_arcs {
        weights[idx] += g.flow_on(arc);
    }
    let objective = total_cost(instance, &weights);
    debug_assert!({
        let pinned: f64 = pins.iter().map(|&(e, w)| w * instance.distance(e)).sum();
        (objective - pinned - out.cost).abs() <= 1e-6 * objective.max(1.0)
    });
    Ok(OfflineSolution { weights, objective })
}

/// How the offline optimum treats allocations made before an edge failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptProtocol {
    /// Re-optimize freely over the edges still alive. Any online allocation
    /// is feasible for this problem, so it lower-bounds every policy.
    #[default]
    Hindsight,
    /// At each failure, pin the previous stage's optimal weights on the
    /// surviving edges as lower bounds, then re-place the lost weight.
    Staged,
}

/// Result of processing one failure in an [`OptTracker`].
#[derive(Debug, Clone, PartialEq)]
pub struct FailureStage {
    /// Weight the previous optimum had on the failed edge.
    pub lost: f64,
    /// Optimum of the stage that was pinned (before the failure).
    pub before: OfflineSolution,
    pub after: OfflineSolution,
}

/// Incremental offline optimum for a trace being replayed step by step.
#[derive(Debug, Clone)]
pub struct OptTracker<'a> {
    instance: &'a ProblemInstance,
    protocol: OptProtocol,
    demands: Vec<f64>,
    alive: Vec<bool>,
    pins: PinSet,
    current: OfflineSolution,
}

impl<'a> OptTracker<'a> {
    pub fn new(instance: &'a ProblemInstance, protocol: OptProtocol) -> Self {
        Self {
            instance,
            protocol,
            demands: vec![0.0; instance.num_consumers()],
            alive: vec![true; instance.num_edges()],
            pins: PinSet::new(),
            current: OfflineSolution {
                weights: vec![0.0; instance.num_edges()],
                objective: 0.0,
            },
        }
    }

    pub fn current(&self) -> &OfflineSolution {
        &self.current
    }

    pub fn alive(&self) -> &[bool] {
        &self.alive
    }

    pub fn demands(&self) -> &[f64] {
        &self.demands
    }

    fn resolve(&mut self) -> Result<&OfflineSolution, SolverError> {
        self.current = solve(self.instance, &self.demands, &self.alive, &self.pins)?;
        Ok(&self.current)
    }

    /// Adds a demand and re-solves over the cumulative demand vector.
    pub fn demand(&mut self, consumer: usize, amount: f64) -> Result<&OfflineSolution, SolverError> {
        self.demands[consumer] += amount;
        self.resolve()
    }

    /// Kills `edge` and re-solves. A dead edge is left as is.
    pub fn fail(&mut self, edge: EdgeId) -> Result<FailureStage, SolverError> {
        let idx = self.instance.index(edge);
        let before = self.current.clone();
        if !self.alive[idx] {
            return Ok(FailureStage {
                lost: 0.0,
                after: before.clone(),
                before,
            });
        }
        let lost = before.weights[idx];
        self.alive[idx] = false;
        if self.protocol == OptProtocol::Staged {
            self.pins = PinSet::from_weights(self.instance, &before.weights, &self.alive);
        }
        let after = self.resolve()?.clone();
        Ok(FailureStage { lost, before, after })
    }
}

/// One point of the offline cost series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptPoint {
    pub step: usize,
    /// Set for the point right after this edge failed at `step`.
    pub failure: Option<EdgeId>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OptSeries {
    pub points: Vec<OptPoint>,
    /// Step at which the optimum became infeasible; the series stops there.
    pub infeasible_at: Option<usize>,
}

impl OptSeries {
    /// `(step, cost)` after each demand, before that step's failures.
    pub fn per_demand(&self) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .filter(|p| p.failure.is_none())
            .map(|p| (p.step, p.cost))
            .collect()
    }
}

/// Offline optimum after every demand prefix and after every failure.
pub fn opt_prefix_series(instance: &ProblemInstance, trace: &ServiceTrace, protocol: OptProtocol) -> OptSeries {
    let mut tracker = OptTracker::new(instance, protocol);
    let mut series = OptSeries::default();
    for (k, d) in trace.demands().iter().enumerate() {
        let step = k + 1;
        match tracker.demand(d.consumer, d.amount) {
            Ok(sol) => series.points.push(OptPoint {
                step,
                failure: None,
                cost: sol.objective,
            }),
            Err(_) => {
                series.infeasible_at = Some(step);
                return series;
            }
        }
        for f in trace.failures_after(step) {
            match tracker.fail(f.edge) {
                Ok(stage) => series.points.push(OptPoint {
                    step,
                    failure: Some(f.edge),
                    cost: stage.after.objective,
                }),
                Err(_) => {
                    series.infeasible_at = Some(step);
                    return series;
                }
            }
        }
    }
    series
}

/// One failure boundary of the staged re-solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub after_demand: usize,
    pub failed: EdgeId,
    pub lost: f64,
    /// Optimum just before the failure; its surviving weights become pins.
    pub pinned_from: OfflineSolution,
    pub resolved: OfflineSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StagedSolution {
    pub final_solution: OfflineSolution,
    pub stages: Vec<Stage>,
}

/// Staged offline optimum: at every failure the previous stage's weights
/// are kept as lower bounds on surviving edges and the lost weight is
/// re-placed. Stage 1 runs up to the first failure, stage `k + 1` starts
/// after the `k`-th.
pub fn solve_staged(instance: &ProblemInstance, trace: &ServiceTrace) -> Result<StagedSolution, SolverError> {
    let mut tracker = OptTracker::new(instance, OptProtocol::Staged);
    let mut stages = Vec::new();
    for (k, d) in trace.demands().iter().enumerate() {
        let step = k + 1;
        tracker.demands[d.consumer] += d.amount;
        let mut boundary = trace.failures_after(step).peekable();
        if boundary.peek().is_none() {
            continue;
        }
        let stage_no = stages.len() + 1;
        tracker
            .resolve()
            .map_err(|_| SolverError::InfeasibleStage { stage: stage_no })?;
        for f in boundary {
            let stage_no = stages.len() + 2;
            let st = tracker
                .fail(f.edge)
                .map_err(|_| SolverError::InfeasibleStage { stage: stage_no })?;
            stages.push(Stage {
                after_demand: step,
                failed: f.edge,
                lost: st.lost,
                pinned_from: st.before,
                resolved: st.after,
            });
        }
    }
    let stage_no = stages.len() + 1;
    tracker
        .resolve()
        .map_err(|_| SolverError::InfeasibleStage { stage: stage_no })?;
    Ok(StagedSolution {
        final_solution: tracker.current.clone(),
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, AllocationState, FailureEvent};
    use proptest::prelude::*;

    fn worked() -> ProblemInstance {
        ProblemInstance::new(2, 2, vec![47.0, 17.0, 11.0, 2.0], vec![26.0, 839.0]).unwrap()
    }

    fn all_alive(inst: &ProblemInstance) -> Vec<bool> {
        vec![true; inst.num_edges()]
    }

    #[test]
    fn solves_listing_instance() {
        let inst = worked();
        let sol = solve(&inst, &[97.0, 78.0], &all_alive(&inst), &PinSet::new()).unwrap();
        assert_eq!(sol.objective, 1805.0);
        assert_eq!(sol.weights, vec![0.0, 97.0, 0.0, 78.0]);
    }

    #[test]
    fn trivial_forced_solution() {
        let inst = ProblemInstance::new(1, 1, vec![5.0], vec![10.0]).unwrap();
        let sol = solve(&inst, &[10.0], &[true], &PinSet::new()).unwrap();
        assert_eq!(sol.objective, 50.0);
        assert_eq!(sol.weights, vec![10.0]);
    }

    #[test]
    fn infeasible_when_big_producer_is_cut_off() {
        let inst = worked();
        let alive = vec![true, false, true, false];
        assert!(matches!(
            solve(&inst, &[97.0, 78.0], &alive, &PinSet::new()),
            Err(SolverError::Infeasible { .. })
        ));
    }

    #[test]
    fn rejects_pins_on_dead_edges_and_over_capacity() {
        let inst = worked();
        let mut pins = PinSet::new();
        pins.pin(EdgeId::new(0, 0), 1.0);
        let alive = vec![false, true, true, true];
        assert!(matches!(
            solve(&inst, &[97.0, 78.0], &alive, &pins),
            Err(SolverError::InvalidPin { .. })
        ));
        let mut pins = PinSet::new();
        pins.pin(EdgeId::new(0, 0), 20.0);
        pins.pin(EdgeId::new(1, 0), 20.0);
        assert!(matches!(
            solve(&inst, &[97.0, 78.0], &all_alive(&inst), &pins),
            Err(SolverError::InvalidPin { .. })
        ));
    }

    #[test]
    fn pins_act_as_lower_bounds() {
        let inst = worked();
        let mut pins = PinSet::new();
        pins.pin(EdgeId::new(0, 0), 10.0);
        let sol = solve(&inst, &[97.0, 78.0], &all_alive(&inst), &pins).unwrap();
        assert_eq!(sol.weights, vec![10.0, 87.0, 0.0, 78.0]);
        assert_eq!(sol.objective, 1805.0 + 10.0 * (47.0 - 17.0));
    }

    #[test]
    fn prefix_series_examples() {
        let inst = worked();
        let trace = ServiceTrace::in_consumer_order(&inst, &[97.0, 78.0], vec![]).unwrap();
        for protocol in [OptProtocol::Hindsight, OptProtocol::Staged] {
            let s = opt_prefix_series(&inst, &trace, protocol);
            assert_eq!(s.per_demand(), vec![(1, 1649.0), (2, 1805.0)]);
            assert_eq!(s.infeasible_at, None);
        }
        let empty = opt_prefix_series(&inst, &ServiceTrace::empty(), OptProtocol::Staged);
        assert!(empty.points.is_empty());

        let tiny = ProblemInstance::new(1, 1, vec![5.0], vec![10.0]).unwrap();
        let zero = ServiceTrace::in_consumer_order(&tiny, &[0.0], vec![]).unwrap();
        assert_eq!(
            opt_prefix_series(&tiny, &zero, OptProtocol::Hindsight).per_demand(),
            vec![(1, 0.0)]
        );
    }

    #[test]
    fn staged_listing_failure_is_free() {
        let inst = worked();
        let f = FailureEvent {
            after_demand: 1,
            edge: inst.edge_from_flat(3).unwrap(),
        };
        let trace = ServiceTrace::in_consumer_order(&inst, &[97.0, 78.0], vec![f]).unwrap();
        let staged = solve_staged(&inst, &trace).unwrap();
        assert_eq!(staged.stages.len(), 1);
        let st = &staged.stages[0];
        assert_eq!(st.lost, 0.0);
        assert_eq!(st.pinned_from.weights, vec![0.0, 97.0, 0.0, 0.0]);
        assert_eq!(staged.final_solution.objective, 1805.0);
    }

    #[test]
    fn staged_without_failures_matches_solve() {
        let inst = worked();
        let trace = ServiceTrace::in_consumer_order(&inst, &[97.0, 78.0], vec![]).unwrap();
        let staged = solve_staged(&inst, &trace).unwrap();
        assert!(staged.stages.is_empty());
        let direct = solve(&inst, &[97.0, 78.0], &all_alive(&inst), &PinSet::new()).unwrap();
        assert_eq!(staged.final_solution, direct);
    }

    #[test]
    fn staged_reports_infeasible_stage() {
        let inst = ProblemInstance::new(1, 1, vec![5.0], vec![10.0]).unwrap();
        let f = FailureEvent {
            after_demand: 1,
            edge: EdgeId::new(0, 0),
        };
        let trace = ServiceTrace::in_consumer_order(&inst, &[10.0], vec![f]).unwrap();
        assert_eq!(
            solve_staged(&inst, &trace),
            Err(SolverError::InfeasibleStage { stage: 2 })
        );
    }

    #[test]
    fn staged_pins_keep_prior_weights_and_replace_lost() {
        // c1 goes to p1 at stage 1; p1 edge of c1 then dies and c1 must move
        let inst = ProblemInstance::new(2, 2, vec![1.0, 4.0, 2.0, 3.0], vec![10.0, 10.0]).unwrap();
        let f = FailureEvent {
            after_demand: 1,
            edge: EdgeId::new(0, 0),
        };
        let trace = ServiceTrace::in_consumer_order(&inst, &[6.0, 5.0], vec![f]).unwrap();
        let staged = solve_staged(&inst, &trace).unwrap();
        assert_eq!(staged.stages[0].lost, 6.0);
        assert_eq!(staged.stages[0].resolved.weights, vec![0.0, 6.0, 0.0, 0.0]);
        // c2 then prefers p1 (2 < 3)
        assert_eq!(staged.final_solution.weights, vec![0.0, 6.0, 5.0, 0.0]);
        assert_eq!(staged.final_solution.objective, 34.0);
    }

    #[test]
    fn staged_optimum_is_not_a_lower_bound_on_online_cost() {
        // Prefix optimum routes c1 through p2 to leave p1 for c2. When (c1,p2)
        // fails, the pinned c2→p1 weight forces c1 onto the expensive p3.
        // Greedy never touched (c1,p2) and keeps its cheaper allocation.
        let inst = ProblemInstance::new(2, 3, vec![1.0, 2.0, 50.0, 1.0, 3.0, 100.0], vec![10.0, 10.0, 100.0]).unwrap();
        let f = FailureEvent {
            after_demand: 2,
            edge: EdgeId::new(0, 1),
        };
        let trace = ServiceTrace::in_consumer_order(&inst, &[10.0, 10.0], vec![f]).unwrap();
        let staged = opt_prefix_series(&inst, &trace, OptProtocol::Staged);
        let hindsight = opt_prefix_series(&inst, &trace, OptProtocol::Hindsight);
        assert_eq!(staged.points.last().unwrap().cost, 510.0);
        assert_eq!(hindsight.points.last().unwrap().cost, 40.0);
        // greedy: c1→p1 (10), c2→p2 (30)
        let greedy_cost = 10.0 * 1.0 + 10.0 * 3.0;
        assert!(staged.points.last().unwrap().cost > greedy_cost);
        assert!(hindsight.points.last().unwrap().cost <= greedy_cost);
    }

    fn small_instance() -> impl Strategy<Value = (ProblemInstance, Vec<f64>, Vec<bool>)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(1u32..=20, n * m),
                proptest::collection::vec(0u32..=20, m),
                proptest::collection::vec(0u32..=20, n),
                proptest::collection::vec(proptest::bool::weighted(0.85), n * m),
            )
                .prop_map(move |(d, c, r, alive)| {
                    let inst = ProblemInstance::new(
                        n,
                        m,
                        d.into_iter().map(f64::from).collect(),
                        c.into_iter().map(f64::from).collect(),
                    )
                    .unwrap();
                    (inst, r.into_iter().map(f64::from).collect(), alive)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn matches_brute_force((inst, r, alive) in small_instance()) {
            let fast = solve(&inst, &r, &alive, &PinSet::new());
            let slow = brute_force_oracle(&inst, &r, &alive);
            match (fast, slow) {
                (Ok(a), Ok(b)) => prop_assert!((a.objective - b.objective).abs() <= 1e-6),
                (Err(SolverError::Infeasible { .. }), Err(SolverError::Infeasible { .. })) => {}
                (a, b) => prop_assert!(false, "solver {:?} vs oracle {:?}", a, b),
            }
        }

        #[test]
        fn optimal_solutions_validate((inst, r, alive) in small_instance()) {
            if let Ok(sol) = solve(&inst, &r, &alive, &PinSet::new()) {
                let state = AllocationState::from_weights(&inst, sol.weights.clone(), alive.clone()).unwrap();
                prop_assert_eq!(validate(&inst, &state, &r), Ok(()));
                let recomputed = total_cost(&inst, &sol.weights);
                prop_assert!((sol.objective - recomputed).abs() <= tolerance(recomputed));
            }
        }

        #[test]
        fn pins_never_lower_the_objective((inst, r, alive) in small_instance(), pick in 0usize..9, frac in 0.0f64..1.0) {
            if let Ok(free) = solve(&inst, &r, &alive, &PinSet::new()) {
                let edge = inst.edge_at(pick % inst.num_edges());
                if alive[inst.index(edge)] {
                    let mut pins = PinSet::new();
                    let bound = r[edge.consumer].min(inst.capacity(edge.producer)) * frac;
                    pins.pin(edge, bound);
                    if let Ok(pinned) = solve(&inst, &r, &alive, &pins) {
                        prop_assert!(pinned.objective >= free.objective - 1e-9 * free.objective.max(1.0));
                        prop_assert!(pinned.weight(&inst, edge) >= bound - 1e-9);
                    }
                }
            }
        }

        #[test]
        fn prefix_series_is_monotone((inst, r, _alive) in small_instance(), fail_at in 1usize..=3, fail_edge in 0usize..9) {
            let n = inst.num_consumers();
            let failures = vec![FailureEvent {
                after_demand: fail_at.min(n),
                edge: inst.edge_at(fail_edge % inst.num_edges()),
            }];
            let trace = ServiceTrace::in_consumer_order(&inst, &r, failures).unwrap();
            for protocol in [OptProtocol::Hindsight, OptProtocol::Staged] {
                let s = opt_prefix_series(&inst, &trace, protocol);
                for w in s.points.windows(2) {
                    prop_assert!(w[1].cost >= w[0].cost - 1e-9 * w[0].cost.max(1.0));
                }
            }
        }
    }
}
