//! Domain types shared by every other module: the static bipartite instance,
//! the online trace, and the live allocation state together with the cost
//! and feasibility checks used as a test oracle throughout the crate.

use std::fmt;

use thiserror::Error;

/// Absolute feasibility tolerance, scaled by the magnitude being compared.
pub fn tolerance(magnitude: f64) -> f64 {
    1e-9 * magnitude.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("dimension mismatch: expected {expected} {what}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("distance of edge {edge} must be positive and finite, got {value}")]
    NonPositiveDistance { edge: EdgeId, value: f64 },
    #[error("capacity of producer {producer} must be non-negative and finite, got {value}")]
    NegativeCapacity { producer: usize, value: f64 },
    #[error("consumer index {0} out of range")]
    ConsumerOutOfRange(usize),
    #[error("consumer {0} appears more than once in the demand list")]
    DuplicateConsumer(usize),
    #[error("demand of consumer {consumer} must be non-negative and finite, got {value}")]
    InvalidDemand { consumer: usize, value: f64 },
    #[error("failure after demand {after_demand} is outside 1..={num_demands}")]
    FailureOutOfRange { after_demand: usize, num_demands: usize },
    #[error("edge ordinal {0} out of range")]
    EdgeOutOfRange(usize),
}

/// An edge of the complete bipartite graph, identified by its endpoints.
///
/// The flat ordinal is 1-based and row-major, matching the variable names
/// `x1..x{n*m}` of the LP listing and the edge numbers of the input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId {
    pub consumer: usize,
    pub producer: usize,
}

impl EdgeId {
    pub fn new(consumer: usize, producer: usize) -> Self {
        Self { consumer, producer }
    }

    pub fn flat(&self, num_producers: usize) -> usize {
        self.consumer * num_producers + self.producer + 1
    }

    pub fn from_flat(flat: usize, num_consumers: usize, num_producers: usize) -> Result<Self, ModelError> {
        if flat == 0 || flat > num_consumers * num_producers {
            return Err(ModelError::EdgeOutOfRange(flat));
        }
        let idx = flat - 1;
        Ok(Self::new(idx / num_producers, idx % num_producers))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based for humans
        write!(f, "(c{}, p{})", self.consumer + 1, self.producer + 1)
    }
}

/// Static topology: distances `d_ij` and producer capacities `M_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    num_consumers: usize,
    num_producers: usize,
    distances: Vec<f64>,
    capacities: Vec<f64>,
}

impl ProblemInstance {
    /// Validates and builds an instance. `distances` is row-major,
    /// indexed `(consumer, producer)`.
    pub fn new(
        num_consumers: usize,
        num_producers: usize,
        distances: Vec<f64>,
        capacities: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if num_consumers == 0 {
            return Err(ModelError::DimensionMismatch {
                what: "consumers (at least)",
                expected: 1,
                actual: 0,
            });
        }
        if num_producers == 0 {
            return Err(ModelError::DimensionMismatch {
                what: "producers (at least)",
                expected: 1,
                actual: 0,
            });
        }
        if distances.len() != num_consumers * num_producers {
            return Err(ModelError::DimensionMismatch {
                what: "distances",
                expected: num_consumers * num_producers,
                actual: distances.len(),
            });
        }
        if capacities.len() != num_producers {
            return Err(ModelError::DimensionMismatch {
                what: "capacities",
                expected: num_producers,
                actual: capacities.len(),
            });
        }
        for (idx, &d) in distances.iter().enumerate() {
            if !(d.is_finite() && d > 0.0) {
                return Err(ModelError::NonPositiveDistance {
                    edge: EdgeId::new(idx / num_producers, idx % num_producers),
                    value: d,
                });
            }
        }
        for (producer, &m) in capacities.iter().enumerate() {
            if !(m.is_finite() && m >= 0.0) {
                return Err(ModelError::NegativeCapacity { producer, value: m });
            }
        }
        Ok(Self {
            num_consumers,
            num_producers,
            distances,
            capacities,
        })
    }

    pub fn num_consumers(&self) -> usize {
        self.num_consumers
    }

    pub fn num_producers(&self) -> usize {
        self.num_producers
    }

    pub fn num_edges(&self) -> usize {
        self.num_consumers * self.num_producers
    }

    pub fn distance(&self, edge: EdgeId) -> f64 {
        self.distances[self.index(edge)]
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn capacity(&self, producer: usize) -> f64 {
        self.capacities[producer]
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    /// Row-major position of an edge in `distances` (flat ordinal minus one).
    pub fn index(&self, edge: EdgeId) -> usize {
        debug_assert!(edge.consumer < self.num_consumers && edge.producer < self.num_producers);
        edge.consumer * self.num_producers + edge.producer
    }

    pub fn edge_at(&self, index: usize) -> EdgeId {
        EdgeId::new(index / self.num_producers, index % self.num_producers)
    }

    /// All edges in flat order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.num_edges()).map(move |i| self.edge_at(i))
    }

    pub fn edge_from_flat(&self, flat: usize) -> Result<EdgeId, ModelError> {
        EdgeId::from_flat(flat, self.num_consumers, self.num_producers)
    }

    /// Largest magnitude among capacities, used to scale tolerances.
    pub(crate) fn capacity_scale(&self) -> f64 {
        self.capacities.iter().fold(1.0_f64, |acc, &m| acc.max(m))
    }
}

/// One online demand: consumer `consumer` asks for `amount` units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demand {
    pub consumer: usize,
    pub amount: f64,
}

/// Edge failure taking effect right after the `after_demand`-th demand (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureEvent {
    pub after_demand: usize,
    pub edge: EdgeId,
}

/// The online input: demands in arrival order plus failure events keyed to
/// demand ordinals.
///
/// Each consumer demands at most once. A trace covering every consumer is
/// complete; shorter traces are allowed for prefixes and empty runs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ServiceTrace {
    demands: Vec<Demand>,
    failures: Vec<FailureEvent>,
}

impl ServiceTrace {
    pub fn new(
        instance: &ProblemInstance,
        demands: Vec<Demand>,
        mut failures: Vec<FailureEvent>,
    ) -> Result<Self, ModelError> {
        let mut seen = vec![false; instance.num_consumers()];
        for d in &demands {
            if d.consumer >= instance.num_consumers() {
                return Err(ModelError::ConsumerOutOfRange(d.consumer));
            }
            if seen[d.consumer] {
                return Err(ModelError::DuplicateConsumer(d.consumer));
            }
            seen[d.consumer] = true;
            if !(d.amount.is_finite() && d.amount >= 0.0) {
                return Err(ModelError::InvalidDemand {
                    consumer: d.consumer,
                    value: d.amount,
                });
            }
        }
        for f in &failures {
            if f.after_demand == 0 || f.after_demand > demands.len() {
                return Err(ModelError::FailureOutOfRange {
                    after_demand: f.after_demand,
                    num_demands: demands.len(),
                });
            }
            if f.edge.consumer >= instance.num_consumers() || f.edge.producer >= instance.num_producers() {
                return Err(ModelError::EdgeOutOfRange(f.edge.flat(instance.num_producers())));
            }
        }
        // stable: failures at the same instant keep their listed order
        failures.sort_by_key(|f| f.after_demand);
        Ok(Self { demands, failures })
    }

    /// Demands in consumer order `0..n`, i.e. consumer `i` arrives at step `i + 1`.
    pub fn in_consumer_order(
        instance: &ProblemInstance,
        amounts: &[f64],
        failures: Vec<FailureEvent>,
    ) -> Result<Self, ModelError> {
        let demands = amounts
            .iter()
            .enumerate()
            .map(|(consumer, &amount)| Demand { consumer, amount })
            .collect();
        Self::new(instance, demands, failures)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn failures(&self) -> &[FailureEvent] {
        &self.failures
    }

    pub fn is_empty(&self) -> bool {
        self.demands.is_empty()
    }

    pub fn len(&self) -> usize {
        self.demands.len()
    }

    /// Failures that take effect right after demand `step` (1-based).
    pub fn failures_after(&self, step: usize) -> impl Iterator<Item = &FailureEvent> {
        self.failures.iter().filter(move |f| f.after_demand == step)
    }

    /// Per-consumer demand totals over the first `steps` demands.
    pub fn cumulative_demands(&self, num_consumers: usize, steps: usize) -> Vec<f64> {
        let mut out = vec![0.0; num_consumers];
        for d in self.demands.iter().take(steps) {
            out[d.consumer] += d.amount;
        }
        out
    }
}

/// Live online state. Weights only grow, except that a failed edge is zeroed.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationState {
    num_producers: usize,
    weights: Vec<f64>,
    alive: Vec<bool>,
    remaining_capacity: Vec<f64>,
    satisfied: Vec<f64>,
    cumulative_cost: f64,
}

impl AllocationState {
    pub fn new(instance: &ProblemInstance) -> Self {
        Self {
            num_producers: instance.num_producers(),
            weights: vec![0.0; instance.num_edges()],
            alive: vec![true; instance.num_edges()],
            remaining_capacity: instance.capacities().to_vec(),
            satisfied: vec![0.0; instance.num_consumers()],
            cumulative_cost: 0.0,
        }
    }

    fn idx(&self, edge: EdgeId) -> usize {
        edge.consumer * self.num_producers + edge.producer
    }

    pub fn weight(&self, edge: EdgeId) -> f64 {
        self.weights[self.idx(edge)]
    }

    /// Row-major weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_alive(&self, edge: EdgeId) -> bool {
        self.alive[self.idx(edge)]
    }

    /// Row-major alive flags.
    pub fn alive_mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn remaining_capacity(&self, producer: usize) -> f64 {
        self.remaining_capacity[producer]
    }

    pub fn remaining_capacities(&self) -> &[f64] {
        &self.remaining_capacity
    }

    pub fn satisfied(&self, consumer: usize) -> f64 {
        self.satisfied[consumer]
    }

    pub fn satisfied_all(&self) -> &[f64] {
        &self.satisfied
    }

    pub fn cumulative_cost(&self) -> f64 {
        self.cumulative_cost
    }

    /// Adds `delta ≥ 0` units to an alive edge, consuming producer capacity.
    pub(crate) fn add_weight(&mut self, instance: &ProblemInstance, edge: EdgeId, delta: f64) {
        debug_assert!(delta >= 0.0);
        debug_assert!(self.is_alive(edge));
        let i = self.idx(edge);
        self.weights[i] += delta;
        self.remaining_capacity[edge.producer] -= delta;
        // absorb rounding dust so the capacity invariant stays exact
        if self.remaining_capacity[edge.producer] < 0.0 {
            self.remaining_capacity[edge.producer] = 0.0;
        }
        self.satisfied[edge.consumer] += delta;
        self.cumulative_cost += instance.distance(edge) * delta;
    }

    /// Kills an edge, zeroing its weight and returning the producer capacity
    /// it occupied. Returns the weight removed; a dead edge yields 0.
    pub(crate) fn kill_edge(&mut self, instance: &ProblemInstance, edge: EdgeId) -> f64 {
        let i = self.idx(edge);
        if !self.alive[i] {
            return 0.0;
        }
        let lost = self.weights[i];
        self.alive[i] = false;
        self.weights[i] = 0.0;
        self.remaining_capacity[edge.producer] += lost;
        self.satisfied[edge.consumer] -= lost;
        self.cumulative_cost -= instance.distance(edge) * lost;
        if self.cumulative_cost < 0.0 {
            self.cumulative_cost = 0.0;
        }
        lost
    }

    /// Builds a state from raw weights, for tests and offline witnesses.
    pub fn from_weights(instance: &ProblemInstance, weights: Vec<f64>, alive: Vec<bool>) -> Result<Self, ModelError> {
        if weights.len() != instance.num_edges() {
            return Err(ModelError::DimensionMismatch {
                what: "weights",
                expected: instance.num_edges(),
                actual: weights.len(),
            });
        }
        if alive.len() != instance.num_edges() {
            return Err(ModelError::DimensionMismatch {
                what: "alive flags",
                expected: instance.num_edges(),
                actual: alive.len(),
            });
        }
        let mut remaining = instance.capacities().to_vec();
        let mut satisfied = vec![0.0; instance.num_consumers()];
        for (i, &w) in weights.iter().enumerate() {
            let e = instance.edge_at(i);
            remaining[e.producer] -= w;
            satisfied[e.consumer] += w;
        }
        let cumulative_cost = total_cost(instance, &weights);
        Ok(Self {
            num_producers: instance.num_producers(),
            weights,
            alive,
            remaining_capacity: remaining,
            satisfied,
            cumulative_cost,
        })
    }
}

/// Per-step cost snapshot of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// 1-based demand ordinal; re-demand records carry the ordinal of the
    /// demand after which the failure happened.
    pub step: usize,
    pub consumer: usize,
    pub demand: f64,
    /// Internal re-demand caused by an edge failure.
    pub synthetic: bool,
    pub policy_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
}

impl StepRecord {
    pub fn new(step: usize, consumer: usize, demand: f64, synthetic: bool, policy_cost: f64, opt_cost: f64) -> Self {
        Self {
            step,
            consumer,
            demand,
            synthetic,
            policy_cost,
            opt_cost,
            ratio: cost_ratio(policy_cost, opt_cost),
        }
    }
}

/// `policy / opt`, defined as 1 while the optimum is still zero.
pub fn cost_ratio(policy_cost: f64, opt_cost: f64) -> f64 {
    if opt_cost <= 0.0 {
        1.0
    } else {
        policy_cost / opt_cost
    }
}

/// `Σ d_ij · w_ij` over a row-major weight matrix.
pub fn total_cost(instance: &ProblemInstance, weights: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), instance.num_edges());
    instance.distances().iter().zip(weights).map(|(d, w)| d * w).sum()
}

/// A single broken constraint reported by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Consumer's allocated total differs from what it should be.
    DemandShortfall {
        consumer: usize,
        expected: f64,
        actual: f64,
    },
    CapacityExcess {
        producer: usize,
        capacity: f64,
        used: f64,
    },
    NegativeWeight {
        edge: EdgeId,
        weight: f64,
    },
    DeadEdgeWeight {
        edge: EdgeId,
        weight: f64,
    },
    /// Tracked remaining capacity disagrees with `M_j − Σ_i w_ij`.
    RemainingCapacityDrift {
        producer: usize,
        tracked: f64,
        recomputed: f64,
    },
    /// Tracked satisfied amount disagrees with the row sum.
    SatisfiedDrift {
        consumer: usize,
        tracked: f64,
        recomputed: f64,
    },
    CostDrift {
        tracked: f64,
        recomputed: f64,
    },
}

/// Checks every allocation invariant plus `satisfied == expected` per consumer.
pub fn validate(instance: &ProblemInstance, state: &AllocationState, expected: &[f64]) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let n = instance.num_consumers();
    let m = instance.num_producers();
    let mut row = vec![0.0; n];
    let mut col = vec![0.0; m];
    for edge in instance.edges() {
        let w = state.weight(edge);
        if w < -tolerance(w) {
            out.push(Violation::NegativeWeight { edge, weight: w });
        }
        if !state.is_alive(edge) && w != 0.0 {
            out.push(Violation::DeadEdgeWeight { edge, weight: w });
        }
        row[edge.consumer] += w;
        col[edge.producer] += w;
    }
    for (producer, &used) in col.iter().enumerate() {
        let cap = instance.capacity(producer);
        if used > cap + tolerance(cap) {
            out.push(Violation::CapacityExcess {
                producer,
                capacity: cap,
                used,
            });
        }
        let recomputed = cap - used;
        let tracked = state.remaining_capacity(producer);
        if (tracked - recomputed.max(0.0)).abs() > tolerance(cap) || tracked < 0.0 {
            out.push(Violation::RemainingCapacityDrift {
                producer,
                tracked,
                recomputed,
            });
        }
    }
    for (consumer, &actual) in row.iter().enumerate() {
        let want = expected.get(consumer).copied().unwrap_or(0.0);
        if (actual - want).abs() > tolerance(want) {
            out.push(Violation::DemandShortfall {
                consumer,
                expected: want,
                actual,
            });
        }
        let tracked = state.satisfied(consumer);
        if (tracked - actual).abs() > tolerance(actual) {
            out.push(Violation::SatisfiedDrift {
                consumer,
                tracked,
                recomputed: actual,
            });
        }
    }
    let recomputed = total_cost(instance, state.weights());
    if (state.cumulative_cost() - recomputed).abs() > tolerance(recomputed) {
        out.push(Violation::CostDrift {
            tracked: state.cumulative_cost(),
            recomputed,
        });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn worked_instance() -> ProblemInstance {
        ProblemInstance::new(2, 2, vec![47.0, 17.0, 11.0, 2.0], vec![26.0, 839.0]).unwrap()
    }

    #[test]
    fn builds_listing_instance() {
        let inst = worked_instance();
        assert_eq!(inst.distance(EdgeId::new(0, 0)), 47.0);
        assert_eq!(inst.distance(EdgeId::new(0, 1)), 17.0);
        assert_eq!(inst.distance(EdgeId::new(1, 0)), 11.0);
        assert_eq!(inst.distance(EdgeId::new(1, 1)), 2.0);
        let tiny = ProblemInstance::new(1, 1, vec![5.0], vec![10.0]).unwrap();
        assert_eq!(tiny.num_edges(), 1);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(matches!(
            ProblemInstance::new(2, 2, vec![47.0, 17.0, 11.0], vec![26.0, 839.0]),
            Err(ModelError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ProblemInstance::new(1, 2, vec![1.0, 0.0], vec![1.0, 1.0]),
            Err(ModelError::NonPositiveDistance { .. })
        ));
        assert!(matches!(
            ProblemInstance::new(1, 1, vec![f64::INFINITY], vec![1.0]),
            Err(ModelError::NonPositiveDistance { .. })
        ));
        assert!(matches!(
            ProblemInstance::new(1, 1, vec![1.0], vec![-1.0]),
            Err(ModelError::NegativeCapacity { .. })
        ));
    }

    #[test]
    fn edge_three_is_second_consumer_first_producer() {
        let e = EdgeId::from_flat(3, 2, 2).unwrap();
        assert_eq!(e, EdgeId::new(1, 0));
        assert!(EdgeId::from_flat(0, 2, 2).is_err());
        assert!(EdgeId::from_flat(5, 2, 2).is_err());
    }

    #[test]
    fn flat_bijection_exhaustive() {
        for n in 1..6 {
            for m in 1..6 {
                let mut seen = vec![false; n * m + 1];
                for i in 0..n {
                    for j in 0..m {
                        let e = EdgeId::new(i, j);
                        let f = e.flat(m);
                        assert!(!seen[f]);
                        seen[f] = true;
                        assert_eq!(EdgeId::from_flat(f, n, m).unwrap(), e);
                    }
                }
            }
        }
    }

    #[test]
    fn total_cost_examples() {
        let inst = worked_instance();
        assert_eq!(total_cost(&inst, &[0.0, 97.0, 0.0, 78.0]), 1805.0);
        assert_eq!(total_cost(&inst, &[0.0; 4]), 0.0);
        let tiny = ProblemInstance::new(1, 1, vec![5.0], vec![10.0]).unwrap();
        assert_eq!(total_cost(&tiny, &[3.0]), 15.0);
    }

    #[test]
    fn validate_examples() {
        let inst = worked_instance();
        let ok = AllocationState::from_weights(&inst, vec![0.0, 97.0, 0.0, 78.0], vec![true; 4]).unwrap();
        assert_eq!(validate(&inst, &ok, &[97.0, 78.0]), Ok(()));

        let bad = AllocationState::from_weights(&inst, vec![97.0, 0.0, 0.0, 78.0], vec![true; 4]).unwrap();
        let errs = validate(&inst, &bad, &[97.0, 78.0]).unwrap_err();
        assert!(errs
            .iter()
            .any(|v| matches!(v, Violation::CapacityExcess { producer: 0, .. })));

        let zero = AllocationState::new(&inst);
        assert_eq!(validate(&inst, &zero, &[0.0, 0.0]), Ok(()));
    }

    #[test]
    fn validate_flags_shortfall_and_dead_weight() {
        let inst = worked_instance();
        let s =
            AllocationState::from_weights(&inst, vec![0.0, 90.0, 5.0, 78.0], vec![true, true, false, true]).unwrap();
        let errs = validate(&inst, &s, &[97.0, 83.0]).unwrap_err();
        assert!(errs
            .iter()
            .any(|v| matches!(v, Violation::DemandShortfall { consumer: 0, .. })));
        assert!(errs.iter().any(|v| matches!(
            v,
            Violation::DeadEdgeWeight { edge, .. } if *edge == EdgeId::new(1, 0)
        )));
    }

    #[test]
    fn kill_edge_restores_capacity_and_is_idempotent() {
        let inst = worked_instance();
        let mut s = AllocationState::new(&inst);
        let e = EdgeId::new(0, 1);
        s.add_weight(&inst, e, 40.0);
        assert_eq!(s.remaining_capacity(1), 799.0);
        assert_eq!(s.kill_edge(&inst, e), 40.0);
        assert_eq!(s.remaining_capacity(1), 839.0);
        assert_eq!(s.cumulative_cost(), 0.0);
        assert_eq!(s.kill_edge(&inst, e), 0.0);
        assert_eq!(validate(&inst, &s, &[0.0, 0.0]), Ok(()));
    }

    #[test]
    fn trace_rejects_duplicates_and_bad_failures() {
        let inst = worked_instance();
        let dup = vec![
            Demand {
                consumer: 0,
                amount: 1.0,
            },
            Demand {
                consumer: 0,
                amount: 2.0,
            },
        ];
        assert!(matches!(
            ServiceTrace::new(&inst, dup, vec![]),
            Err(ModelError::DuplicateConsumer(0))
        ));
        let f = FailureEvent {
            after_demand: 3,
            edge: EdgeId::new(0, 0),
        };
        assert!(matches!(
            ServiceTrace::in_consumer_order(&inst, &[1.0, 2.0], vec![f]),
            Err(ModelError::FailureOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_opt_ratio_is_one() {
        assert_eq!(cost_ratio(0.0, 0.0), 1.0);
        assert_eq!(StepRecord::new(1, 0, 0.0, false, 0.0, 0.0).ratio, 1.0);
    }

    proptest! {
        #[test]
        fn total_cost_is_linear(
            d in proptest::collection::vec(0.5f64..100.0, 6),
            w1 in proptest::collection::vec(0.0f64..50.0, 6),
            w2 in proptest::collection::vec(0.0f64..50.0, 6),
        ) {
            let inst = ProblemInstance::new(2, 3, d, vec![1e9; 3]).unwrap();
            let sum: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
            let lhs = total_cost(&inst, &sum);
            let rhs = total_cost(&inst, &w1) + total_cost(&inst, &w2);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
        }
    }
}
