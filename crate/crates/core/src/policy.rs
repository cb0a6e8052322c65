//! Online edge-selection policies.
//!
//! Every policy answers one question: given the demanding consumer's row of
//! available edges, which edge gets the next chunk of demand? The splitting
//! loop in [`allocate_demand`] keeps asking until the demand is placed, so
//! a policy never has to reason about capacity itself. The proportional
//! rule is the exception: it spreads one demand over all available edges at
//! once and has its own water-filling loop.

use rand_core::RngCore;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{tolerance, AllocationState, EdgeId, ProblemInstance, ServiceTrace};
use crate::rng::{seeded, uniform_index, SplitMix64};
use crate::sim::{self, SimError, SimulationResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("consumer {consumer} has no available edge")]
    NoAvailableEdge { consumer: usize },
    #[error("consumer {consumer}: {unmet} units could not be placed")]
    InsufficientCapacity { consumer: usize, unmet: f64 },
    #[error("invalid policy configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    Greedy,
    Randomized,
    /// Best of several randomized runs.
    Derandomized,
    /// Inverse-distance proportional splitting.
    Proportional,
}

impl PolicyKind {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Greedy => "greedy",
            PolicyKind::Randomized => "randomized",
            PolicyKind::Derandomized => "derandomized",
            PolicyKind::Proportional => "proportional",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "greedy" => Some(PolicyKind::Greedy),
            "randomized" => Some(PolicyKind::Randomized),
            "derandomized" => Some(PolicyKind::Derandomized),
            "proportional" => Some(PolicyKind::Proportional),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    /// Sub-optimal penalty: a random candidate is accepted when its
    /// distance is at most `beta` times the cheapest one.
    pub beta: f64,
    /// Candidate-set size; `None` means `min(4, producers)`.
    pub k: Option<usize>,
    /// Random draws before falling back to greedy; `None` means `k`.
    pub max_iterations: Option<usize>,
    pub seed: u64,
    /// Number of randomized runs for [`PolicyKind::Derandomized`].
    pub runs: usize,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            kind: PolicyKind::Greedy,
            beta: 1.0,
            k: None,
            max_iterations: None,
            seed: 0,
            runs: 1,
        }
    }
}

impl PolicyConfig {
    pub fn greedy() -> Self {
        Self::default()
    }

    pub fn randomized(beta: f64, seed: u64) -> Self {
        Self {
            kind: PolicyKind::Randomized,
            beta,
            seed,
            ..Self::default()
        }
    }

    pub fn derandomized(beta: f64, seed: u64, runs: usize) -> Self {
        Self {
            kind: PolicyKind::Derandomized,
            beta,
            seed,
            runs,
            ..Self::default()
        }
    }

    pub fn proportional() -> Self {
        Self {
            kind: PolicyKind::Proportional,
            ..Self::default()
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_max_iterations(mut self, iters: usize) -> Self {
        self.max_iterations = Some(iters);
        self
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        if !(self.beta.is_finite() && self.beta >= 1.0) {
            return Err(PolicyError::InvalidConfig("beta must be a finite value >= 1"));
        }
        if self.k == Some(0) {
            return Err(PolicyError::InvalidConfig("k must be >= 1"));
        }
        if self.max_iterations == Some(0) {
            return Err(PolicyError::InvalidConfig("max_iterations must be >= 1"));
        }
        if self.runs == 0 {
            return Err(PolicyError::InvalidConfig("runs must be >= 1"));
        }
        Ok(())
    }

    pub fn effective_k(&self, num_producers: usize) -> usize {
        self.k.unwrap_or_else(|| num_producers.min(4))
    }

    pub fn effective_max_iterations(&self, num_producers: usize) -> usize {
        self.max_iterations.unwrap_or_else(|| self.effective_k(num_producers))
    }
}

/// An available edge of the demanding consumer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub edge: EdgeId,
    pub distance: f64,
    /// Remaining capacity of the edge's producer.
    pub remaining: f64,
}

/// The demanding consumer's alive edges whose producer still has capacity,
/// sorted by distance, ties by producer index.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionContext {
    pub consumer: usize,
    candidates: Vec<Candidate>,
}

impl SelectionContext {
    pub fn new(instance: &ProblemInstance, state: &AllocationState, consumer: usize) -> Self {
        let mut candidates: Vec<Candidate> = (0..instance.num_producers())
            .map(|j| EdgeId::new(consumer, j))
            .filter(|&e| state.is_alive(e) && state.remaining_capacity(e.producer) > 0.0)
            .map(|edge| Candidate {
                edge,
                distance: instance.distance(edge),
                remaining: state.remaining_capacity(edge.producer),
            })
            .collect();
        candidates.sort_by(|a, b| {
            a.distance
                .total_cmp(&b.distance)
                .then(a.edge.producer.cmp(&b.edge.producer))
        });
        Self { consumer, candidates }
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// The `k` cheapest available edges, cheapest first.
pub fn find_top_avail(ctx: &SelectionContext, k: usize) -> Result<&[Candidate], PolicyError> {
    if ctx.is_empty() {
        return Err(PolicyError::NoAvailableEdge { consumer: ctx.consumer });
    }
    Ok(&ctx.candidates[..k.min(ctx.candidates.len())])
}

pub fn greedy_select(ctx: &SelectionContext) -> Result<EdgeId, PolicyError> {
    Ok(find_top_avail(ctx, 1)?[0].edge)
}

/// Randomized-Greedy: sample the top-`k` set up to `max_iterations` times and
/// take the first edge within `beta` of the cheapest; otherwise the cheapest.
pub fn randomized_select<R: RngCore + ?Sized>(
    ctx: &SelectionContext,
    beta: f64,
    k: usize,
    max_iterations: usize,
    rng: &mut R,
) -> Result<EdgeId, PolicyError> {
    let top = find_top_avail(ctx, k)?;
    let best = top[0];
    for _ in 0..max_iterations {
        let drawn = top[uniform_index(rng, top.len())];
        if drawn.distance / best.distance <= beta {
            return Ok(drawn.edge);
        }
    }
    Ok(best.edge)
}

/// Places `amount` for `consumer`, one selector pick at a time. Each pick
/// receives `min(left, producer capacity)`. On failure the state is rolled
/// back and nothing is applied.
pub fn allocate_demand<F>(
    instance: &ProblemInstance,
    state: &mut AllocationState,
    consumer: usize,
    amount: f64,
    mut selector: F,
) -> Result<Vec<(EdgeId, f64)>, PolicyError>
where
    F: FnMut(&SelectionContext) -> Result<EdgeId, PolicyError>,
{
    let snapshot = state.clone();
    let mut deltas = Vec::new();
    let mut left = amount;
    let dust = 1e-12 * amount.max(1.0);
    while left > dust {
        let ctx = SelectionContext::new(instance, state, consumer);
        let edge = match selector(&ctx) {
            Ok(edge) => edge,
            Err(PolicyError::NoAvailableEdge { .. }) => {
                *state = snapshot;
                return Err(PolicyError::InsufficientCapacity { consumer, unmet: left });
            }
            Err(e) => {
                *state = snapshot;
                return Err(e);
            }
        };
        let take = left.min(state.remaining_capacity(edge.producer));
        state.add_weight(instance, edge, take);
        deltas.push((edge, take));
        left -= take;
    }
    Ok(deltas)
}

/// Splits `amount` over every available edge in proportion to `1/d_ij`,
/// capping at producer capacity and re-spreading the excess over the
/// uncapped edges by the same rule.
pub fn proportional_allocate(
    instance: &ProblemInstance,
    state: &mut AllocationState,
    consumer: usize,
    amount: f64,
) -> Result<Vec<(EdgeId, f64)>, PolicyError> {
    if amount <= 0.0 {
        return Ok(Vec::new());
    }
    let ctx = SelectionContext::new(instance, state, consumer);
    let mut open: Vec<Candidate> = ctx.candidates().to_vec();
    let mut shares: Vec<(EdgeId, f64)> = Vec::new();
    let mut left = amount;
    loop {
        if open.is_empty() {
            if left > tolerance(amount) {
                return Err(PolicyError::InsufficientCapacity { consumer, unmet: left });
            }
            break;
        }
        let inv_sum: f64 = open.iter().map(|c| 1.0 / c.distance).sum();
        let (capped, rest): (Vec<Candidate>, Vec<Candidate>) = open
            .iter()
            .partition(|c| left * (1.0 / c.distance) / inv_sum >= c.remaining);
        if capped.is_empty() {
            for c in &open {
                shares.push((c.edge, left * (1.0 / c.distance) / inv_sum));
            }
            break;
        }
        for c in &capped {
            shares.push((c.edge, c.remaining));
            left -= c.remaining;
        }
        open = rest;
        if left <= 0.0 {
            break;
        }
    }
    shares.sort_by_key(|(e, _)| e.producer);
    for &(edge, w) in &shares {
        state.add_weight(instance, edge, w);
    }
    Ok(shares.into_iter().filter(|(_, w)| *w > 0.0).collect())
}

/// Diagnostic scale bound for inverse-distance weights `w_ij = s / d_ij`:
/// the largest `s` keeping every producer within capacity,
/// `min_j M_j / Σ_i (1/d_ij)`.
pub fn inverse_distance_bound(instance: &ProblemInstance) -> f64 {
    (0..instance.num_producers())
        .map(|j| {
            let inv: f64 = (0..instance.num_consumers())
                .map(|i| 1.0 / instance.distance(EdgeId::new(i, j)))
                .sum();
            instance.capacity(j) / inv
        })
        .fold(f64::INFINITY, f64::min)
}

/// A configured policy with its own random stream, ready to place demands.
#[derive(Debug, Clone)]
pub struct Policy {
    config: PolicyConfig,
    rng: SplitMix64,
}

impl Policy {
    pub fn new(config: PolicyConfig) -> Result<Self, PolicyError> {
        config.validate()?;
        Ok(Self {
            rng: seeded(config.seed),
            config,
        })
    }

    pub fn config(&self) -> &PolicyConfig {
        &self.config
    }

    pub fn allocate(
        &mut self,
        instance: &ProblemInstance,
        state: &mut AllocationState,
        consumer: usize,
        amount: f64,
    ) -> Result<Vec<(EdgeId, f64)>, PolicyError> {
        let m = instance.num_producers();
        match self.config.kind {
            PolicyKind::Greedy => allocate_demand(instance, state, consumer, amount, greedy_select),
            PolicyKind::Randomized | PolicyKind::Derandomized => {
                let (beta, k, iters) = (
                    self.config.beta,
                    self.config.effective_k(m),
                    self.config.effective_max_iterations(m),
                );
                let rng = &mut self.rng;
                allocate_demand(instance, state, consumer, amount, |ctx| {
                    randomized_select(ctx, beta, k, iters, rng)
                })
            }
            PolicyKind::Proportional => proportional_allocate(instance, state, consumer, amount),
        }
    }
}

/// Outcome of best-of-`runs` randomized simulation.
#[derive(Debug, Clone)]
pub struct DerandomizedOutcome {
    pub best: SimulationResult,
    /// 1-based index of the winning run (its seed is `seed + run`).
    pub best_run: usize,
    pub best_cost: f64,
    /// Final cost per run; `None` for runs that stopped early.
    pub run_costs: Vec<Option<f64>>,
}

/// Runs the randomized policy `runs` times, run `r` seeded with `seed + r`,
/// and keeps the cheapest complete run (lowest index on ties). Runs execute
/// in parallel; the result does not depend on scheduling. If every run stops
/// early, run 1 is returned.
pub fn derandomized_run(
    instance: &ProblemInstance,
    trace: &ServiceTrace,
    config: &PolicyConfig,
) -> Result<DerandomizedOutcome, SimError> {
    config.validate()?;
    let results: Vec<SimulationResult> = (1..=config.runs)
        .into_par_iter()
        .map(|r| {
            let run_config = PolicyConfig {
                kind: PolicyKind::Randomized,
                seed: config.seed.wrapping_add(r as u64),
                ..*config
            };
            sim::run(instance, trace, &run_config)
        })
        .collect::<Result<_, _>>()?;
    let run_costs: Vec<Option<f64>> = results
        .iter()
        .map(|r| r.halt.is_none().then_some(r.final_cost))
        .collect();
    let mut best_idx = 0;
    let mut best_cost: Option<f64> = None;
    for (i, c) in run_costs.iter().enumerate() {
        if let Some(c) = *c {
            if best_cost.is_none_or(|b| c < b) {
                best_cost = Some(c);
                best_idx = i;
            }
        }
    }
    let best = results.into_iter().nth(best_idx).expect("runs >= 1");
    Ok(DerandomizedOutcome {
        best_cost: best.final_cost,
        best,
        best_run: best_idx + 1,
        run_costs,
    })
}
