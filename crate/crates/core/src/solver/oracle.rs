//! Exhaustive integer search used to cross-check [`super::solve`].
//!
//! With integer demands and capacities the transportation polytope has
//! integral optimal vertices, so the best integer allocation is the LP
//! optimum. Consumers are enumerated one at a time over every integer split
//! of their demand; results are memoized on the vector of remaining
//! producer capacities.

use std::collections::HashMap;

use super::{OfflineSolution, SolverError};
use crate::model::{total_cost, EdgeId, ProblemInstance};

/// Upper bound on search steps before giving up with `TooLarge`.
pub const ORACLE_STATE_LIMIT: u64 = 10_000_000;

/// Cheapest completion and the split that achieves it, per (consumer, remaining).
type Memo = HashMap<(usize, Vec<u64>), Option<(f64, Vec<u64>)>>;

struct Search<'a> {
    instance: &'a ProblemInstance,
    demands: Vec<u64>,
    alive: &'a [bool],
    memo: Memo,
    visited: u64,
}

impl Search<'_> {
    fn producers_of(&self, consumer: usize) -> Vec<usize> {
        (0..self.instance.num_producers())
            .filter(|&j| self.alive[self.instance.index(EdgeId::new(consumer, j))])
            .collect()
    }

    /// Cheapest completion for consumers `consumer..` given `remaining`.
    /// Returns the cost and this consumer's split (one entry per producer).
    fn best(&mut self, consumer: usize, remaining: &[u64]) -> Result<Option<f64>, SolverError> {
        if consumer == self.instance.num_consumers() {
            return Ok(Some(0.0));
        }
        let key = (consumer, remaining.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.as_ref().map(|(c, _)| *c));
        }
        let producers = self.producers_of(consumer);
        let mut split = vec![0u64; self.instance.num_producers()];
        let mut rem = remaining.to_vec();
        let mut best: Option<(f64, Vec<u64>)> = None;
        self.enumerate(
            consumer,
            &producers,
            0,
            self.demands[consumer],
            &mut split,
            &mut rem,
            &mut best,
        )?;
        let cost = best.as_ref().map(|(c, _)| *c);
        self.memo.insert(key, best);
        Ok(cost)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        consumer: usize,
        producers: &[usize],
        pos: usize,
        left: u64,
        split: &mut Vec<u64>,
        rem: &mut Vec<u64>,
        best: &mut Option<(f64, Vec<u64>)>,
    ) -> Result<(), SolverError> {
        self.visited += 1;
        if self.visited > ORACLE_STATE_LIMIT {
            return Err(SolverError::TooLarge {
                limit: ORACLE_STATE_LIMIT,
            });
        }
        if pos == producers.len() {
            if left != 0 {
                return Ok(());
            }
            let here: f64 = producers
                .iter()
                .map(|&j| split[j] as f64 * self.instance.distance(EdgeId::new(consumer, j)))
                .sum();
            let snapshot = rem.clone();
            if let Some(tail) = self.best(consumer + 1, &snapshot)? {
                let total = here + tail;
                if best.as_ref().is_none_or(|(c, _)| total < *c) {
                    *best = Some((total, split.clone()));
                }
            }
            return Ok(());
        }
        let j = producers[pos];
        let upper = left.min(rem[j]);
        // the last producer must absorb whatever is left
        let lower = if pos + 1 == producers.len() { left } else { 0 };
        if lower > upper {
            return Ok(());
        }
        for take in lower..=upper {
            split[j] = take;
            rem[j] -= take;
            self.enumerate(consumer, producers, pos + 1, left - take, split, rem, best)?;
            rem[j] += take;
        }
        split[j] = 0;
        Ok(())
    }
}

fn as_integer(x: f64) -> Result<u64, SolverError> {
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(53) {
        Ok(x as u64)
    } else {
        Err(SolverError::NonInteger)
    }
}

/// Exact optimum by exhaustive integer search. Demands and capacities must
/// be integers; distances may be arbitrary.
pub fn brute_force_oracle(
    instance: &ProblemInstance,
    demands: &[f64],
    alive: &[bool],
) -> Result<OfflineSolution, SolverError> {
    super::check_inputs(instance, demands, alive, &super::PinSet::new())?;
    let demands = demands.iter().map(|&r| as_integer(r)).collect::<Result<Vec<_>, _>>()?;
    let capacities = instance
        .capacities()
        .iter()
        .map(|&m| as_integer(m))
        .collect::<Result<Vec<_>, _>>()?;
    let total_demand: u64 = demands.iter().sum();
    let mut search = Search {
        instance,
        demands,
        alive,
        memo: HashMap::new(),
        visited: 0,
    };
    let Some(_) = search.best(0, &capacities)? else {
        return Err(SolverError::Infeasible {
            unmet: total_demand as f64,
        });
    };

    // replay memoized choices to rebuild the witness
    let mut weights = vec![0.0; instance.num_edges()];
    let mut rem = capacities;
    for consumer in 0..instance.num_consumers() {
        let (_, split) = search.memo[&(consumer, rem.clone())]
            .clone()
            .expect("feasible path is memoized");
        for (j, &w) in split.iter().enumerate() {
            weights[instance.index(EdgeId::new(consumer, j))] = w as f64;
            rem[j] -= w;
        }
    }
    let objective = total_cost(instance, &weights);
    Ok(OfflineSolution { weights, objective })
}
