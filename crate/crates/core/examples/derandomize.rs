//! Best-of-m randomized runs: more runs never make the best cost worse.

use edge_alloc::policy::{derandomized_run, PolicyConfig};
use edge_alloc::workload::{generate, GenSpec};

fn main() {
    let (instance, trace) = generate(&GenSpec {
        num_consumers: 10,
        num_producers: 5,
        seed: 3,
        ..GenSpec::default()
    })
    .unwrap();

    for runs in [1, 2, 4, 8, 16] {
        let out = derandomized_run(&instance, &trace, &PolicyConfig::derandomized(3.0, 100, runs)).unwrap();
        println!("runs {runs:>2}: best {} from run {}", out.best_cost, out.best_run);
    }
}
