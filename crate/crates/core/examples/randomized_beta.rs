//! Sweep the sub-optimality penalty of the randomized policy on one instance.

use edge_alloc::policy::PolicyConfig;
use edge_alloc::sim;
use edge_alloc::workload::{generate, GenSpec};

fn main() {
    let spec = GenSpec {
        num_consumers: 12,
        num_producers: 6,
        seed: 11,
        ..GenSpec::default()
    };
    let (instance, trace) = generate(&spec).unwrap();
    let greedy = sim::run(&instance, &trace, &PolicyConfig::greedy()).unwrap();
    println!("greedy {} (opt {})", greedy.final_cost, greedy.opt_final);

    for beta in [1.0, 1.5, 2.0, 4.0, 16.0] {
        let costs: Vec<f64> = (0..30)
            .map(|seed| {
                sim::run(&instance, &trace, &PolicyConfig::randomized(beta, seed))
                    .unwrap()
                    .final_cost
            })
            .collect();
        let mean = costs.iter().sum::<f64>() / costs.len() as f64;
        let worst = costs.iter().cloned().fold(f64::MIN, f64::max);
        println!("beta {beta:>4}: mean {mean:.1} worst {worst}");
    }
}
