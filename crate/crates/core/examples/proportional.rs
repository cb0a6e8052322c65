//! Inverse-distance proportional splitting next to greedy.

use edge_alloc::model::{ProblemInstance, ServiceTrace};
use edge_alloc::policy::{inverse_distance_bound, PolicyConfig};
use edge_alloc::sim;

fn main() {
    let instance = ProblemInstance::new(
        3,
        3,
        vec![1.0, 2.0, 4.0, 2.0, 1.0, 4.0, 4.0, 2.0, 1.0],
        vec![30.0, 30.0, 30.0],
    )
    .unwrap();
    let trace = ServiceTrace::in_consumer_order(&instance, &[20.0, 20.0, 20.0], vec![]).unwrap();
    println!("inverse-distance bound {:.4}", inverse_distance_bound(&instance));

    for config in [PolicyConfig::greedy(), PolicyConfig::proportional()] {
        let run = sim::run(&instance, &trace, &config).unwrap();
        println!(
            "{:>12}: cost {:.3}, weights {:?}",
            config.kind.name(),
            run.final_cost,
            run.final_state.weights()
        );
    }
}
