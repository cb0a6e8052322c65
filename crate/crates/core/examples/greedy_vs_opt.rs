//! Where greedy pays more than the offline optimum, and where it does not.

use edge_alloc::model::{ProblemInstance, ServiceTrace};
use edge_alloc::policy::PolicyConfig;
use edge_alloc::sim;

fn report(label: &str, instance: &ProblemInstance, demands: &[f64]) {
    let trace = ServiceTrace::in_consumer_order(instance, demands, vec![]).unwrap();
    let run = sim::run(instance, &trace, &PolicyConfig::greedy()).unwrap();
    println!(
        "{label}: greedy {} opt {} ratio {:.4}",
        run.final_cost, run.opt_final, run.max_ratio
    );
}

fn main() {
    // the first consumer takes the producer the second one needs badly
    let contended = ProblemInstance::new(2, 2, vec![1.0, 2.0, 1.0, 50.0], vec![1.0, 10.0]).unwrap();
    report("contended", &contended, &[1.0, 1.0]);

    // two producers at distance x and x + 5 from everyone, the near one
    // exactly big enough for the first demand
    for x in [1.0, 10.0, 100.0] {
        let family = ProblemInstance::new(2, 2, vec![x, x + 5.0, x, x + 5.0], vec![5.0, 100.0]).unwrap();
        report(&format!("equal columns x={x}"), &family, &[5.0, 20.0]);
    }
}
