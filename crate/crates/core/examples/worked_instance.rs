//! Parse the worked two-by-two instance, solve it offline and replay greedy.

use edge_alloc::policy::PolicyConfig;
use edge_alloc::sim;
use edge_alloc::solver::{brute_force_oracle, solve, PinSet};
use edge_alloc::workload::parse_instance;

const LISTING: &str = "\
no of consumers: 2
no of producers: 2
edge distances
47
17
11
2
producer capacities
26
839
consumer demands
97 <- demand 1
78 <- demand 2
Number of edge failures: 1
1
3
";

fn main() {
    let (instance, trace) = parse_instance(LISTING).expect("listing parses");
    let demands = trace.cumulative_demands(instance.num_consumers(), trace.len());
    let alive = vec![true; instance.num_edges()];

    let opt = solve(&instance, &demands, &alive, &PinSet::new()).unwrap();
    let oracle = brute_force_oracle(&instance, &demands, &alive).unwrap();
    println!("offline optimum {} with weights {:?}", opt.objective, opt.weights);
    println!("brute force     {} with weights {:?}", oracle.objective, oracle.weights);

    let run = sim::run(&instance, &trace, &PolicyConfig::greedy()).unwrap();
    for r in &run.records {
        println!(
            "step {}: greedy {} opt {} ratio {}",
            r.step, r.policy_cost, r.opt_cost, r.ratio
        );
    }
}
