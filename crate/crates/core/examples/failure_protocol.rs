//! Edge failures: the online state loses the edge's weight and re-places it;
//! the offline optimum is reported under both failure protocols.

use edge_alloc::model::{EdgeId, FailureEvent, ProblemInstance, ServiceTrace};
use edge_alloc::policy::PolicyConfig;
use edge_alloc::sim;
use edge_alloc::solver::{opt_prefix_series, solve_staged, OptProtocol};

fn main() {
    let instance = ProblemInstance::new(2, 3, vec![1.0, 2.0, 50.0, 1.0, 3.0, 100.0], vec![10.0, 10.0, 100.0]).unwrap();
    let failure = FailureEvent {
        after_demand: 2,
        edge: EdgeId::new(0, 1),
    };
    let trace = ServiceTrace::in_consumer_order(&instance, &[10.0, 10.0], vec![failure]).unwrap();

    let run = sim::run(&instance, &trace, &PolicyConfig::greedy()).unwrap();
    for r in &run.records {
        let tag = if r.synthetic { " (re-demand)" } else { "" };
        println!(
            "step {} consumer {}{tag}: {} units, greedy {} opt {}",
            r.step,
            r.consumer + 1,
            r.demand,
            r.policy_cost,
            r.opt_cost
        );
    }

    for protocol in [OptProtocol::Hindsight, OptProtocol::Staged] {
        let series = opt_prefix_series(&instance, &trace, protocol);
        let costs: Vec<f64> = series.points.iter().map(|p| p.cost).collect();
        println!("{protocol:?} optimum series {costs:?}");
    }

    let staged = solve_staged(&instance, &trace).unwrap();
    for s in &staged.stages {
        println!(
            "stage after demand {}: {} lost on {}, resolved to {}",
            s.after_demand, s.lost, s.failed, s.resolved.objective
        );
    }
}
