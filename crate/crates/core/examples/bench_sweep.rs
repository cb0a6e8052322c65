//! Consumer-count sweep across policies, as aggregate CSV.

use edge_alloc::harness::{cmd_bench, Algo, RunMatrixSpec};
use edge_alloc::policy::PolicyConfig;
use edge_alloc::solver::OptProtocol;
use edge_alloc::workload::GenSpec;

fn main() {
    let spec = RunMatrixSpec {
        consumers: vec![2, 4, 8, 16],
        algos: vec![
            Algo::Opt(OptProtocol::Hindsight),
            Algo::Policy(PolicyConfig::greedy()),
            Algo::Policy(PolicyConfig::randomized(4.0, 0)),
            Algo::Policy(PolicyConfig::proportional()),
        ],
        seeds: (0..20).collect(),
        template: GenSpec {
            num_producers: 4,
            ..GenSpec::default()
        },
    };
    print!("{}", cmd_bench(&spec).unwrap());
}
