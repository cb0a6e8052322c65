//! Pairwise-independent hashing and the hash-driven workload generator.

use edge_alloc::rng::seeded;
use edge_alloc::workload::{generate, pairwise_hash, write_instance, DemandOrder, GenSpec, HashParams};

fn main() {
    let params = HashParams::random(&mut seeded(5), 10).unwrap();
    let buckets: Vec<u64> = (0..20).map(|x| pairwise_hash(&params, x)).collect();
    println!("a={} b={} buckets {buckets:?}", params.a(), params.b());

    let spec = GenSpec {
        num_consumers: 3,
        num_producers: 2,
        demand_order: DemandOrder::HashStream,
        failure_count: 1,
        seed: 42,
        ..GenSpec::default()
    };
    let (instance, trace) = generate(&spec).unwrap();
    print!("{}", write_instance(&instance, &trace).unwrap());
}
