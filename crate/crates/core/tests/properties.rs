use edge_alloc::model::{validate, EdgeId, FailureEvent, ProblemInstance, ServiceTrace};
use edge_alloc::policy::{PolicyConfig, PolicyKind};
use edge_alloc::sim::run_observed;
use edge_alloc::solver::{opt_prefix_series, OptProtocol};
use edge_alloc::workload::{generate, parse_instance, write_instance, GenSpec};
use proptest::prelude::*;

fn policy(kind: u8, beta: f64, seed: u64) -> PolicyConfig {
    match kind % 4 {
        0 => PolicyConfig::greedy(),
        1 => PolicyConfig::randomized(beta, seed),
        2 => PolicyConfig::derandomized(beta, seed, 3),
        _ => PolicyConfig::proportional(),
    }
}

fn instance_and_trace() -> impl Strategy<Value = (ProblemInstance, ServiceTrace)> {
    (1usize..5, 1usize..4).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(1u32..30, n * m),
            proptest::collection::vec(0u32..40, m),
            proptest::collection::vec(0u32..15, n),
            proptest::collection::vec((1usize..=n, 0..n * m), 0..3),
        )
            .prop_map(move |(d, cap, dem, fails)| {
                let inst = ProblemInstance::new(
                    n,
                    m,
                    d.into_iter().map(f64::from).collect(),
                    cap.into_iter().map(f64::from).collect(),
                )
                .unwrap();
                let failures = fails
                    .into_iter()
                    .map(|(after_demand, idx)| FailureEvent {
                        after_demand,
                        edge: inst.edge_at(idx),
                    })
                    .collect();
                let amounts: Vec<f64> = dem.into_iter().map(f64::from).collect();
                let trace = ServiceTrace::in_consumer_order(&inst, &amounts, failures).unwrap();
                (inst, trace)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The hindsight optimum never exceeds the online cost, for any policy.
    #[test]
    fn hindsight_opt_lower_bounds_every_policy(
        (inst, trace) in instance_and_trace(),
        kind in 0u8..4,
        beta in 1.0f64..5.0,
        seed in any::<u64>(),
    ) {
        let config = policy(kind, beta, seed);
        let res = edge_alloc::sim::run(&inst, &trace, &config).unwrap();
        for r in &res.records {
            prop_assert!(r.opt_cost <= r.policy_cost + 1e-9 * r.policy_cost.max(1.0));
            prop_assert!(r.ratio >= 1.0 - 1e-9);
        }
    }

    /// Every observed state is feasible and accounts for every delivered unit.
    #[test]
    fn every_step_is_feasible(
        (inst, trace) in instance_and_trace(),
        kind in prop_oneof![Just(0u8), Just(1), Just(3)],
        seed in any::<u64>(),
    ) {
        let config = policy(kind, 2.0, seed);
        let mut bad = None;
        let res = run_observed(&inst, &trace, &config, |v| {
            if bad.is_none() {
                bad = validate(&inst, v.state, v.delivered).err();
            }
        })
        .unwrap();
        prop_assert_eq!(bad, None);
        if res.halt.is_none() {
            prop_assert!(validate(&inst, &res.final_state, &trace.cumulative_demands(inst.num_consumers(), trace.len())).is_ok());
        }
    }

    /// Engine optimum matches the stand-alone prefix series where both are defined.
    #[test]
    fn engine_opt_matches_prefix_series((inst, trace) in instance_and_trace()) {
        let res = edge_alloc::sim::run(&inst, &trace, &PolicyConfig::greedy()).unwrap();
        let series = opt_prefix_series(&inst, &trace, OptProtocol::Hindsight);
        let per_demand = series.per_demand();
        for r in res.records.iter().filter(|r| !r.synthetic) {
            let (_, cost) = per_demand[r.step - 1];
            prop_assert_eq!(r.opt_cost, cost);
        }
    }

    /// Without failures greedy cost never decreases step to step.
    #[test]
    fn failure_free_costs_are_monotone(n in 1usize..12, m in 1usize..6, seed in any::<u64>(), kind in 0u8..4) {
        let (inst, trace) = generate(&GenSpec { num_consumers: n, num_producers: m, seed, ..GenSpec::default() }).unwrap();
        let res = edge_alloc::sim::run(&inst, &trace, &policy(kind, 3.0, seed)).unwrap();
        prop_assert!(res.halt.is_none());
        for w in res.records.windows(2) {
            prop_assert!(w[1].policy_cost >= w[0].policy_cost);
            prop_assert!(w[1].opt_cost >= w[0].opt_cost - 1e-9 * w[1].opt_cost.max(1.0));
        }
    }

    /// Generated files survive a write/parse round trip unchanged.
    #[test]
    fn generated_files_round_trip(n in 1usize..8, m in 1usize..5, f in 0usize..4, seed in any::<u64>()) {
        let spec = GenSpec { num_consumers: n, num_producers: m, failure_count: f.min(n * m), seed, ..GenSpec::default() };
        let (inst, trace) = generate(&spec).unwrap();
        let text = write_instance(&inst, &trace).unwrap();
        let (inst2, trace2) = parse_instance(&text).unwrap();
        prop_assert_eq!(&inst2, &inst);
        prop_assert_eq!(&trace2, &trace);
        prop_assert_eq!(write_instance(&inst2, &trace2).unwrap(), text);
    }
}

#[test]
fn policy_names_round_trip() {
    for kind in [
        PolicyKind::Greedy,
        PolicyKind::Randomized,
        PolicyKind::Derandomized,
        PolicyKind::Proportional,
    ] {
        assert_eq!(PolicyKind::from_name(kind.name()), Some(kind));
    }
    assert_eq!(EdgeId::new(1, 0).to_string(), "(c2, p1)");
}
