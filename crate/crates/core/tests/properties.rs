use proptest::prelude::*;

use cdc_route::dist::{run_distributed, DeliveryPolicy, SchedulerConfig};
use cdc_route::format::{parse_network, serialize_network};
use cdc_route::network::{random_topology, RangeMode, TopologyConfig, WeightMode};
use cdc_route::oracle::{brute_force_cdc_path, random_instance, InstanceParams};
use cdc_route::spanner::{build_spanner, SpannerConfig, SpannerVariant};
use cdc_route::{shortest_cdc, SearchOptions};

fn topology() -> impl Strategy<Value = TopologyConfig> {
    (2usize..40, 1u8..8, any::<u64>(), any::<bool>(), any::<bool>()).prop_flat_map(
        |(n, channels, seed, fixed, euclid)| {
            (1..=channels).prop_map(move |per| {
                let mode = if fixed { RangeMode::FixedRange(12.0) } else { RangeMode::ConstantDensity };
                let weights = if euclid { WeightMode::Euclidean } else { WeightMode::Unit };
                TopologyConfig::new(n, mode, channels, per, seed)
                    .weight_mode(weights)
                    .region_side(50.0)
            })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips(cfg in topology()) {
        let net = random_topology(&cfg).unwrap();
        let text = serialize_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(serialize_network(&back), text);
        prop_assert_eq!(back.links(), net.links());
    }

    #[test]
    fn search_matches_enumeration(seed in any::<u64>(), euclid in any::<bool>()) {
        let mode = if euclid { WeightMode::Euclidean } else { WeightMode::Unit };
        let (net, s, d) = random_instance(&InstanceParams::path_sized().weight_mode(mode), seed);
        let out = shortest_cdc(&net, s, d, SearchOptions::default()).unwrap();
        prop_assert_eq!(out.weight(), brute_force_cdc_path(&net, s, d).unwrap());
        if let Some(p) = &out.path {
            prop_assert!(p.validate(&net).is_ok());
            prop_assert!(p.connects(s, d));
            prop_assert!(p.is_node_simple());
        }
    }

    #[test]
    fn reduced_expansion_keeps_the_optimum(seed in any::<u64>()) {
        let (net, s, d) = random_instance(&InstanceParams::path_sized(), seed);
        let full = shortest_cdc(&net, s, d, SearchOptions::default()).unwrap();
        let reduced = shortest_cdc(&net, s, d, SearchOptions { reduced: true, verify_certificate: true }).unwrap();
        prop_assert_eq!(full.weight(), reduced.weight());
        prop_assert_eq!(reduced.max_violation, Some(0));
    }

    #[test]
    fn protocol_agrees_under_random_delivery(cfg in topology(), sched in any::<u64>()) {
        let net = random_topology(&cfg).unwrap();
        let (s, d) = (0, net.len() - 1);
        let central = shortest_cdc(&net, s, d, SearchOptions::default()).unwrap();
        let run = run_distributed(&net, s, d, false, SchedulerConfig::new(sched, DeliveryPolicy::RandomPermute)).unwrap();
        prop_assert_eq!(&run.trace, &central.trace);
        prop_assert_eq!(run.path.map(|p| p.total_weight), central.weight());
        let n_exp = run.expanded_size as u64;
        prop_assert!(run.log.total <= 8 * n_exp * n_exp);
    }

    #[test]
    fn spanner_is_a_bounded_subgraph(cfg in topology(), k in 7usize..14, per_pair in any::<bool>()) {
        let net = random_topology(&cfg).unwrap();
        let variant = if per_pair { SpannerVariant::PerChannelPair } else { SpannerVariant::PerType };
        let sp = build_spanner(&net, SpannerConfig::new(k, variant).unwrap()).unwrap();
        prop_assert!(sp.len() <= sp.size_bound());
        for l in sp.network().links() {
            prop_assert!(net.link_between(l.a, l.b).is_some());
        }
    }
}
