//! Builds both spanner variants for a few sector counts and checks the
//! stretch bound on every connected pair.

use cdc_route::network::{random_topology, NodeId, RangeMode, TopologyConfig, WeightMode};
use cdc_route::spanner::{build_spanner, stretch_factor, verify_spanner, SpannerConfig, SpannerVariant};

fn main() {
    let cfg = TopologyConfig::new(60, RangeMode::FixedRange(25.0), 3, 2, 21)
        .weight_mode(WeightMode::Euclidean)
        .region_side(40.0);
    let net = random_topology(&cfg).expect("valid config");
    let pairs: Vec<(NodeId, NodeId)> = (0..net.len())
        .flat_map(|s| (s + 1..net.len()).map(move |d| (s, d)))
        .collect();
    println!("network: {} nodes, {} links", net.len(), net.links().len());
    for k in [7, 9, 12] {
        for variant in [SpannerVariant::PerType, SpannerVariant::PerChannelPair] {
            let sp = build_spanner(&net, SpannerConfig::new(k, variant).unwrap()).unwrap();
            let report = verify_spanner(&net, &sp, &pairs);
            println!(
                "k {k:>2} {variant:<9} t {:>9.4} links {:>4} (bound {:>5})  {report}",
                stretch_factor(k).unwrap(),
                sp.len(),
                sp.size_bound()
            );
        }
    }
}
