//! Gadget sizes and the initial matching of an expansion.

use cdc_route::expand::{expand, initial_matching_is_sound};
use cdc_route::network::{random_topology, RangeMode, TopologyConfig};

fn main() {
    let cfg = TopologyConfig::new(25, RangeMode::ConstantDensity, 8, 5, 11).region_side(50.0);
    let net = random_topology(&cfg).expect("valid config");
    for reduced in [false, true] {
        let (graph, matching) = expand(&net, 0, 24, reduced).expect("distinct endpoints");
        println!(
            "reduced={reduced}: {} sub-nodes, {} edges, {} matched pairs, sound={}",
            graph.len(),
            graph.edges().len(),
            matching.len(),
            initial_matching_is_sound(&graph, &matching)
        );
    }
    let (graph, _) = expand(&net, 0, 24, false).unwrap();
    for node in net.nodes().iter().take(5) {
        println!(
            "node {:>2} channels {:?} gadget {}",
            node.id,
            node.channels,
            graph.gadget_size(node.id)
        );
    }
}
