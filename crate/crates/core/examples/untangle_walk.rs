//! Replaces an off-spanner path link by link and untangles the resulting
//! walk, printing each stage.

use cdc_route::network::{Node, WeightMode};
use cdc_route::spanner::{overlap_count, untangle};
use cdc_route::{CdcPath, Network};

fn main() {
    let nodes = vec![
        Node::new(0, 0.0, 0.0, [0]),
        Node::new(1, 1.0, 0.0, [0, 1]),
        Node::new(2, 2.0, 0.0, [1, 2]),
        Node::new(3, 1.6, 0.8, [0, 1, 2]),
        Node::new(4, 3.0, 0.0, [1, 2]),
        Node::new(5, 2.4, 0.9, [0, 1, 2]),
    ];
    let links = [(0, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 5), (2, 5)];
    let net = Network::with_links(3, nodes, &links, WeightMode::Euclidean).unwrap();

    // enters 2 on channel 1 and leaves it on channel 1 after a loop
    let walk = CdcPath::from_walk(&net, &[0, 1, 2, 3, 5, 2, 4], &[0, 1, 2, 0, 2, 1]).unwrap();
    println!("walk      {walk}  weight {} overlaps {}", walk.total_weight, overlap_count(&walk));
    let out = untangle(&net, &walk).expect("repairable");
    println!("untangled {}  weight {}", out.path, out.path.total_weight);
    println!("repairs   {:?}", out.repairs);
    println!("overlaps  {:?}", out.overlap_history);
}
