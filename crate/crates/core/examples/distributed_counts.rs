//! Runs the message-passing search and prints per-kind message counts next
//! to the centralized result.

use cdc_route::dist::{count_report, run_distributed, DeliveryPolicy, MessageKind, SchedulerConfig};
use cdc_route::experiment::pick_pair;
use cdc_route::network::{random_topology, RangeMode, TopologyConfig};
use cdc_route::{shortest_cdc, SearchOptions};

fn main() {
    let cfg = TopologyConfig::new(80, RangeMode::ConstantDensity, 10, 4, 5).region_side(50.0);
    let net = random_topology(&cfg).expect("valid config");
    let (s, d) = pick_pair(&net, 5);
    let central = shortest_cdc(&net, s, d, SearchOptions::default()).unwrap();
    for policy in [DeliveryPolicy::Fifo, DeliveryPolicy::RandomPermute] {
        let run = run_distributed(&net, s, d, false, SchedulerConfig::new(3, policy)).unwrap();
        let row = count_report(&net, &run);
        println!("{policy}: {s} -> {d}, weight {:?}", run.path.as_ref().map(|p| p.total_weight));
        println!(
            "  n {} n_exp {} messages {} blossoms {} ratio {:.5} rounds {}",
            row.n, row.n_exp, row.messages, row.blossom_count, row.ratio, run.log.rounds()
        );
        for kind in MessageKind::ALL {
            println!("  {:<16}{}", kind.as_str(), run.log.count(kind));
        }
        assert_eq!(run.trace, central.trace);
    }
    println!("traces identical to the centralized search");
}
