//! Centralized CDC routing on a five-node fixture.
//!
//! Run with `cargo run --example route_relay`.

use cdc_route::format::parse_network;
use cdc_route::{shortest_cdc, SearchOptions};

fn main() {
    let net = parse_network(include_str!("data/relay.net")).expect("fixture parses");
    let out = shortest_cdc(&net, 0, 4, SearchOptions { reduced: false, verify_certificate: true })
        .expect("0 and 4 are distinct nodes");
    let path = out.path.as_ref().expect("the fixture is routable");
    println!("path     {path}");
    println!("weight   {}", path.total_weight);
    println!("expanded {} sub-nodes, {} blossoms", out.expanded_size, out.blossoms);
    println!("certificate violation {}", out.max_violation.unwrap_or(0));
    print!("{}", out.trace);
}
