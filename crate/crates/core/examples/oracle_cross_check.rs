//! Compares the centralized search, the protocol and both brute-force
//! solvers on small random instances.

use cdc_route::oracle::{check_pair, random_instance, InstanceParams};

fn main() {
    let mut agree = 0;
    let mut routable = 0;
    for (params, label) in [
        (InstanceParams::matching_sized(), "matching-sized"),
        (InstanceParams::path_sized(), "path-sized"),
    ] {
        for seed in 0..200 {
            let (net, s, d) = random_instance(&params, seed);
            let v = check_pair(&net, s, d);
            if !v.agrees() {
                println!("{label} seed {seed}: {v:?}");
                continue;
            }
            agree += 1;
            routable += v.central.is_some() as usize;
        }
    }
    println!("{agree}/400 instances agree, {routable} routable");
}
