//! Exhaustive ground-truth solvers for small instances.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{Channel, ChannelSet};
use crate::error::OracleError;
use crate::search::run_search;
use crate::dist::{run_on_expansion, DeliveryPolicy, SchedulerConfig};
use crate::expand::{expand, ExpandedGraph};
use crate::network::{Network, Node, NodeId, Point, Weight, WeightMode};

/// Largest expansion the matching enumerator accepts.
pub const MATCHING_BUDGET: usize = 34;
/// Largest network the path enumerator accepts.
pub const PATH_BUDGET: usize = 12;

/// Minimum total weight over all perfect matchings of `graph`, or `None` when
/// it has no perfect matching.
pub fn brute_force_matching(graph: &ExpandedGraph) -> Result<Option<Weight>, OracleError> {
    let n = graph.len();
    if n > MATCHING_BUDGET {
        return Err(OracleError::BudgetExceeded {
            size: n,
            limit: MATCHING_BUDGET,
        });
    }
    let adj: Vec<Vec<(usize, Weight)>> = (0..n)
        .map(|u| {
            graph
                .neighbors(u)
                .iter()
                .map(|&(v, e)| (v, graph.edge(e).weight))
                .collect()
        })
        .collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = None;
    match_rest(&adj, full, 0, 0, &mut best);
    Ok(best)
}

fn match_rest(adj: &[Vec<(usize, Weight)>], full: u64, covered: u64, acc: Weight, best: &mut Option<Weight>) {
    if covered == full {
        if best.is_none_or(|b| acc < b) {
            *best = Some(acc);
        }
        return;
    }
    let u = (!covered).trailing_zeros() as usize;
    for &(v, w) in &adj[u] {
        if covered & (1 << v) != 0 {
            continue;
        }
        let next = acc + w;
        if best.is_some_and(|b| next >= b) {
            continue;
        }
        match_rest(adj, full, covered | (1 << u) | (1 << v), next, best);
    }
}

/// Minimum weight over all node-simple `s`→`d` paths with a channel per link
/// such that consecutive channels differ. `s == d` gives 0.
pub fn brute_force_cdc_path(network: &Network, s: NodeId, d: NodeId) -> Result<Option<Weight>, OracleError> {
    if network.len() > PATH_BUDGET {
        return Err(OracleError::BudgetExceeded {
            size: network.len(),
            limit: PATH_BUDGET,
        });
    }
    if s == d {
        return Ok(Some(0));
    }
    let mut best = None;
    let mut visited = vec![false; network.len()];
    visited[s] = true;
    walk(network, s, d, None, 0, &mut visited, &mut best);
    Ok(best)
}

fn walk(
    network: &Network,
    at: NodeId,
    d: NodeId,
    last: Option<Channel>,
    acc: Weight,
    visited: &mut [bool],
    best: &mut Option<Weight>,
) {
    for &(next, link_id) in network.neighbors(at) {
        if visited[next] {
            continue;
        }
        let link = network.link(link_id);
        let cost = acc + link.weight;
        if best.is_some_and(|b| cost >= b) {
            continue;
        }
        for c in link.channels {
            if Some(c) == last {
                continue;
            }
            if next == d {
                *best = Some(cost);
                break;
            }
            visited[next] = true;
            walk(network, next, d, Some(c), cost, visited, best);
            visited[next] = false;
            if best.is_some_and(|b| cost >= b) {
                break;
            }
        }
    }
}

/// Parameters for small random cross-check instances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceParams {
    pub max_nodes: usize,
    pub channel_count: u8,
    pub max_channels_per_node: u8,
    pub region_side: f64,
    pub range: f64,
    pub weight_mode: WeightMode,
}

impl InstanceParams {
    /// Instances whose full expansion stays within [`MATCHING_BUDGET`]:
    /// at most 6 nodes with at most 2 channels each.
    pub fn matching_sized() -> Self {
        InstanceParams {
            max_nodes: 6,
            channel_count: 2,
            max_channels_per_node: 2,
            region_side: 10.0,
            range: 5.0,
            weight_mode: WeightMode::Unit,
        }
    }

    /// Instances within [`PATH_BUDGET`] for the path enumerator.
    pub fn path_sized() -> Self {
        InstanceParams {
            max_nodes: 10,
            channel_count: 3,
            max_channels_per_node: 3,
            region_side: 10.0,
            range: 4.0,
            weight_mode: WeightMode::Unit,
        }
    }

    pub fn weight_mode(mut self, mode: WeightMode) -> Self {
        self.weight_mode = mode;
        self
    }
}

/// A random network of 2..=`max_nodes` nodes, each with between 1 and
/// `max_channels_per_node` channels, and a random `(s, d)` pair with
/// `s != d`, biased toward pairs that are not directly linked. Deterministic
/// per seed.
pub fn random_instance(params: &InstanceParams, seed: u64) -> (Network, NodeId, NodeId) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=params.max_nodes);
    let mut nodes = Vec::with_capacity(n);
    while nodes.len() < n {
        let pos = Point::new(
            rng.gen_range(0.0..params.region_side),
            rng.gen_range(0.0..params.region_side),
        );
        if nodes.iter().any(|m: &Node| m.pos == pos) {
            continue;
        }
        let k = rng.gen_range(1..=params.max_channels_per_node) as usize;
        let channels: ChannelSet = index::sample(&mut rng, params.channel_count as usize, k)
            .into_iter()
            .map(|c| c as Channel)
            .collect();
        nodes.push(Node { id: nodes.len(), pos, channels });
    }
    let net = Network::with_range(params.channel_count, nodes, params.range, params.weight_mode)
        .expect("generated nodes are valid");
    let s = rng.gen_range(0..n);
    // Prefer a destination that is not a direct neighbor of the source.
    let far: Vec<NodeId> = (0..n)
        .filter(|&v| v != s && net.link_between(s, v).is_none())
        .collect();
    let d = if !far.is_empty() && rng.gen_bool(0.75) {
        far[rng.gen_range(0..far.len())]
    } else {
        let d = rng.gen_range(0..n - 1);
        if d >= s {
            d + 1
        } else {
            d
        }
    };
    (net, s, d)
}

/// Weights reported by every solver for one `(s, d)`. The brute-force
/// entries are `None` when the instance exceeds their budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub s: NodeId,
    pub d: NodeId,
    pub central: Option<Weight>,
    pub distributed: Option<Weight>,
    pub matching: Option<Option<Weight>>,
    pub path: Option<Option<Weight>>,
    pub max_violation: i128,
    pub traces_match: bool,
}

impl PairVerdict {
    pub fn agrees(&self) -> bool {
        self.central == self.distributed
            && self.matching.is_none_or(|w| w == self.central)
            && self.path.is_none_or(|w| w == self.central)
            && self.max_violation == 0
            && self.traces_match
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheck {
    pub verdicts: Vec<PairVerdict>,
}

impl CrossCheck {
    pub fn disagreements(&self) -> impl Iterator<Item = &PairVerdict> {
        self.verdicts.iter().filter(|v| !v.agrees())
    }

    pub fn holds(&self) -> bool {
        self.disagreements().next().is_none()
    }
}

/// Runs the centralized search (with its certificate), the distributed
/// protocol, and whichever brute-force solvers fit their budgets, on every
/// unordered pair of distinct nodes.
pub fn cross_check(network: &Network) -> CrossCheck {
    let mut out = CrossCheck::default();
    for s in 0..network.len() {
        for d in s + 1..network.len() {
            out.verdicts.push(check_pair(network, s, d));
        }
    }
    out
}

pub fn check_pair(network: &Network, s: NodeId, d: NodeId) -> PairVerdict {
    let (graph, matching) = expand(network, s, d, false).expect("distinct nodes of the network");
    let central = run_search(network, &graph, &matching, true);
    let run = run_on_expansion(network, &graph, &matching, SchedulerConfig::new(0, DeliveryPolicy::Fifo));
    PairVerdict {
        s,
        d,
        central: central.weight(),
        distributed: run.path.as_ref().map(|p| p.total_weight),
        matching: brute_force_matching(&graph).ok(),
        path: brute_force_cdc_path(network, s, d).ok(),
        max_violation: central.max_violation.unwrap_or(0),
        traces_match: central.trace == run.trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Node, WeightMode};

    fn chain(c1: &[Channel], c2: &[Channel], mid: &[Channel]) -> Network {
        let nodes = vec![
            Node::new(0, 0.0, 0.0, c1.iter().copied()),
            Node::new(1, 1.0, 0.0, mid.iter().copied()),
            Node::new(2, 2.0, 0.0, c2.iter().copied()),
        ];
        Network::with_links(4, nodes, &[(0, 1), (1, 2)], WeightMode::Unit).unwrap()
    }

    #[test]
    fn two_vertex_matching() {
        let nodes = vec![Node::new(0, 0.0, 0.0, [0]), Node::new(1, 3.0, 4.0, [0])];
        let net = Network::with_links(1, nodes, &[(0, 1)], WeightMode::Euclidean).unwrap();
        let (g, _) = expand(&net, 0, 1, false).unwrap();
        assert_eq!(brute_force_matching(&g).unwrap(), Some(5_000_000));
    }

    #[test]
    fn blocked_chain() {
        let net = chain(&[1], &[1], &[1]);
        assert_eq!(brute_force_cdc_path(&net, 0, 2).unwrap(), None);
        let (g, _) = expand(&net, 0, 2, false).unwrap();
        assert_eq!(brute_force_matching(&g).unwrap(), None);
    }

    #[test]
    fn open_chain() {
        let net = chain(&[1], &[2], &[1, 2]);
        assert_eq!(brute_force_cdc_path(&net, 0, 2).unwrap(), Some(2));
        let (g, _) = expand(&net, 0, 2, false).unwrap();
        assert_eq!(brute_force_matching(&g).unwrap(), Some(2));
    }

    #[test]
    fn lone_gadget_matches_internally_at_zero() {
        // s and d directly linked plus an isolated third node: the optimum
        // matching pairs the gadget internally.
        let nodes = vec![
            Node::new(0, 0.0, 0.0, [0]),
            Node::new(1, 1.0, 0.0, [0]),
            Node::new(2, 9.0, 9.0, [0, 1]),
        ];
        let net = Network::with_links(2, nodes, &[(0, 1)], WeightMode::Unit).unwrap();
        let (g, _) = expand(&net, 0, 1, false).unwrap();
        assert_eq!(brute_force_matching(&g).unwrap(), Some(1));
    }

    #[test]
    fn budgets() {
        let nodes: Vec<_> = (0..13).map(|i| Node::new(i, i as f64, 0.0, [0])).collect();
        let net = Network::with_range(1, nodes, 1.0, WeightMode::Unit).unwrap();
        assert!(brute_force_cdc_path(&net, 0, 12).is_err());
        let (g, _) = expand(&net, 0, 12, false).unwrap();
        assert!(brute_force_matching(&g).is_err());
    }

    #[test]
    fn cross_check_small_instances() {
        for seed in 0..10 {
            let (net, _, _) = random_instance(&InstanceParams::path_sized(), seed);
            let check = cross_check(&net);
            assert_eq!(check.verdicts.len(), net.len() * (net.len() - 1) / 2);
            assert!(check.holds(), "seed {seed}: {:?}", check.disagreements().next());
        }
    }
}
