//! Geometric multi-channel network model.
//!
//! Nodes sit in the plane and carry a set of available channels. Two nodes are
//! linked when they are within transmission range and share at least one
//! channel; the link offers exactly the shared channels.

use std::collections::HashMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{Channel, ChannelSet, MAX_CHANNELS};
use crate::error::NetError;

pub type NodeId = usize;
pub type LinkId = usize;

/// Link weight in fixed-point micro-units (or hops in unit mode).
pub type Weight = u64;

/// Scale applied to Euclidean lengths before rounding to an integer weight.
pub const MICRO_UNITS: f64 = 1_000_000.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub pos: Point,
    pub channels: ChannelSet,
}

impl Node {
    pub fn new(id: NodeId, x: f64, y: f64, channels: impl IntoIterator<Item = Channel>) -> Self {
        Node {
            id,
            pos: Point::new(x, y),
            channels: channels.into_iter().collect(),
        }
    }
}

/// Undirected link; `a < b` always.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub channels: ChannelSet,
    pub weight: Weight,
}

impl Link {
    pub fn other(&self, end: NodeId) -> NodeId {
        if end == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, node: NodeId) -> bool {
        self.a == node || self.b == node
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightMode {
    /// Every link costs 1 (hop-count routing).
    Unit,
    /// Euclidean length in micro-units, `round(|u - v| * 1e6)`.
    Euclidean,
}

impl WeightMode {
    pub fn weight(self, a: Point, b: Point) -> Weight {
        match self {
            WeightMode::Unit => 1,
            WeightMode::Euclidean => (a.dist(b) * MICRO_UNITS).round() as Weight,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::Unit => "unit",
            WeightMode::Euclidean => "euclid",
        }
    }
}

/// The connectivity graph of a multi-channel wireless network.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    channel_count: u8,
    nodes: Vec<Node>,
    links: Vec<Link>,
    range: Option<f64>,
    weight_mode: WeightMode,
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
    link_index: HashMap<(NodeId, NodeId), LinkId>,
}

impl Network {
    /// Builds a unit-disk network: a link for every pair within `range` that
    /// shares a channel.
    pub fn with_range(
        channel_count: u8,
        nodes: Vec<Node>,
        range: f64,
        weight_mode: WeightMode,
    ) -> Result<Self, NetError> {
        if !(range > 0.0 && range.is_finite()) {
            return Err(NetError::InvalidRange(range));
        }
        let nodes = validate_nodes(channel_count, nodes)?;
        let r2 = range * range;
        let mut pairs = Vec::new();
        for (i, u) in nodes.iter().enumerate() {
            for v in &nodes[i + 1..] {
                if u.pos.dist2(v.pos) <= r2 {
                    pairs.push((u.id, v.id));
                }
            }
        }
        Ok(Self::assemble(channel_count, nodes, &pairs, Some(range), weight_mode, true))
    }

    /// Builds a network from an explicit link list. Channels of each link are
    /// the intersection of its endpoints' channel sets.
    pub fn with_links(
        channel_count: u8,
        nodes: Vec<Node>,
        pairs: &[(NodeId, NodeId)],
        weight_mode: WeightMode,
    ) -> Result<Self, NetError> {
        let nodes = validate_nodes(channel_count, nodes)?;
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in pairs {
            if a >= nodes.len() {
                return Err(NetError::UnknownNode(a));
            }
            if b >= nodes.len() {
                return Err(NetError::UnknownNode(b));
            }
            if a == b {
                return Err(NetError::SelfLink(a));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(NetError::DuplicateLink(a.min(b), a.max(b)));
            }
            if nodes[a].channels.intersection(nodes[b].channels).is_empty() {
                return Err(NetError::NoCommonChannel(a, b));
            }
        }
        Ok(Self::assemble(channel_count, nodes, pairs, None, weight_mode, false))
    }

    fn assemble(
        channel_count: u8,
        nodes: Vec<Node>,
        pairs: &[(NodeId, NodeId)],
        range: Option<f64>,
        weight_mode: WeightMode,
        skip_disjoint: bool,
    ) -> Self {
        let mut links = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let (a, b) = (a.min(b), a.max(b));
            let channels = nodes[a].channels.intersection(nodes[b].channels);
            if channels.is_empty() {
                debug_assert!(skip_disjoint);
                continue;
            }
            links.push(Link {
                a,
                b,
                channels,
                weight: weight_mode.weight(nodes[a].pos, nodes[b].pos),
            });
        }
        links.sort_by_key(|l| (l.a, l.b));
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut link_index = HashMap::with_capacity(links.len());
        for (id, l) in links.iter().enumerate() {
            adjacency[l.a].push((l.b, id));
            adjacency[l.b].push((l.a, id));
            link_index.insert((l.a, l.b), id);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Network {
            channel_count,
            nodes,
            links,
            range,
            weight_mode,
            adjacency,
            link_index,
        }
    }

    /// A copy of this network restricted to the given links, in explicit-link
    /// mode.
    pub fn subnetwork(&self, link_ids: impl IntoIterator<Item = LinkId>) -> Network {
        let pairs: Vec<_> = link_ids
            .into_iter()
            .map(|id| (self.links[id].a, self.links[id].b))
            .collect();
        Self::assemble(
            self.channel_count,
            self.nodes.clone(),
            &pairs,
            None,
            self.weight_mode,
            false,
        )
    }

    pub fn channel_count(&self) -> u8 {
        self.channel_count
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn range(&self) -> Option<f64> {
        self.range
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    /// `(neighbor, link)` pairs sorted by neighbor id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[node]
    }

    pub fn link_between(&self, u: NodeId, v: NodeId) -> Option<LinkId> {
        self.link_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node < self.nodes.len()
    }

    /// Whether `u` and `v` are connected ignoring channel constraints.
    pub fn connected(&self, u: NodeId, v: NodeId) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }
}

fn validate_nodes(channel_count: u8, mut nodes: Vec<Node>) -> Result<Vec<Node>, NetError> {
    if channel_count > MAX_CHANNELS {
        return Err(NetError::TooManyChannels(channel_count as usize));
    }
    let mut ids = vec![false; nodes.len()];
    for node in &nodes {
        if node.id >= nodes.len() {
            return Err(NetError::NonDenseIds(node.id));
        }
        if std::mem::replace(&mut ids[node.id], true) {
            return Err(NetError::DuplicateNodeId(node.id));
        }
        if node.channels.is_empty() {
            return Err(NetError::EmptyChannels(node.id));
        }
        if let Some(c) = node.channels.max() {
            if c >= channel_count {
                return Err(NetError::UnknownChannel { node: node.id, channel: c });
            }
        }
        if !(node.pos.x.is_finite() && node.pos.y.is_finite()) {
            return Err(NetError::BadCoordinate(node.id));
        }
    }
    nodes.sort_by_key(|n| n.id);
    let mut positions: Vec<(u64, u64, NodeId)> = nodes
        .iter()
        .map(|n| (n.pos.x.to_bits(), n.pos.y.to_bits(), n.id))
        .collect();
    positions.sort_unstable();
    for w in positions.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(NetError::DuplicatePosition(w[0].2, w[1].2));
        }
    }
    Ok(nodes)
}

/// How the transmission range is chosen for a random topology.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RangeMode {
    /// Range shrinks as `11 * sqrt(100 / n)` (scaled by `side / 100`) so the
    /// expected neighbor count stays fixed.
    ConstantDensity,
    FixedRange(f64),
}

impl RangeMode {
    pub fn range_for(self, n: usize, region_side: f64) -> f64 {
        match self {
            RangeMode::ConstantDensity => {
                11.0 * (100.0 / n as f64).sqrt() * (region_side / 100.0)
            }
            RangeMode::FixedRange(r) => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopologyConfig {
    pub n: usize,
    pub region_side: f64,
    pub mode: RangeMode,
    pub channel_count: u8,
    pub channels_per_node: u8,
    pub weight_mode: WeightMode,
    pub seed: u64,
}

impl TopologyConfig {
    pub fn new(n: usize, mode: RangeMode, channel_count: u8, channels_per_node: u8, seed: u64) -> Self {
        TopologyConfig {
            n,
            region_side: 100.0,
            mode,
            channel_count,
            channels_per_node,
            weight_mode: WeightMode::Unit,
            seed,
        }
    }

    pub fn weight_mode(mut self, mode: WeightMode) -> Self {
        self.weight_mode = mode;
        self
    }

    pub fn region_side(mut self, side: f64) -> Self {
        self.region_side = side;
        self
    }
}

/// Uniformly random nodes in a square region with uniformly random channel
/// subsets. Deterministic for a given config.
pub fn random_topology(cfg: &TopologyConfig) -> Result<Network, NetError> {
    if cfg.n < 2 {
        return Err(NetError::TooFewNodes(cfg.n));
    }
    if cfg.channel_count > MAX_CHANNELS {
        return Err(NetError::TooManyChannels(cfg.channel_count as usize));
    }
    if cfg.channels_per_node == 0 || cfg.channels_per_node > cfg.channel_count {
        return Err(NetError::BadChannelsPerNode {
            per_node: cfg.channels_per_node,
            total: cfg.channel_count,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // Positions first, so that changing only the channel parameters keeps
    // the geometry.
    let mut taken = std::collections::HashSet::new();
    let mut positions = Vec::with_capacity(cfg.n);
    while positions.len() < cfg.n {
        let pos = Point::new(
            rng.gen_range(0.0..=cfg.region_side),
            rng.gen_range(0.0..=cfg.region_side),
        );
        if taken.insert((pos.x.to_bits(), pos.y.to_bits())) {
            positions.push(pos);
        }
    }
    let nodes = positions
        .into_iter()
        .enumerate()
        .map(|(id, pos)| {
            let channels = index::sample(
                &mut rng,
                cfg.channel_count as usize,
                cfg.channels_per_node as usize,
            )
            .into_iter()
            .map(|c| c as Channel)
            .collect();
            Node { id, pos, channels }
        })
        .collect();
    let range = cfg.mode.range_for(cfg.n, cfg.region_side);
    Network::with_range(cfg.channel_count, nodes, range, cfg.weight_mode)
}

/// Nodes grouped by identical channel sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypePartition {
    pub classes: Vec<(ChannelSet, Vec<NodeId>)>,
    pub type_of: Vec<usize>,
}

impl TypePartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn same_type(&self, u: NodeId, v: NodeId) -> bool {
        self.type_of[u] == self.type_of[v]
    }
}

/// Classes are numbered in order of their lowest member id.
pub fn compute_type_partition(network: &Network) -> TypePartition {
    let mut index: HashMap<ChannelSet, usize> = HashMap::new();
    let mut classes: Vec<(ChannelSet, Vec<NodeId>)> = Vec::new();
    let mut type_of = Vec::with_capacity(network.len());
    for node in network.nodes() {
        let class = *index.entry(node.channels).or_insert_with(|| {
            classes.push((node.channels, Vec::new()));
            classes.len() - 1
        });
        classes[class].1.push(node.id);
        type_of.push(class);
    }
    TypePartition { classes, type_of }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_distance_is_inclusive() {
        let nodes = vec![Node::new(0, 0.0, 0.0, [1]), Node::new(1, 5.0, 0.0, [1])];
        let net = Network::with_range(4, nodes, 5.0, WeightMode::Unit).unwrap();
        assert_eq!(net.links().len(), 1);
        assert_eq!(net.link(0).channels, ChannelSet::single(1));
    }

    #[test]
    fn disjoint_channels_give_no_link() {
        let nodes = vec![Node::new(0, 0.0, 0.0, [1]), Node::new(1, 5.0, 0.0, [2])];
        let net = Network::with_range(4, nodes, 5.0, WeightMode::Unit).unwrap();
        assert!(net.links().is_empty());
    }

    #[test]
    fn pairwise_intersections() {
        let nodes = vec![
            Node::new(0, 0.0, 0.0, [1, 2]),
            Node::new(1, 1.0, 0.0, [2, 3]),
            Node::new(2, 0.0, 1.0, [1, 2]),
        ];
        let net = Network::with_range(4, nodes.clone(), 2.0, WeightMode::Unit).unwrap();
        // Independent recomputation of each pair's intersection.
        let mut expected = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                let common: Vec<Channel> = nodes[i]
                    .channels
                    .iter()
                    .filter(|c| nodes[j].channels.iter().any(|d| d == *c))
                    .collect();
                expected.push((i, j, common));
            }
        }
        let got: Vec<_> = net
            .links()
            .iter()
            .map(|l| (l.a, l.b, l.channels.iter().collect::<Vec<_>>()))
            .collect();
        assert_eq!(got, expected);
        assert_eq!(got[0].2, vec![2]);
        assert_eq!(got[1].2, vec![1, 2]);
        assert_eq!(got[2].2, vec![2]);
    }

    #[test]
    fn euclidean_weights_are_micro_units() {
        let nodes = vec![Node::new(0, 0.0, 0.0, [0]), Node::new(1, 3.0, 4.0, [0])];
        let net = Network::with_range(1, nodes, 10.0, WeightMode::Euclidean).unwrap();
        assert_eq!(net.link(0).weight, 5_000_000);
    }

    #[test]
    fn rejects_bad_nodes() {
        let dup = vec![Node::new(0, 0.0, 0.0, [0]), Node::new(0, 1.0, 0.0, [0])];
        assert_eq!(
            Network::with_range(2, dup, 1.0, WeightMode::Unit),
            Err(NetError::DuplicateNodeId(0))
        );
        let same_pos = vec![Node::new(0, 1.0, 1.0, [0]), Node::new(1, 1.0, 1.0, [0])];
        assert_eq!(
            Network::with_range(2, same_pos, 1.0, WeightMode::Unit),
            Err(NetError::DuplicatePosition(0, 1))
        );
        let empty = vec![Node::new(0, 0.0, 0.0, [])];
        assert_eq!(
            Network::with_range(2, empty, 1.0, WeightMode::Unit),
            Err(NetError::EmptyChannels(0))
        );
        let nodes = vec![Node::new(0, 0.0, 0.0, [0])];
        assert!(matches!(
            Network::with_range(2, nodes, 0.0, WeightMode::Unit),
            Err(NetError::InvalidRange(_))
        ));
    }

    #[test]
    fn constant_density_range_endpoints() {
        let r100 = RangeMode::ConstantDensity.range_for(100, 100.0);
        let r800 = RangeMode::ConstantDensity.range_for(800, 100.0);
        assert!((r100 - 11.0).abs() < 1e-12);
        assert!((r800 - 3.889).abs() < 1e-3);
        assert_eq!(r800.round(), 4.0);
    }

    #[test]
    fn random_topology_is_deterministic_and_sound() {
        let cfg = TopologyConfig::new(300, RangeMode::FixedRange(5.0), 10, 4, 42);
        let a = random_topology(&cfg).unwrap();
        let b = random_topology(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 300);
        for node in a.nodes() {
            assert_eq!(node.channels.len(), 4);
            assert!(node.pos.x >= 0.0 && node.pos.x <= 100.0);
        }
        for (i, u) in a.nodes().iter().enumerate() {
            for v in &a.nodes()[i + 1..] {
                let linked = a.link_between(u.id, v.id).is_some();
                let expected = u.pos.dist(v.pos) <= 5.0
                    && !u.channels.intersection(v.channels).is_empty();
                assert_eq!(linked, expected);
            }
        }
    }

    #[test]
    fn type_partition_groups_equal_sets() {
        let nodes = vec![
            Node::new(0, 0.0, 0.0, [1]),
            Node::new(1, 1.0, 0.0, [2]),
            Node::new(2, 2.0, 0.0, [1]),
        ];
        let net = Network::with_range(3, nodes, 1.0, WeightMode::Unit).unwrap();
        let part = compute_type_partition(&net);
        assert_eq!(part.len(), 2);
        assert_eq!(part.classes[0].1, vec![0, 2]);
        assert_eq!(part.classes[1].1, vec![1]);
        assert!(part.same_type(0, 2));

        let cfg = TopologyConfig::new(50, RangeMode::ConstantDensity, 10, 4, 7);
        let net = random_topology(&cfg).unwrap();
        // at most one class per node, out of C(10, 4) = 210 possible sets
        assert!(compute_type_partition(&net).len() <= 50);
    }
}
