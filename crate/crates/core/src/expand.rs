//! Edmonds–Szeider node expansion.
//!
//! Every node other than the source and destination becomes a gadget of
//! `2|C(x)| + 2` sub-nodes: a `chan(c)`/`chan'(c)` pair per available channel
//! plus a `g`/`g'` pair. Inside a gadget all edges cost 0: `chan(c)–chan'(c)`,
//! `chan'(c)–g`, `chan'(c)–g'` and `g–g'`. External edges join `chan(c)` of two
//! linked nodes for every channel `c` the link offers and carry the link
//! weight. The source and destination stay single vertices.
//!
//! With every gadget internally matched, minimum-cost perfect matchings of the
//! expansion correspond to minimum-weight alternating source→destination paths,
//! and the external edges of such a path are a CDC path.

use std::collections::HashMap;

use crate::channels::{Channel, ChannelSet};
use crate::error::{ExpandError, PathError};
use crate::network::{LinkId, Network, NodeId, Weight};
use crate::path::{CdcPath, Hop};

pub type SubId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubKind {
    /// The unexpanded source or destination.
    Terminal,
    Chan(Channel),
    ChanPrime(Channel),
    G,
    GPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubNode {
    pub owner: NodeId,
    pub kind: SubKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeTag {
    Internal,
    External { link: LinkId, channel: Channel },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: SubId,
    pub v: SubId,
    pub weight: Weight,
    pub tag: EdgeTag,
}

impl Edge {
    pub fn other(&self, end: SubId) -> SubId {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Gadget {
    base: SubId,
    channels: ChannelSet,
}

impl Gadget {
    fn rank(&self, c: Channel) -> usize {
        (self.channels.bits() & ((1u32 << c) - 1)).count_ones() as usize
    }

    fn chan(&self, c: Channel) -> SubId {
        self.base + 2 * self.rank(c)
    }

    fn len(&self) -> usize {
        2 * self.channels.len() + 2
    }
}

/// The expansion of a network for one `(s, d)` pair.
#[derive(Clone, Debug)]
pub struct ExpandedGraph {
    subnodes: Vec<SubNode>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(SubId, EdgeId)>>,
    edge_index: HashMap<(SubId, SubId), EdgeId>,
    gadgets: Vec<Option<Gadget>>,
    terminal: Vec<Option<SubId>>,
    source: SubId,
    dest: SubId,
    s: NodeId,
    d: NodeId,
    reduced: bool,
}

impl ExpandedGraph {
    pub fn subnodes(&self) -> &[SubNode] {
        &self.subnodes
    }

    pub fn subnode(&self, id: SubId) -> SubNode {
        self.subnodes[id]
    }

    pub fn len(&self) -> usize {
        self.subnodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subnodes.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// `(neighbor, edge)` pairs sorted by neighbor id.
    pub fn neighbors(&self, sub: SubId) -> &[(SubId, EdgeId)] {
        &self.adjacency[sub]
    }

    pub fn edge_between(&self, a: SubId, b: SubId) -> Option<EdgeId> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn source(&self) -> SubId {
        self.source
    }

    pub fn dest(&self) -> SubId {
        self.dest
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.s, self.d)
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Number of sub-nodes owned by `node` (1 for the source and destination).
    pub fn gadget_size(&self, node: NodeId) -> usize {
        match self.gadgets[node] {
            Some(g) => g.len(),
            None => 1,
        }
    }

    /// The sub-node through which `node` attaches to external edges on
    /// channel `c`.
    pub fn port(&self, node: NodeId, c: Channel) -> Option<SubId> {
        if let Some(t) = self.terminal[node] {
            return Some(t);
        }
        let g = self.gadgets[node]?;
        g.channels.contains(c).then(|| g.chan(c))
    }
}

/// The fixed matching every gadget starts with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<SubId>>,
}

impl Matching {
    pub fn mate(&self, sub: SubId) -> Option<SubId> {
        self.mate[sub]
    }

    pub fn is_matched(&self, a: SubId, b: SubId) -> bool {
        self.mate[a] == Some(b)
    }

    pub fn len(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (SubId, SubId)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(a, m)| m.filter(|&b| a < b).map(|b| (a, b)))
    }
}

/// Expands `network` for the pair `(s, d)`. With `reduced`, a link offering
/// three or more channels keeps external edges only for its three
/// lowest-numbered channels.
pub fn expand(
    network: &Network,
    s: NodeId,
    d: NodeId,
    reduced: bool,
) -> Result<(ExpandedGraph, Matching), ExpandError> {
    for x in [s, d] {
        if !network.contains(x) {
            return Err(ExpandError::UnknownNode(x));
        }
    }
    if s == d {
        return Err(ExpandError::SameEndpoints(s));
    }

    let mut subnodes = Vec::new();
    let mut gadgets = vec![None; network.len()];
    let mut terminal = vec![None; network.len()];
    let mut edges = Vec::new();
    let mut mate = Vec::new();

    for node in network.nodes() {
        let x = node.id;
        if x == s || x == d {
            terminal[x] = Some(subnodes.len());
            subnodes.push(SubNode {
                owner: x,
                kind: SubKind::Terminal,
            });
            mate.push(None);
            continue;
        }
        let g = Gadget {
            base: subnodes.len(),
            channels: node.channels,
        };
        for c in node.channels {
            subnodes.push(SubNode { owner: x, kind: SubKind::Chan(c) });
            subnodes.push(SubNode { owner: x, kind: SubKind::ChanPrime(c) });
        }
        subnodes.push(SubNode { owner: x, kind: SubKind::G });
        subnodes.push(SubNode { owner: x, kind: SubKind::GPrime });
        let g_id = g.base + 2 * node.channels.len();
        let gp_id = g_id + 1;
        for c in node.channels {
            let chan = g.chan(c);
            let prime = chan + 1;
            edges.push(internal(chan, prime));
            edges.push(internal(prime, g_id));
            edges.push(internal(prime, gp_id));
            mate.push(Some(prime));
            mate.push(Some(chan));
        }
        edges.push(internal(g_id, gp_id));
        mate.push(Some(gp_id));
        mate.push(Some(g_id));
        gadgets[x] = Some(g);
    }

    let port = |x: NodeId, c: Channel| -> SubId {
        match terminal[x] {
            Some(t) => t,
            None => gadgets[x].expect("gadget").chan(c),
        }
    };
    let mut edge_index: HashMap<(SubId, SubId), EdgeId> = HashMap::new();
    for e in edges.iter().enumerate() {
        edge_index.insert((e.1.u.min(e.1.v), e.1.u.max(e.1.v)), e.0);
    }
    for (link_id, link) in network.links().iter().enumerate() {
        let channels = if reduced && link.channels.len() >= 3 {
            link.channels.lowest(3)
        } else {
            link.channels
        };
        for c in channels {
            let (a, b) = (port(link.a, c), port(link.b, c));
            let key = (a.min(b), a.max(b));
            // Only a direct source–destination link can produce parallel
            // edges; the lowest channel wins.
            if edge_index.contains_key(&key) {
                continue;
            }
            edge_index.insert(key, edges.len());
            edges.push(Edge {
                u: a,
                v: b,
                weight: link.weight,
                tag: EdgeTag::External { link: link_id, channel: c },
            });
        }
    }

    let mut adjacency = vec![Vec::new(); subnodes.len()];
    for (id, e) in edges.iter().enumerate() {
        adjacency[e.u].push((e.v, id));
        adjacency[e.v].push((e.u, id));
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }

    let graph = ExpandedGraph {
        source: terminal[s].expect("source terminal"),
        dest: terminal[d].expect("destination terminal"),
        subnodes,
        edges,
        adjacency,
        edge_index,
        gadgets,
        terminal,
        s,
        d,
        reduced,
    };
    let matching = Matching { mate };
    debug_assert!(initial_matching_is_sound(&graph, &matching));
    Ok((graph, matching))
}

fn internal(u: SubId, v: SubId) -> Edge {
    Edge {
        u,
        v,
        weight: 0,
        tag: EdgeTag::Internal,
    }
}

/// The matching covers every sub-node except the two terminals, is symmetric,
/// and uses only zero-weight edges of the graph.
pub fn initial_matching_is_sound(graph: &ExpandedGraph, matching: &Matching) -> bool {
    (0..graph.len()).all(|u| {
        let terminal = u == graph.source || u == graph.dest;
        match matching.mate(u) {
            None => terminal,
            Some(v) => {
                !terminal
                    && matching.mate(v) == Some(u)
                    && graph
                        .edge_between(u, v)
                        .is_some_and(|e| graph.edge(e).weight == 0)
            }
        }
    })
}

/// Maps an alternating source→destination sub-node path to the channel-assigned
/// path it encodes in the original network.
pub fn contract_path(
    network: &Network,
    graph: &ExpandedGraph,
    matching: &Matching,
    path: &[SubId],
) -> Result<CdcPath, PathError> {
    if path.first() != Some(&graph.source) || path.last() != Some(&graph.dest) {
        return Err(PathError::WrongEndpoints);
    }
    let mut seen = vec![false; graph.len()];
    for &x in path {
        if std::mem::replace(&mut seen[x], true) {
            return Err(PathError::NotSimple(x));
        }
    }
    if !path.len().is_multiple_of(2) {
        // An alternating path between the two exposed vertices has odd edge
        // count, hence an even vertex count.
        return Err(PathError::NotAlternating(path.len() - 1));
    }
    let mut hops = Vec::new();
    for (i, pair) in path.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let eid = graph.edge_between(a, b).ok_or(PathError::MissingEdge(a, b))?;
        let matched = matching.is_matched(a, b);
        if matched != (i % 2 == 1) {
            return Err(PathError::NotAlternating(i));
        }
        if let EdgeTag::External { link, channel } = graph.edge(eid).tag {
            let from = graph.subnode(a).owner;
            let to = graph.subnode(b).owner;
            hops.push(Hop { from, to, link, channel });
        }
    }
    let cdc = CdcPath::from_hops(network, hops);
    cdc.validate(network)?;
    Ok(cdc)
}
