use std::fmt;

use crate::channels::Channel;
use crate::error::PathError;
use crate::network::{LinkId, Network, NodeId, Weight};

/// One traversed link with the channel assigned to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hop {
    pub from: NodeId,
    pub to: NodeId,
    pub link: LinkId,
    pub channel: Channel,
}

/// A walk in the original network with a per-link channel assignment.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CdcPath {
    pub hops: Vec<Hop>,
    pub total_weight: Weight,
}

impl CdcPath {
    pub fn empty() -> Self {
        CdcPath::default()
    }

    /// Builds a path from hops, summing link weights from `network`.
    pub fn from_hops(network: &Network, hops: Vec<Hop>) -> Self {
        let total_weight = hops.iter().map(|h| network.link(h.link).weight).sum();
        CdcPath { hops, total_weight }
    }

    /// Builds a path from a node sequence and one channel per hop, looking
    /// up each link in `network`.
    pub fn from_walk(network: &Network, nodes: &[NodeId], channels: &[Channel]) -> Result<Self, PathError> {
        assert_eq!(nodes.len(), channels.len() + 1, "one channel per hop");
        let hops = nodes
            .windows(2)
            .zip(channels)
            .map(|(w, &channel)| {
                let link = network.link_between(w[0], w[1]).ok_or(PathError::MissingEdge(w[0], w[1]))?;
                Ok(Hop { from: w[0], to: w[1], link, channel })
            })
            .collect::<Result<Vec<_>, PathError>>()?;
        Ok(Self::from_hops(network, hops))
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// Visited nodes in walk order (empty for the empty path).
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.hops.len() + 1);
        if let Some(first) = self.hops.first() {
            out.push(first.from);
        }
        out.extend(self.hops.iter().map(|h| h.to));
        out
    }

    pub fn channels(&self) -> Vec<Channel> {
        self.hops.iter().map(|h| h.channel).collect()
    }

    pub fn is_node_simple(&self) -> bool {
        let nodes = self.nodes();
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == nodes.len()
    }

    /// Checks the walk against `network`: hops chain, each link joins its hop
    /// endpoints and offers the assigned channel, consecutive channels differ,
    /// and the stored weight is the sum of link weights.
    pub fn validate(&self, network: &Network) -> Result<(), PathError> {
        let mut weight = 0;
        for (i, hop) in self.hops.iter().enumerate() {
            let link = network.links().get(hop.link).ok_or(PathError::NotCdc(i))?;
            if !(link.touches(hop.from) && link.other(hop.from) == hop.to) {
                return Err(PathError::NotCdc(i));
            }
            if !link.channels.contains(hop.channel) {
                return Err(PathError::NotCdc(i));
            }
            if i > 0 {
                let prev = &self.hops[i - 1];
                if prev.to != hop.from || prev.channel == hop.channel {
                    return Err(PathError::NotCdc(i));
                }
            }
            weight += link.weight;
        }
        if weight != self.total_weight {
            return Err(PathError::NotCdc(self.hops.len()));
        }
        Ok(())
    }

    pub fn connects(&self, s: NodeId, d: NodeId) -> bool {
        match (self.hops.first(), self.hops.last()) {
            (Some(f), Some(l)) => f.from == s && l.to == d,
            _ => s == d,
        }
    }
}

impl fmt::Display for CdcPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hops.is_empty() {
            return f.write_str("(empty)");
        }
        write!(f, "{}", self.hops[0].from)?;
        for hop in &self.hops {
            write!(f, " -[{}]-> {}", hop.channel, hop.to)?;
        }
        Ok(())
    }
}
