use crate::channels::Channel;
use crate::error::SpannerError;
use crate::network::{Network, NodeId};
use crate::path::CdcPath;
use crate::search::{shortest_cdc, SearchOptions};

/// Repeated node visits: walk length minus distinct nodes.
pub fn overlap_count(walk: &CdcPath) -> usize {
    let nodes = walk.nodes();
    let mut distinct = nodes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    nodes.len() - distinct.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repair {
    /// Cut the loop; the channels around the cut already differ.
    Shortcut,
    /// Leave the overlap node's predecessor straight for the node after its
    /// first visit, then step back into it.
    Detour,
    /// Mirror image of [`Repair::Detour`] at the last visit.
    MirrorDetour,
    /// Link the node before the first visit straight to the node after the
    /// last one, dropping the overlap node.
    Bypass,
    /// Cut the loop and reassign channels.
    Recolored,
    /// Cheapest CDC path over the links among the walk's nodes.
    Rerouted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Untangled {
    pub path: CdcPath,
    /// Overlap count before each step and after the last one.
    pub overlap_history: Vec<usize>,
    pub repairs: Vec<Repair>,
}

/// Channels for `links` with consecutive ones differing, keeping as many of
/// `preferred` as possible. `before` and `after` pin the neighbors outside.
fn assign_channels(
    network: &Network,
    nodes: &[NodeId],
    preferred: &[Option<Channel>],
    before: Option<Channel>,
    after: Option<Channel>,
) -> Option<Vec<Channel>> {
    let hops = nodes.len() - 1;
    let sets: Vec<Vec<Channel>> = nodes
        .windows(2)
        .map(|w| network.link_between(w[0], w[1]).map(|l| network.link(l).channels.iter().collect()))
        .collect::<Option<_>>()?;
    // cost[h][i]: fewest changes up to hop h when hop h takes sets[h][i].
    let mut cost: Vec<Vec<Option<(usize, usize)>>> = Vec::with_capacity(hops);
    for h in 0..hops {
        let mut row = Vec::with_capacity(sets[h].len());
        for &c in &sets[h] {
            let own = usize::from(preferred[h].is_some_and(|p| p != c));
            if h == hops - 1 && after == Some(c) {
                row.push(None);
                continue;
            }
            let entry = if h == 0 {
                (before != Some(c)).then_some((own, usize::MAX))
            } else {
                cost[h - 1]
                    .iter()
                    .enumerate()
                    .filter(|&(j, e)| e.is_some() && sets[h - 1][j] != c)
                    .map(|(j, e)| (e.unwrap().0 + own, j))
                    .min()
            };
            row.push(entry);
        }
        cost.push(row);
    }
    let (mut idx, _) = cost[hops - 1]
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.map(|(c, _)| (i, c)))
        .min_by_key(|&(i, c)| (c, i))?;
    let mut out = vec![0; hops];
    for h in (0..hops).rev() {
        out[h] = sets[h][idx];
        idx = cost[h][idx].unwrap().1;
    }
    Some(out)
}

struct Walk {
    nodes: Vec<NodeId>,
    channels: Vec<Channel>,
}

impl Walk {
    fn build(&self, network: &Network) -> CdcPath {
        CdcPath::from_walk(network, &self.nodes, &self.channels).expect("repaired walk uses existing links")
    }
}

/// Candidate repairs for the overlap at node positions `p < q`, in order of
/// preference.
fn repairs(network: &Network, w: &Walk, p: usize, q: usize) -> Vec<(Repair, Walk)> {
    let last = w.nodes.len() - 1;
    let ch = &w.channels;
    let before = |i: usize| (i > 0).then(|| ch[i - 1]);
    let mut out = Vec::new();

    // Cut positions p+1..=q.
    let cut_nodes: Vec<NodeId> = w.nodes[..=p].iter().chain(&w.nodes[q + 1..]).copied().collect();
    let c_in = before(p);
    let c_out = (q < last).then(|| ch[q]);
    if c_in.is_none() || c_out.is_none() || c_in != c_out {
        let channels = ch[..p].iter().chain(&ch[q..]).copied().collect();
        out.push((Repair::Shortcut, Walk { nodes: cut_nodes.clone(), channels }));
    }

    // a -> b -> v, where a and b surround the first visit of v.
    if p >= 1 {
        let (a, b, v) = (w.nodes[p - 1], w.nodes[p + 1], w.nodes[p]);
        if let Some(mid) = assign_channels(network, &[a, b, v], &[None, None], before(p - 1), c_out) {
            let nodes = w.nodes[..p].iter().chain(&[b]).chain(&w.nodes[q..]).copied().collect();
            let channels = ch[..p - 1].iter().chain(&mid).chain(&ch[q..]).copied().collect();
            out.push((Repair::Detour, Walk { nodes, channels }));
        }
    }

    // v -> c -> e, where c and e surround the last visit of v.
    if q < last {
        let (v, c, e) = (w.nodes[q], w.nodes[q - 1], w.nodes[q + 1]);
        let after = (q + 1 < last).then(|| ch[q + 1]);
        if let Some(mid) = assign_channels(network, &[v, c, e], &[None, None], c_in, after) {
            let nodes = w.nodes[..=p].iter().chain(&[c]).chain(&w.nodes[q + 1..]).copied().collect();
            let channels = ch[..p].iter().chain(&mid).chain(&ch[q + 1..]).copied().collect();
            out.push((Repair::MirrorDetour, Walk { nodes, channels }));
        }
    }

    // a -> e around both visits of v.
    if p >= 1 && q < last && w.nodes[p - 1] != w.nodes[q + 1] {
        let (a, e) = (w.nodes[p - 1], w.nodes[q + 1]);
        let nodes: Vec<NodeId> = w.nodes[..p].iter().chain(&w.nodes[q + 1..]).copied().collect();
        let after = (q + 1 < last).then(|| ch[q + 1]);
        let channels = match assign_channels(network, &[a, e], &[None], before(p - 1), after) {
            Some(mid) => Some(ch[..p - 1].iter().chain(&mid).chain(&ch[q + 1..]).copied().collect()),
            None if network.link_between(a, e).is_some() => {
                let preferred: Vec<Option<Channel>> = ch[..p - 1]
                    .iter()
                    .map(|&c| Some(c))
                    .chain([None])
                    .chain(ch[q + 1..].iter().map(|&c| Some(c)))
                    .collect();
                assign_channels(network, &nodes, &preferred, None, None)
            }
            None => None,
        };
        if let Some(channels) = channels {
            out.push((Repair::Bypass, Walk { nodes, channels }));
        }
    }

    let preferred: Vec<Option<Channel>> = ch[..p].iter().chain(&ch[q..]).map(|&c| Some(c)).collect();
    if cut_nodes.len() > 1 {
        if let Some(channels) = assign_channels(network, &cut_nodes, &preferred, None, None) {
            out.push((Repair::Recolored, Walk { nodes: cut_nodes, channels }));
        }
    } else {
        out.push((Repair::Recolored, Walk { nodes: cut_nodes, channels: Vec::new() }));
    }
    out
}

/// Cheapest CDC path between the walk's ends using only links among its
/// nodes.
fn reroute(network: &Network, nodes: &[NodeId]) -> Option<CdcPath> {
    let mut on_walk = vec![false; network.len()];
    for &v in nodes {
        on_walk[v] = true;
    }
    let links = (0..network.links().len()).filter(|&id| {
        let l = network.link(id);
        on_walk[l.a] && on_walk[l.b]
    });
    let sub = network.subnetwork(links);
    let (s, d) = (nodes[0], *nodes.last()?);
    let found = shortest_cdc(&sub, s, d, SearchOptions::default()).ok()?.path?;
    // Same link ids are not guaranteed in the restricted copy.
    CdcPath::from_walk(network, &found.nodes(), &found.channels()).ok()
}

/// Removes repeated nodes from a CDC walk without lengthening it.
///
/// Each step takes the earliest node that is visited again and its last
/// visit. When the channels into the first visit and out of the last differ,
/// the loop between them is cut. Otherwise the walk detours through the node
/// after the first visit (or, mirrored, the node before the last visit), or
/// skips both visits with a direct link; failing that the loop is cut and
/// channels are reassigned. As a last resort the whole walk is replaced by
/// the cheapest CDC path over links among its nodes. Every step lowers the
/// overlap count.
pub fn untangle(network: &Network, walk: &CdcPath) -> Result<Untangled, SpannerError> {
    walk.validate(network)?;
    let mut w = Walk {
        nodes: walk.nodes(),
        channels: walk.channels(),
    };
    let mut current = walk.clone();
    let mut history = vec![overlap_count(&current)];
    let mut done = Vec::new();
    while *history.last().unwrap() > 0 {
        let (p, q) = (0..w.nodes.len())
            .find_map(|p| {
                let q = w.nodes.iter().rposition(|&x| x == w.nodes[p])?;
                (q > p).then_some((p, q))
            })
            .expect("an overlap exists");
        let mut applied = false;
        for (kind, cand) in repairs(network, &w, p, q) {
            let path = cand.build(network);
            if path.total_weight <= current.total_weight && overlap_count(&path) < *history.last().unwrap() {
                path.validate(network)?;
                w = cand;
                current = path;
                done.push(kind);
                applied = true;
                break;
            }
        }
        if !applied {
            let Some(path) = reroute(network, &w.nodes).filter(|r| r.total_weight <= current.total_weight) else {
                return Err(SpannerError::Unrepairable(w.nodes[p]));
            };
            w = Walk {
                nodes: path.nodes(),
                channels: path.channels(),
            };
            current = path;
            done.push(Repair::Rerouted);
        }
        history.push(overlap_count(&current));
    }
    Ok(Untangled {
        path: current,
        overlap_history: history,
        repairs: done,
    })
}
