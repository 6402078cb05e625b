use super::{fixed_dist2, sector_index, two_nearest, Class, SpannerGraph, SpannerVariant};
use crate::channels::{Channel, ChannelSet};
use crate::error::SpannerError;
use crate::network::{Network, NodeId};
use crate::path::CdcPath;

fn class_of(variant: SpannerVariant, channels: ChannelSet, a: Channel, b: Channel) -> Class {
    match variant {
        SpannerVariant::PerType => Class::Type(channels),
        SpannerVariant::PerChannelPair => Class::Pair(a.min(b), a.max(b)),
    }
}

/// Walk from `from` to `target` over spanner links. From each even-position
/// node it jumps straight to `target` when the spanner links them, otherwise
/// it takes the nearest and second-nearest members of one class in the
/// sector facing `target`. Odd hops use `outer`, even hops inside a class use
/// that class's channel.
///
/// A class is usable only when both of its picks are nearer than `target`;
/// the target's own class always is once the direct link is missing, and
/// each step then brings the walk strictly closer to `target`.
fn segment_walk(
    network: &Network,
    spanner: &SpannerGraph,
    from: NodeId,
    target: NodeId,
    classes: &[(Class, Channel)],
    outer: Channel,
) -> Result<(Vec<NodeId>, Vec<Channel>), SpannerError> {
    let k = spanner.config.k;
    let tpos = network.node(target).pos;
    let mut nodes = vec![from];
    let mut channels = Vec::new();
    let mut v = from;
    for _ in 0..=network.len() {
        if spanner.network().link_between(v, target).is_some() {
            nodes.push(target);
            channels.push(outer);
            return Ok((nodes, channels));
        }
        let vpos = network.node(v).pos;
        let sector = sector_index(vpos, tpos, k)?;
        let target_key = (fixed_dist2(vpos, tpos), target);
        let mut best: Option<((i128, NodeId), NodeId, NodeId, Channel)> = None;
        for &(class, inner) in classes {
            let near = two_nearest(network, k, v, sector, class);
            let [a, b] = near[..] else { continue };
            let key_b = (fixed_dist2(vpos, network.node(b).pos), b);
            if key_b >= target_key {
                continue;
            }
            let key_a = (fixed_dist2(vpos, network.node(a).pos), a);
            if best.is_none_or(|(k0, ..)| key_a < k0) {
                best = Some((key_a, a, b, inner));
            }
        }
        let Some((_, a, b, inner)) = best else {
            return Err(SpannerError::Stuck(v));
        };
        nodes.extend([a, b]);
        channels.extend([outer, inner]);
        v = b;
    }
    Err(SpannerError::Stuck(v))
}

/// Replaces every link of the CDC path `path` (in `network`, at least two
/// links) by a walk over spanner links, keeping a valid channel assignment.
///
/// For link `(u_i, u_{i+1})` on channel `C2`, between links on `C1` and
/// `C3`, the walk runs through the classes of `u_i` (alternating `C2`, `C1`)
/// and `u_{i+1}` (alternating `C2`, `C3`). The first link only uses the class
/// of `u_1`; the last is built backwards from `d` through the class of
/// `u_{m-1}`. The result is a walk in `spanner.network()` and may revisit
/// nodes.
pub fn link_replacement(network: &Network, spanner: &SpannerGraph, path: &CdcPath) -> Result<CdcPath, SpannerError> {
    path.validate(network)?;
    let m = path.len();
    if m < 2 {
        return Err(SpannerError::SingleLink);
    }
    let u = path.nodes();
    let ch = path.channels();
    let variant = spanner.config.variant;
    let cls = |x: NodeId, a: Channel, b: Channel| class_of(variant, network.node(x).channels, a, b);

    let mut nodes = vec![u[0]];
    let mut channels = Vec::new();
    for i in 0..m {
        let (seg_nodes, seg_channels) = if i == m - 1 {
            let (c1, c2) = (ch[i - 1], ch[i]);
            let (mut n, mut c) = segment_walk(network, spanner, u[m], u[m - 1], &[(cls(u[m - 1], c1, c2), c1)], c2)?;
            n.reverse();
            c.reverse();
            (n, c)
        } else if i == 0 {
            let (c2, c3) = (ch[0], ch[1]);
            segment_walk(network, spanner, u[0], u[1], &[(cls(u[1], c2, c3), c3)], c2)?
        } else {
            let (c1, c2, c3) = (ch[i - 1], ch[i], ch[i + 1]);
            let classes = [(cls(u[i], c1, c2), c1), (cls(u[i + 1], c2, c3), c3)];
            segment_walk(network, spanner, u[i], u[i + 1], &classes, c2)?
        };
        debug_assert_eq!(seg_nodes[0], u[i]);
        nodes.extend_from_slice(&seg_nodes[1..]);
        channels.extend(seg_channels);
    }
    let walk = CdcPath::from_walk(spanner.network(), &nodes, &channels)?;
    walk.validate(spanner.network())?;
    Ok(walk)
}
