//! Line-oriented `cdcnet` text format.
//!
//! ```text
//! cdcnet 1
//! channels <count>
//! weightmode <unit|euclid>
//! range <R>            # optional; without it, explicit link lines are read
//! node <id> <x> <y> <c1,c2,...>
//! link <id1> <id2>
//! ```

use std::fmt::Write;

use crate::channels::{Channel, ChannelSet, MAX_CHANNELS};
use crate::error::ParseError;
use crate::network::{Network, Node, NodeId, Point, WeightMode};

pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut header = false;
    let mut channel_count: Option<u8> = None;
    let mut weight_mode = WeightMode::Unit;
    let mut range: Option<f64> = None;
    let mut nodes: Vec<Node> = Vec::new();
    let mut links: Vec<(NodeId, NodeId)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !header {
            if fields != ["cdcnet", "1"] {
                return Err(ParseError::at(line_no, "expected header `cdcnet 1`"));
            }
            header = true;
            continue;
        }
        match fields[0] {
            "channels" => {
                let count: usize = parse_field(&fields, 1, line_no, "channel count")?;
                if count > MAX_CHANNELS as usize {
                    return Err(ParseError::at(
                        line_no,
                        format!("channel count {count} exceeds capacity {MAX_CHANNELS}"),
                    ));
                }
                channel_count = Some(count as u8);
            }
            "weightmode" => {
                expect_len(&fields, 2, line_no)?;
                weight_mode = match fields[1] {
                    "unit" => WeightMode::Unit,
                    "euclid" => WeightMode::Euclidean,
                    other => {
                        return Err(ParseError::at(line_no, format!("unknown weight mode `{other}`")))
                    }
                };
            }
            "range" => {
                let r: f64 = parse_field(&fields, 1, line_no, "range")?;
                range = Some(r);
            }
            "node" => {
                expect_len(&fields, 5, line_no)?;
                let count = channel_count
                    .ok_or_else(|| ParseError::at(line_no, "`channels` must precede nodes"))?;
                let id: NodeId = parse_field(&fields, 1, line_no, "node id")?;
                let x: f64 = parse_field(&fields, 2, line_no, "x coordinate")?;
                let y: f64 = parse_field(&fields, 3, line_no, "y coordinate")?;
                let mut channels = ChannelSet::EMPTY;
                for part in fields[4].split(',') {
                    let c: usize = part
                        .parse()
                        .map_err(|_| ParseError::at(line_no, format!("bad channel `{part}`")))?;
                    if c >= count as usize {
                        return Err(ParseError::at(
                            line_no,
                            format!("channel {c} not below declared count {count}"),
                        ));
                    }
                    channels.insert(c as Channel);
                }
                if nodes.iter().any(|n| n.id == id) {
                    return Err(ParseError::at(line_no, format!("duplicate node id {id}")));
                }
                nodes.push(Node {
                    id,
                    pos: Point::new(x, y),
                    channels,
                });
            }
            "link" => {
                let a: NodeId = parse_field(&fields, 1, line_no, "link endpoint")?;
                let b: NodeId = parse_field(&fields, 2, line_no, "link endpoint")?;
                expect_len(&fields, 3, line_no)?;
                links.push((a, b));
            }
            other => return Err(ParseError::at(line_no, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(ParseError::at(1, "missing header `cdcnet 1`"));
    }
    let channel_count = channel_count.ok_or_else(|| ParseError::at(1, "missing `channels` line"))?;
    let net = match range {
        Some(r) => {
            if !links.is_empty() {
                return Err(ParseError::at(1, "`link` lines are only allowed without `range`"));
            }
            Network::with_range(channel_count, nodes, r, weight_mode)?
        }
        None => Network::with_links(channel_count, nodes, &links, weight_mode)?,
    };
    Ok(net)
}

pub(crate) fn expect_len(fields: &[&str], n: usize, line: usize) -> Result<(), ParseError> {
    if fields.len() != n {
        return Err(ParseError::at(
            line,
            format!("`{}` takes {} arguments", fields[0], n - 1),
        ));
    }
    Ok(())
}

pub(crate) fn parse_field<T: std::str::FromStr>(
    fields: &[&str],
    idx: usize,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    fields
        .get(idx)
        .ok_or_else(|| ParseError::at(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| ParseError::at(line, format!("bad {what} `{}`", fields[idx])))
}

pub fn serialize_network(network: &Network) -> String {
    serialize_with_header(network, &[])
}

/// Serializes with leading `# ...` comment lines. Range-derived networks keep
/// their `range` line; explicit networks list every link.
pub fn serialize_with_header(network: &Network, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "cdcnet 1");
    let _ = writeln!(out, "channels {}", network.channel_count());
    let _ = writeln!(out, "weightmode {}", network.weight_mode().as_str());
    if let Some(r) = network.range() {
        let _ = writeln!(out, "range {r}");
    }
    for node in network.nodes() {
        let _ = writeln!(out, "node {} {} {} {}", node.id, node.pos.x, node.pos.y, node.channels);
    }
    if network.range().is_none() {
        for link in network.links() {
            let _ = writeln!(out, "link {} {}", link.a, link.b);
        }
    }
    out
}
