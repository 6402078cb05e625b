//! Sector-based CDC spanners: per node, per sector, per class, keep the two
//! nearest neighbors of the class and the link between them.

mod replace;
mod untangle;

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

pub use replace::link_replacement;
pub use untangle::{overlap_count, untangle, Repair, Untangled};

use crate::channels::{Channel, ChannelSet};
use crate::error::SpannerError;
use crate::format::serialize_with_header;
use crate::network::{compute_type_partition, LinkId, Network, NodeId, Point, Weight, MICRO_UNITS};
use crate::search::{shortest_cdc, SearchOptions};

pub const MIN_SECTORS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpannerVariant {
    /// One class per set of nodes with identical channel sets.
    PerType,
    /// One class per unordered channel pair; members hold both channels.
    PerChannelPair,
}

impl SpannerVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            SpannerVariant::PerType => "per-type",
            SpannerVariant::PerChannelPair => "per-pair",
        }
    }
}

impl fmt::Display for SpannerVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpannerVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "per-type" | "per_type" => Ok(SpannerVariant::PerType),
            "per-pair" | "per_pair" | "per-channel-pair" | "per_channel_pair" => Ok(SpannerVariant::PerChannelPair),
            other => Err(format!("unknown spanner variant `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpannerConfig {
    pub k: usize,
    pub variant: SpannerVariant,
}

impl SpannerConfig {
    pub fn new(k: usize, variant: SpannerVariant) -> Result<Self, SpannerError> {
        if k < MIN_SECTORS {
            return Err(SpannerError::TooFewSectors(k));
        }
        Ok(SpannerConfig { k, variant })
    }

    pub fn theta(&self) -> f64 {
        TAU / self.k as f64
    }
}

/// `(1 - 2 sin(θ/2))^-2` with `θ = 2π / k`.
pub fn stretch_factor(k: usize) -> Result<f64, SpannerError> {
    if k < MIN_SECTORS {
        return Err(SpannerError::TooFewSectors(k));
    }
    let theta = TAU / k as f64;
    let c = 1.0 - 2.0 * (theta / 2.0).sin();
    Ok(1.0 / (c * c))
}

/// `t` rounded up to 12 significant digits, as `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaledStretch {
    pub num: u128,
    pub den: u128,
}

impl ScaledStretch {
    pub fn from_t(t: f64) -> Self {
        assert!(t.is_finite() && t >= 1.0);
        let exp = 11 - t.log10().floor() as i32;
        let den = 10u128.pow(exp as u32);
        let num = (t * den as f64).ceil() as u128;
        ScaledStretch { num, den }
    }

    /// `a <= t * b`, exactly.
    pub fn bounds(&self, a: Weight, b: Weight) -> bool {
        a as u128 * self.den <= self.num * b as u128
    }
}

/// Sector of `point` around `apex` among `k` sectors of angle `2π / k`,
/// counted counter-clockwise from due east; each sector is `[iθ, (i+1)θ)`.
pub fn sector_index(apex: Point, point: Point, k: usize) -> Result<usize, SpannerError> {
    if apex == point {
        return Err(SpannerError::CoincidentPoints);
    }
    let mut angle = (point.y - apex.y).atan2(point.x - apex.x);
    if angle < 0.0 {
        angle += TAU;
    }
    let theta = TAU / k as f64;
    let mut i = ((angle / theta).floor() as usize).min(k - 1);
    // Guard the floor against rounding at the boundaries.
    if angle < i as f64 * theta && i > 0 {
        i -= 1;
    } else if i + 1 < k && angle >= (i + 1) as f64 * theta {
        i += 1;
    }
    Ok(i)
}

/// Exact squared distance between fixed-point coordinates.
pub(crate) fn fixed_dist2(a: Point, b: Point) -> i128 {
    let fx = |v: f64| (v * MICRO_UNITS).round() as i128;
    let dx = fx(a.x) - fx(b.x);
    let dy = fx(a.y) - fx(b.y);
    dx * dx + dy * dy
}

/// A neighbor class, as used both when building and when replacing links.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Class {
    /// Nodes whose channel set equals this one.
    Type(ChannelSet),
    /// Nodes holding both channels.
    Pair(Channel, Channel),
}

impl Class {
    pub fn contains(self, channels: ChannelSet) -> bool {
        match self {
            Class::Type(t) => channels == t,
            Class::Pair(a, b) => channels.contains(a) && channels.contains(b),
        }
    }
}

/// The two nearest network neighbors of `v` in `sector` belonging to `class`,
/// nearest first, ties by node id.
pub(crate) fn two_nearest(network: &Network, k: usize, v: NodeId, sector: usize, class: Class) -> Vec<NodeId> {
    let p = network.node(v).pos;
    let mut cands: Vec<(i128, NodeId)> = network
        .neighbors(v)
        .iter()
        .map(|&(w, _)| w)
        .filter(|&w| class.contains(network.node(w).channels))
        .filter(|&w| sector_index(p, network.node(w).pos, k).expect("distinct positions") == sector)
        .map(|w| (fixed_dist2(p, network.node(w).pos), w))
        .collect();
    cands.sort_unstable();
    cands.into_iter().take(2).map(|(_, w)| w).collect()
}

#[derive(Clone, Debug)]
pub struct SpannerGraph {
    pub config: SpannerConfig,
    /// Selected link ids in the base network, ascending.
    pub selected_links: Vec<LinkId>,
    pub t: f64,
    /// Interconnects dropped because the two neighbors share no link.
    pub skipped_interconnects: usize,
    /// Selected triples that broke the sector inequality numerically.
    pub geometry_violations: usize,
    /// Number of classes: types, or channel pairs.
    pub class_count: usize,
    network: Network,
}

impl SpannerGraph {
    /// The spanner as a network over the same nodes.
    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn len(&self) -> usize {
        self.selected_links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected_links.is_empty()
    }

    /// Upper bound on the link count: three links per node, sector and class.
    pub fn size_bound(&self) -> usize {
        3 * self.config.k * self.class_count * self.network.len()
    }

    /// Explicit-link text with a header recording `k`, the variant and `t`.
    pub fn to_text(&self) -> String {
        let header = vec![
            "spanner".to_string(),
            format!("k {}", self.config.k),
            format!("variant {}", self.config.variant),
            format!("t {:.4}", self.t),
            format!("links {}", self.selected_links.len()),
            format!("skipped-interconnects {}", self.skipped_interconnects),
        ];
        serialize_with_header(&self.network, &header)
    }
}

fn classes(network: &Network, variant: SpannerVariant) -> Vec<Class> {
    match variant {
        SpannerVariant::PerType => compute_type_partition(network)
            .classes
            .iter()
            .map(|(set, _)| Class::Type(*set))
            .collect(),
        SpannerVariant::PerChannelPair => {
            let c = network.channel_count();
            let mut out = Vec::new();
            for a in 0..c {
                for b in a + 1..c {
                    out.push(Class::Pair(a, b));
                }
            }
            out
        }
    }
}

/// Sector inequality: with `|p-q| <= |p-r|`,
/// `|q-r| <= |p-r| - (1 - 2 sin(θ/2)) |p-q|`.
pub fn sector_inequality_holds(p: Point, q: Point, r: Point, theta: f64) -> bool {
    let (q, r) = if p.dist(q) <= p.dist(r) { (q, r) } else { (r, q) };
    let c = 1.0 - 2.0 * (theta / 2.0).sin();
    q.dist(r) <= p.dist(r) - c * p.dist(q) + 1e-9 * p.dist(r).max(1.0)
}

pub fn build_spanner(network: &Network, config: SpannerConfig) -> Result<SpannerGraph, SpannerError> {
    let config = SpannerConfig::new(config.k, config.variant)?;
    let t = stretch_factor(config.k)?;
    let theta = config.theta();
    let classes = classes(network, config.variant);
    let mut selected = BTreeSet::new();
    let mut skipped = 0;
    let mut violations = 0;
    for v in 0..network.len() {
        let p = network.node(v).pos;
        for sector in 0..config.k {
            for &class in &classes {
                let near = two_nearest(network, config.k, v, sector, class);
                for &w in &near {
                    selected.insert(network.link_between(v, w).expect("neighbor link"));
                }
                if let [q, r] = near[..] {
                    match network.link_between(q, r) {
                        Some(l) => {
                            selected.insert(l);
                        }
                        None => skipped += 1,
                    }
                    if !sector_inequality_holds(p, network.node(q).pos, network.node(r).pos, theta) {
                        violations += 1;
                    }
                }
            }
        }
    }
    let selected_links: Vec<LinkId> = selected.into_iter().collect();
    let sub = network.subnetwork(selected_links.iter().copied());
    Ok(SpannerGraph {
        config,
        selected_links,
        t,
        skipped_interconnects: skipped,
        geometry_violations: violations,
        class_count: classes.len(),
        network: sub,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCheck {
    pub s: NodeId,
    pub d: NodeId,
    pub network_weight: Weight,
    pub spanner_weight: Option<Weight>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpannerReport {
    /// Pairs whose optimum has two or more links, all checked.
    pub checked: usize,
    /// Pairs whose optimum is a single link, left out.
    pub single_link: usize,
    /// Pairs with no CDC path in the network.
    pub disconnected: usize,
    pub max_ratio: f64,
    pub violations: Vec<PairCheck>,
}

impl SpannerReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SpannerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "checked {} single-link {} disconnected {} max-ratio {:.6} violations {}",
            self.checked,
            self.single_link,
            self.disconnected,
            self.max_ratio,
            self.violations.len()
        )
    }
}

/// Compares shortest CDC distances in the spanner against the network for
/// each pair, against `t` rounded up to 12 significant digits.
pub fn verify_spanner(network: &Network, spanner: &SpannerGraph, pairs: &[(NodeId, NodeId)]) -> SpannerReport {
    let bound = ScaledStretch::from_t(spanner.t);
    let mut report = SpannerReport::default();
    for &(s, d) in pairs {
        if s == d {
            continue;
        }
        let full = shortest_cdc(network, s, d, SearchOptions::default()).expect("valid pair");
        let Some(path) = full.path else {
            report.disconnected += 1;
            continue;
        };
        if path.len() < 2 {
            report.single_link += 1;
            continue;
        }
        report.checked += 1;
        let sp = shortest_cdc(spanner.network(), s, d, SearchOptions::default())
            .expect("valid pair")
            .weight();
        let ok = sp.is_some_and(|w| bound.bounds(w, path.total_weight));
        if let Some(w) = sp {
            let ratio = if path.total_weight == 0 { 1.0 } else { w as f64 / path.total_weight as f64 };
            report.max_ratio = report.max_ratio.max(ratio);
        }
        if !ok {
            report.violations.push(PairCheck {
                s,
                d,
                network_weight: path.total_weight,
                spanner_weight: sp,
            });
        }
    }
    report
}
