//! Dual certificate rebuilt from search distances.
//!
//! With all initial duals at zero and total dual change `D` (the last accepted
//! minimum), an outer vertex has `y = D - d_S`, an inner vertex outside any
//! blossom `y = d_T - D`, a free vertex `y = 0`, and a blossom closed at `D_f`
//! has `z = -2 (D_end - D_f)`, where `D_end` is the closing time of its
//! enclosing blossom or `D` for an outermost one. An edge `(u, v)` is tight
//! when `y(u) + y(v) + sum of z over blossoms holding both = w(u, v)`.
//!
//! The certificate is valid when matched edges are tight, no edge has negative
//! slack, and every inner-labeled `u` satisfies
//! `d_T[u] = y(s) + y(u) + sum of z over blossoms holding u`.
//! All quantities are in half units.

use crate::expand::SubId;
use crate::search::{BlossomId, SearchState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    /// Vertex duals, doubled.
    pub y: Vec<i128>,
    /// Blossom duals, doubled, indexed by blossom id.
    pub z: Vec<i128>,
    /// Worst `|y(u) + y(v) + z-sum|` over matched edges.
    pub tightness_violation: i128,
    /// Worst `|d_T[u] - (y(s) + y(u) + z-sum)|` over inner-labeled vertices.
    pub distance_violation: i128,
    /// Most negative edge slack, as a non-negative number.
    pub feasibility_violation: i128,
    pub max_violation: i128,
}

impl DualCertificate {
    pub fn is_valid(&self) -> bool {
        self.max_violation == 0
    }
}

pub fn dual_certificate(state: &SearchState<'_>) -> DualCertificate {
    let graph = state.graph();
    let matching = state.matching();
    let now = state.dual_time().0 as i128;

    let y: Vec<i128> = (0..graph.len())
        .map(|v| match (state.d_s(v), state.d_t(v)) {
            (Some(ds), _) => now - 2 * ds as i128,
            (None, Some(dt)) => 2 * dt as i128 - now,
            (None, None) => 0,
        })
        .collect();

    let blossoms = state.blossoms();
    let z: Vec<i128> = blossoms
        .iter()
        .map(|b| {
            let end = b
                .parent
                .map_or(now, |p| blossoms[p].formed_at.0 as i128);
            -2 * (end - b.formed_at.0 as i128)
        })
        .collect();
    // Sum of z from each blossom up to the outermost one.
    let mut cumulative = vec![0i128; blossoms.len()];
    let mut depth = vec![0usize; blossoms.len()];
    // Parents are always created after their children.
    for id in (0..blossoms.len()).rev() {
        let (up_sum, up_depth) = match blossoms[id].parent {
            Some(p) => (cumulative[p], depth[p] + 1),
            None => (0, 0),
        };
        cumulative[id] = z[id] + up_sum;
        depth[id] = up_depth;
    }
    let chain_sum = |b: Option<BlossomId>| b.map_or(0, |b| cumulative[b]);
    let common = |a: Option<BlossomId>, b: Option<BlossomId>| -> Option<BlossomId> {
        let (mut a, mut b) = (a?, b?);
        while depth[a] > depth[b] {
            a = blossoms[a].parent?;
        }
        while depth[b] > depth[a] {
            b = blossoms[b].parent?;
        }
        while a != b {
            a = blossoms[a].parent?;
            b = blossoms[b].parent?;
        }
        Some(a)
    };
    let pair_sum = |u: SubId, v: SubId| chain_sum(common(state.inner_blossom(u), state.inner_blossom(v)));

    let mut tightness_violation = 0;
    for (u, v) in matching.pairs() {
        let eid = graph.edge_between(u, v).expect("matched edge exists");
        let w2 = 2 * graph.edge(eid).weight as i128;
        let lhs = y[u] + y[v] + pair_sum(u, v);
        tightness_violation = tightness_violation.max((lhs - w2).abs());
    }

    let mut feasibility_violation = 0;
    for e in graph.edges() {
        let slack = 2 * e.weight as i128 - y[e.u] - y[e.v] - pair_sum(e.u, e.v);
        feasibility_violation = feasibility_violation.max(-slack);
    }

    let s = graph.source();
    let mut distance_violation = 0;
    for u in 0..graph.len() {
        if let Some(dt) = state.d_t(u) {
            let rhs = y[s] + y[u] + chain_sum(state.inner_blossom(u));
            distance_violation = distance_violation.max((2 * dt as i128 - rhs).abs());
        }
    }

    DualCertificate {
        max_violation: tightness_violation
            .max(distance_violation)
            .max(feasibility_violation),
        y,
        z,
        tightness_violation,
        distance_violation,
        feasibility_violation,
    }
}
