//! Minimum-weight alternating-path search over an expanded graph.
//!
//! The search grows an alternating tree from the source in order of
//! non-decreasing distance. Every tree vertex carries `d_S` (distance at which
//! it became outer) and/or `d_T` (distance at which it became inner). At each
//! step the globally smallest candidate value is accepted:
//!
//! * outer `u` to free `v`: `d_S[u] + w(u, v)`; grows the tree by `v` and its
//!   mate, or reaches the destination;
//! * outer `u` to outer `v` in different blossoms: `(d_S[u] + d_S[v] + w) / 2`;
//!   closes a blossom.
//!
//! Values are carried doubled ([`HalfUnits`]) so all arithmetic is exact.
//! Outer vertices that started inner record the blossom-closing edge, which is
//! enough to rebuild the vertex-simple alternating path to the source.

mod certificate;
mod trace;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

pub use certificate::{dual_certificate, DualCertificate};
pub use trace::{HalfUnits, Phase, SearchTrace, TraceEntry};

use crate::error::{ExpandError, PathError};
use crate::expand::{contract_path, expand, ExpandedGraph, Matching, SubId};
use crate::network::{Network, NodeId, Weight};
use crate::path::CdcPath;

pub type BlossomId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// Outer: has a finite `d_S` (possibly also `d_T` when inside a blossom).
    S,
    /// Inner and not in any blossom.
    T,
    /// Not yet reached.
    F,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blossom {
    pub base: SubId,
    pub members: Vec<SubId>,
    pub parent: Option<BlossomId>,
    pub children: Vec<BlossomId>,
    /// The accepted minimum that closed this blossom.
    pub formed_at: HalfUnits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    ToF,
    SToS,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FindMin {
    Candidate {
        u: SubId,
        v: SubId,
        minval: HalfUnits,
        kind: CandidateKind,
    },
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Grew,
    Blossomed(BlossomId),
    Reached,
    Exhausted,
}

/// Candidate value, doubled, for outer `u` at distance `d_s_u` and edge
/// weight `w`: `d_S[u] + w` toward a free vertex, `(d_S[u] + d_S[v] + w) / 2`
/// toward an outer vertex at distance `d_s_v`.
pub fn candidate_value(d_s_u: Weight, d_s_v: Option<Weight>, w: Weight) -> HalfUnits {
    match d_s_v {
        Some(dv) => HalfUnits(d_s_u + dv + w),
        None => HalfUnits(2 * (d_s_u + w)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    key: HalfUnits,
    lo: SubId,
    hi: SubId,
    u: SubId,
    v: SubId,
    to_outer: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Expand links with three or more channels using only three of them.
    pub reduced: bool,
    /// Rebuild and check the dual certificate after every accepted step.
    pub verify_certificate: bool,
}

/// Per-query mutable state of the alternating-path search.
#[derive(Clone, Debug)]
pub struct SearchState<'g> {
    graph: &'g ExpandedGraph,
    matching: &'g Matching,
    d_s: Vec<Option<Weight>>,
    d_t: Vec<Option<Weight>>,
    p_s: Vec<Option<SubId>>,
    p_t: Vec<Option<SubId>>,
    bridge: Vec<Option<(SubId, SubId)>>,
    // Union-find over blossom membership; representative data below.
    uf_parent: Vec<SubId>,
    uf_size: Vec<usize>,
    set_base: Vec<SubId>,
    set_members: Vec<Vec<SubId>>,
    set_blossom: Vec<Option<BlossomId>>,
    inner_blossom: Vec<Option<BlossomId>>,
    blossoms: Vec<Blossom>,
    examined: HashSet<(SubId, SubId)>,
    heap: BinaryHeap<Reverse<Candidate>>,
    dual_time: HalfUnits,
    trace: SearchTrace,
    reached: bool,
    steps: usize,
    mark: Vec<u32>,
    mark_epoch: u32,
}

impl<'g> SearchState<'g> {
    pub fn new(graph: &'g ExpandedGraph, matching: &'g Matching) -> Self {
        let n = graph.len();
        let mut state = SearchState {
            graph,
            matching,
            d_s: vec![None; n],
            d_t: vec![None; n],
            p_s: vec![None; n],
            p_t: vec![None; n],
            bridge: vec![None; n],
            uf_parent: (0..n).collect(),
            uf_size: vec![1; n],
            set_base: (0..n).collect(),
            set_members: (0..n).map(|v| vec![v]).collect(),
            set_blossom: vec![None; n],
            inner_blossom: vec![None; n],
            blossoms: Vec::new(),
            examined: HashSet::new(),
            heap: BinaryHeap::new(),
            dual_time: HalfUnits(0),
            trace: SearchTrace::default(),
            reached: false,
            steps: 0,
            mark: vec![0; n],
            mark_epoch: 0,
        };
        let s = graph.source();
        state.d_s[s] = Some(0);
        state.push_candidates(s);
        state
    }

    pub fn graph(&self) -> &'g ExpandedGraph {
        self.graph
    }

    pub fn matching(&self) -> &'g Matching {
        self.matching
    }

    pub fn label(&self, v: SubId) -> Label {
        if self.d_s[v].is_some() {
            Label::S
        } else if self.d_t[v].is_some() {
            Label::T
        } else {
            Label::F
        }
    }

    pub fn d_s(&self, v: SubId) -> Option<Weight> {
        self.d_s[v]
    }

    pub fn d_t(&self, v: SubId) -> Option<Weight> {
        self.d_t[v]
    }

    pub fn p_s(&self, v: SubId) -> Option<SubId> {
        self.p_s[v]
    }

    pub fn p_t(&self, v: SubId) -> Option<SubId> {
        self.p_t[v]
    }

    /// The blossom-closing edge recorded when `v` turned from inner to outer,
    /// oriented with `v`'s side first.
    pub fn bridge(&self, v: SubId) -> Option<(SubId, SubId)> {
        self.bridge[v]
    }

    /// Base of the outermost blossom containing `v` (or `v` itself).
    pub fn base_of(&self, v: SubId) -> SubId {
        self.set_base[self.find(v)]
    }

    pub fn is_examined(&self, a: SubId, b: SubId) -> bool {
        self.examined.contains(&(a.min(b), a.max(b)))
    }

    pub fn blossoms(&self) -> &[Blossom] {
        &self.blossoms
    }

    /// Innermost blossom containing `v`.
    pub fn inner_blossom(&self, v: SubId) -> Option<BlossomId> {
        self.inner_blossom[v]
    }

    /// The last accepted minimum, i.e. the total dual change so far.
    pub fn dual_time(&self) -> HalfUnits {
        self.dual_time
    }

    pub fn trace(&self) -> &SearchTrace {
        &self.trace
    }

    pub fn is_reached(&self) -> bool {
        self.reached
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn find(&self, mut v: SubId) -> SubId {
        while self.uf_parent[v] != v {
            v = self.uf_parent[v];
        }
        v
    }

    fn union(&mut self, a: SubId, b: SubId) -> SubId {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        let (big, small) = if self.uf_size[ra] >= self.uf_size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.uf_parent[small] = big;
        self.uf_size[big] += self.uf_size[small];
        let moved = std::mem::take(&mut self.set_members[small]);
        self.set_members[big].extend(moved);
        big
    }

    fn push_candidates(&mut self, x: SubId) {
        let ds = self.d_s[x].expect("outer vertex");
        for &(y, eid) in self.graph.neighbors(x) {
            let w = self.graph.edge(eid).weight;
            let (key, to_outer) = match self.label(y) {
                Label::S => (candidate_value(ds, self.d_s[y], w), true),
                Label::F => (candidate_value(ds, None, w), false),
                Label::T => continue,
            };
            self.heap.push(Reverse(Candidate {
                key,
                lo: x.min(y),
                hi: x.max(y),
                u: x,
                v: y,
                to_outer,
            }));
        }
    }

    fn mark_examined(&mut self, a: SubId, b: SubId) {
        self.examined.insert((a.min(b), a.max(b)));
    }

    /// The smallest candidate value over unexamined pairs. Pairs of outer
    /// vertices already in the same blossom are marked examined and skipped.
    /// Ties are broken by the smaller, then the larger sub-node id.
    pub fn findmin(&mut self) -> FindMin {
        while let Some(&Reverse(c)) = self.heap.peek() {
            if self.is_examined(c.lo, c.hi) {
                self.heap.pop();
                continue;
            }
            let live = match (c.to_outer, self.label(c.v)) {
                (false, Label::F) => true,
                (true, Label::S) => {
                    if self.find(c.u) == self.find(c.v) {
                        self.mark_examined(c.u, c.v);
                        false
                    } else {
                        true
                    }
                }
                // Stale: the far end changed label since this entry was pushed.
                _ => false,
            };
            if !live {
                self.heap.pop();
                continue;
            }
            return FindMin::Candidate {
                u: c.u,
                v: c.v,
                minval: c.key,
                kind: if c.to_outer {
                    CandidateKind::SToS
                } else {
                    CandidateKind::ToF
                },
            };
        }
        FindMin::Exhausted
    }

    fn weight(&self, u: SubId, v: SubId) -> Weight {
        let eid = self.graph.edge_between(u, v).expect("edge");
        self.graph.edge(eid).weight
    }

    /// Adds free `v` to the inner set and its mate to the outer set.
    pub fn grow(&mut self, u: SubId, v: SubId) {
        assert_eq!(self.label(u), Label::S, "grow from non-outer vertex");
        assert_eq!(self.label(v), Label::F, "grow to non-free vertex");
        let mate = self.matching.mate(v).expect("free vertex other than the destination is matched");
        let dt = self.d_s[u].expect("outer") + self.weight(u, v);
        self.d_t[v] = Some(dt);
        self.d_s[mate] = Some(dt);
        self.p_s[mate] = Some(v);
        self.p_t[v] = Some(u);
        self.mark_examined(u, v);
        self.push_candidates(mate);
    }

    /// Labels the destination from outer `u`.
    fn reach(&mut self, u: SubId, v: SubId) {
        debug_assert_eq!(v, self.graph.dest());
        self.d_t[v] = Some(self.d_s[u].expect("outer") + self.weight(u, v));
        self.p_t[v] = Some(u);
        self.mark_examined(u, v);
        self.reached = true;
    }

    fn parent_base(&self, b: SubId) -> Option<SubId> {
        if b == self.graph.source() {
            return None;
        }
        let t = self.matching.mate(b).expect("non-root base is matched");
        let up = self.p_t[t].expect("inner vertex has a tree parent");
        Some(self.base_of(up))
    }

    /// Shrinks the odd cycle closed by outer–outer edge `(u, v)` into a new
    /// outermost blossom.
    pub fn discover_blossom(&mut self, u: SubId, v: SubId) -> BlossomId {
        assert_eq!(self.label(u), Label::S);
        assert_eq!(self.label(v), Label::S);
        assert_ne!(self.find(u), self.find(v), "edge inside one blossom");
        let key = HalfUnits(self.d_s[u].unwrap() + self.d_s[v].unwrap() + self.weight(u, v));

        // Walk both ancestries alternately until one side meets a base the
        // other already marked.
        self.mark_epoch += 1;
        let (ep_u, ep_v) = (2 * self.mark_epoch, 2 * self.mark_epoch + 1);
        self.mark_epoch += 1;
        let mut cur = [Some(self.base_of(u)), Some(self.base_of(v))];
        let epochs = [ep_u, ep_v];
        let top = 'walk: loop {
            for side in 0..2 {
                if let Some(b) = cur[side] {
                    if self.mark[b] == epochs[1 - side] {
                        break 'walk b;
                    }
                    self.mark[b] = epochs[side];
                    cur[side] = self.parent_base(b);
                }
            }
            assert!(cur[0].is_some() || cur[1].is_some(), "ancestries never meet");
        };

        let mut merged_bases = vec![top];
        let mut converted = Vec::new();
        for (start, far) in [(u, v), (v, u)] {
            let mut b = self.base_of(start);
            while b != top {
                merged_bases.push(b);
                let t = self.matching.mate(b).expect("matched base");
                converted.push((t, start, far));
                let up = self.p_t[t].expect("tree parent");
                b = self.base_of(up);
            }
        }

        let children: Vec<BlossomId> = merged_bases
            .iter()
            .filter_map(|&b| self.set_blossom[self.find(b)])
            .collect();
        let id = self.blossoms.len();
        let mut rep = self.find(top);
        for &b in &merged_bases[1..] {
            rep = self.union(rep, b);
        }
        for &(t, _, _) in &converted {
            rep = self.union(rep, t);
        }
        self.set_base[rep] = top;
        self.set_blossom[rep] = Some(id);
        for &c in &children {
            self.blossoms[c].parent = Some(id);
        }

        let mut members = self.set_members[rep].clone();
        members.sort_unstable();
        assert!(members.len() % 2 == 1, "blossom has even size");
        for &w in &members {
            if self.inner_blossom[w].is_none() {
                self.inner_blossom[w] = Some(id);
            }
            match (self.d_s[w], self.d_t[w]) {
                (Some(ds), None) => {
                    assert!(key.0 >= ds);
                    self.d_t[w] = Some(key.0 - ds);
                }
                (None, Some(_)) | (Some(_), Some(_)) => {}
                (None, None) => unreachable!("free vertex inside a blossom"),
            }
        }
        for &(t, near, far) in &converted {
            let dt = self.d_t[t].expect("inner");
            assert!(key.0 >= dt);
            self.d_s[t] = Some(key.0 - dt);
            self.bridge[t] = Some((near, far));
        }
        self.blossoms.push(Blossom {
            base: top,
            members,
            parent: None,
            children,
            formed_at: key,
        });
        self.mark_examined(u, v);
        for &(t, _, _) in &converted {
            self.push_candidates(t);
        }
        id
    }

    /// Runs one FINDMIN and applies the resulting GROW, BLOSSOM or reach.
    pub fn step(&mut self) -> StepOutcome {
        if self.reached {
            return StepOutcome::Reached;
        }
        let FindMin::Candidate { u, v, minval, kind } = self.findmin() else {
            return StepOutcome::Exhausted;
        };
        assert!(minval >= self.dual_time, "accepted minima must be non-decreasing");
        self.dual_time = minval;
        self.steps += 1;
        // Outer-outer edges are recorded low id first.
        let (u, v) = match kind {
            CandidateKind::SToS => (u.min(v), u.max(v)),
            CandidateKind::ToF => (u, v),
        };
        let (phase, outcome) = match kind {
            CandidateKind::ToF if v == self.graph.dest() => {
                self.reach(u, v);
                (Phase::Reach, StepOutcome::Reached)
            }
            CandidateKind::ToF => {
                self.grow(u, v);
                (Phase::Grow, StepOutcome::Grew)
            }
            CandidateKind::SToS => {
                let id = self.discover_blossom(u, v);
                (Phase::Blossom, StepOutcome::Blossomed(id))
            }
        };
        self.trace.push(TraceEntry { phase, u, v, minval });
        outcome
    }

    /// The vertex-simple alternating source→destination path found by the
    /// search.
    pub fn extract_path(&self) -> Result<Vec<SubId>, PathError> {
        if !self.reached {
            return Err(PathError::Unreached);
        }
        Ok(augmenting_path(self, self.graph.source(), self.graph.dest()))
    }
}

impl TreeLabels for SearchState<'_> {
    fn p_s(&self, v: SubId) -> Option<SubId> {
        self.p_s[v]
    }

    fn p_t(&self, v: SubId) -> Option<SubId> {
        self.p_t[v]
    }

    fn bridge(&self, v: SubId) -> Option<(SubId, SubId)> {
        self.bridge[v]
    }
}

/// Parent labels left behind by a search, enough to rebuild alternating paths.
pub trait TreeLabels {
    /// The inner vertex that made `v` outer by growth.
    fn p_s(&self, v: SubId) -> Option<SubId>;
    /// The outer vertex that made `v` inner.
    fn p_t(&self, v: SubId) -> Option<SubId>;
    /// Blossom-closing edge for an inner vertex that turned outer, `v`'s side
    /// first.
    fn bridge(&self, v: SubId) -> Option<(SubId, SubId)>;
}

/// The alternating path from outer `x` toward the source, starting with `x`'s
/// matched edge, cut after `stop` when given.
///
/// A grown vertex continues through its inner parent; a vertex that turned
/// outer inside a blossom walks the reversed path from its own side of the
/// closing edge and then continues from the far side.
fn path_to_root(labels: &impl TreeLabels, source: SubId, x: SubId, stop: Option<SubId>, out: &mut Vec<SubId>) {
    let mut x = x;
    loop {
        if Some(x) == stop || x == source {
            out.push(x);
            return;
        }
        if let Some((near, far)) = labels.bridge(x) {
            let start = out.len();
            path_to_root(labels, source, near, Some(x), out);
            out[start..].reverse();
            x = far;
            continue;
        }
        let t = labels.p_s(x).expect("outer vertex has a label");
        out.push(x);
        out.push(t);
        if Some(t) == stop {
            return;
        }
        x = labels.p_t(t).expect("inner vertex has a tree parent");
    }
}

/// Source→destination alternating path once the destination has a parent.
pub fn augmenting_path(labels: &impl TreeLabels, source: SubId, dest: SubId) -> Vec<SubId> {
    let u = labels.p_t(dest).expect("reached destination has a parent");
    let mut path = Vec::new();
    path_to_root(labels, source, u, None, &mut path);
    path.reverse();
    path.push(dest);
    path
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub path: Option<CdcPath>,
    /// Sub-node path in the expansion (empty when no path or `s == d`).
    pub expanded_path: Vec<SubId>,
    pub trace: SearchTrace,
    pub blossoms: usize,
    pub expanded_size: usize,
    /// Largest certificate violation seen when verification was requested.
    pub max_violation: Option<i128>,
}

impl SearchOutcome {
    pub fn weight(&self) -> Option<Weight> {
        self.path.as_ref().map(|p| p.total_weight)
    }
}

/// Runs the search to completion on an already-built expansion.
pub fn run_search(
    network: &Network,
    graph: &ExpandedGraph,
    matching: &Matching,
    verify_certificate: bool,
) -> SearchOutcome {
    let mut state = SearchState::new(graph, matching);
    let mut max_violation = verify_certificate.then_some(0i128);
    let limit = 3 * graph.len() + 3;
    loop {
        let outcome = state.step();
        assert!(state.steps() <= limit, "search exceeded its iteration bound");
        if let Some(worst) = max_violation.as_mut() {
            if !matches!(outcome, StepOutcome::Exhausted) {
                *worst = (*worst).max(dual_certificate(&state).max_violation);
            }
        }
        match outcome {
            StepOutcome::Grew | StepOutcome::Blossomed(_) => continue,
            StepOutcome::Reached | StepOutcome::Exhausted => break,
        }
    }
    let (path, expanded_path) = if state.is_reached() {
        let sub = state.extract_path().expect("reached");
        let cdc = contract_path(network, graph, matching, &sub)
            .expect("extracted path is alternating and CDC-valid");
        assert_eq!(
            Some(2 * cdc.total_weight),
            state.d_t(graph.dest()).map(|d| 2 * d),
            "path weight disagrees with the destination distance"
        );
        (Some(cdc), sub)
    } else {
        (None, Vec::new())
    };
    SearchOutcome {
        path,
        expanded_path,
        blossoms: state.blossoms().len(),
        trace: state.trace,
        expanded_size: graph.len(),
        max_violation,
    }
}

/// Minimum-weight CDC path from `s` to `d`, or `None` inside the outcome when
/// no CDC path exists. `s == d` yields the empty path.
pub fn shortest_cdc(
    network: &Network,
    s: NodeId,
    d: NodeId,
    options: SearchOptions,
) -> Result<SearchOutcome, ExpandError> {
    if s == d {
        if !network.contains(s) {
            return Err(ExpandError::UnknownNode(s));
        }
        return Ok(SearchOutcome {
            path: Some(CdcPath::empty()),
            expanded_path: Vec::new(),
            trace: SearchTrace::default(),
            blossoms: 0,
            expanded_size: 0,
            max_violation: options.verify_certificate.then_some(0),
        });
    }
    let (graph, matching) = expand(network, s, d, options.reduced)?;
    Ok(run_search(network, &graph, &matching, options.verify_certificate))
}

#[cfg(test)]
mod tests;
