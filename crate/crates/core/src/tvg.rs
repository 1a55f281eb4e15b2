//! Graphs whose edges hold only during given spans of time.
//!
//! A `TimeVaryingGraph` has a fixed node set, a lifetime interval, and one
//! `TemporalEdge` per node pair that has ever been declared. Each edge keeps
//! its presence as a normalized `IntervalSet` plus an optional
//! piecewise-constant traversal delay. From those the graph derives its
//! footprint (the static graph of pairs that were ever in contact), the
//! characteristic dates where topology changes, and the snapshot sequence
//! between consecutive such dates.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::interval::{IntervalSet, TimeError, TimeInstant, TimeInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TvgError {
    Time(TimeError),
    UnknownNode(NodeId),
    SelfLoop(NodeId),
    OutsideLifetime {
        contact: TimeInterval,
        lifetime: TimeInterval,
    },
    EdgeAbsent(NodeId, NodeId),
    /// latency queried at an instant where the edge is not present
    NotPresent(TimeInstant),
    LatencyOutsidePresence(TimeInterval),
    LatencyOverlap(TimeInterval),
    InvalidLatency(f64),
    DuplicateNodeLabel(String),
}

impl fmt::Display for TvgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TvgError::Time(e) => write!(f, "{e}"),
            TvgError::UnknownNode(n) => write!(f, "unknown node {n}"),
            TvgError::SelfLoop(n) => write!(f, "self-loop on node {n}"),
            TvgError::OutsideLifetime { contact, lifetime } => {
                write!(f, "contact {contact} outside lifetime {lifetime}")
            }
            TvgError::EdgeAbsent(u, v) => write!(f, "no edge between {u} and {v}"),
            TvgError::NotPresent(t) => write!(f, "edge not present at {t}"),
            TvgError::LatencyOutsidePresence(iv) => {
                write!(f, "latency piece {iv} not covered by presence")
            }
            TvgError::LatencyOverlap(iv) => {
                write!(f, "latency piece {iv} overlaps an existing piece")
            }
            TvgError::InvalidLatency(v) => write!(f, "invalid latency {v}"),
            TvgError::DuplicateNodeLabel(l) => write!(f, "duplicate node label {l:?}"),
        }
    }
}

impl core::error::Error for TvgError {}

impl From<TimeError> for TvgError {
    fn from(e: TimeError) -> TvgError {
        TvgError::Time(e)
    }
}

/// Appearance and disappearance dates of one edge, with their sorted union.
/// A presence interval that never closes contributes no disappearance date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDates {
    pub appearances: Vec<TimeInstant>,
    pub disappearances: Vec<TimeInstant>,
    pub combined: Vec<TimeInstant>,
}

/// One undirected or directed link and the times it can be used.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalEdge {
    endpoints: (NodeId, NodeId),
    presence: IntervalSet,
    // sorted by start, pairwise disjoint, each piece covered by presence
    latency: Vec<(TimeInterval, f64)>,
    label: Option<String>,
}

impl TemporalEdge {
    fn new(endpoints: (NodeId, NodeId)) -> TemporalEdge {
        TemporalEdge {
            endpoints,
            presence: IntervalSet::new(),
            latency: Vec::new(),
            label: None,
        }
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        self.endpoints
    }

    /// The set of dates at which the edge is available.
    pub fn available_dates(&self) -> &IntervalSet {
        &self.presence
    }

    pub fn is_present(&self, t: TimeInstant) -> bool {
        self.presence.contains(t)
    }

    /// Traversal delay at `t`. Zero unless a latency piece covers `t`;
    /// querying outside the presence set is an error, not zero.
    pub fn latency_at(&self, t: TimeInstant) -> Result<f64, TvgError> {
        if !self.presence.contains(t) {
            return Err(TvgError::NotPresent(t));
        }
        let idx = self.latency.partition_point(|(iv, _)| iv.start() <= t);
        if idx > 0 && self.latency[idx - 1].0.contains(t) {
            Ok(self.latency[idx - 1].1)
        } else {
            Ok(0.0)
        }
    }

    pub fn latency_pieces(&self) -> &[(TimeInterval, f64)] {
        &self.latency
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    /// Interval starts, finite interval ends, and their sorted union.
    pub fn characteristic_dates(&self) -> EdgeDates {
        let mut appearances = Vec::new();
        let mut disappearances = Vec::new();
        for iv in &self.presence {
            appearances.push(iv.start());
            if !iv.is_unbounded() {
                disappearances.push(iv.end());
            }
        }
        let mut combined: Vec<TimeInstant> = appearances
            .iter()
            .chain(disappearances.iter())
            .copied()
            .collect();
        combined.sort();
        combined.dedup();
        EdgeDates {
            appearances,
            disappearances,
            combined,
        }
    }

    fn add_presence(&mut self, iv: TimeInterval) {
        self.presence.insert(iv);
    }

    fn set_latency(&mut self, piece: TimeInterval, delay: f64) -> Result<(), TvgError> {
        if !(delay >= 0.0 && delay.is_finite()) {
            return Err(TvgError::InvalidLatency(delay));
        }
        if !self.presence.covers(&piece) {
            return Err(TvgError::LatencyOutsidePresence(piece));
        }
        if self.latency.iter().any(|(iv, _)| iv.overlaps(&piece)) {
            return Err(TvgError::LatencyOverlap(piece));
        }
        let idx = self
            .latency
            .partition_point(|(iv, _)| iv.start() < piece.start());
        self.latency.insert(idx, (piece, delay));
        Ok(())
    }
}

/// Footprint or snapshot: which pairs are linked, with no time attached.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StaticGraph {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
}

impl StaticGraph {
    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains(&(u, v)) || self.edges.contains(&(v, u))
    }

    /// Connectivity ignoring edge direction. Empty and singleton graphs
    /// count as connected.
    pub fn is_connected(&self) -> bool {
        let Some(&first) = self.nodes.iter().next() else {
            return true;
        };
        let mut adjacency: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for &(u, v) in &self.edges {
            adjacency.entry(u).or_default().push(v);
            adjacency.entry(v).or_default().push(u);
        }
        let mut seen = BTreeSet::new();
        let mut queue = alloc::vec![first];
        seen.insert(first);
        while let Some(n) = queue.pop() {
            if let Some(next) = adjacency.get(&n) {
                for &m in next {
                    if seen.insert(m) {
                        queue.push(m);
                    }
                }
            }
        }
        seen.len() == self.nodes.len()
    }
}

/// Node set, lifetime, and temporal edges. Nodes are dense indices handed
/// out by `add_node`; labels are optional and unique when given.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeVaryingGraph {
    labels: Vec<Option<String>>,
    by_label: BTreeMap<String, NodeId>,
    edges: BTreeMap<(NodeId, NodeId), TemporalEdge>,
    lifetime: TimeInterval,
    directed: bool,
}

impl TimeVaryingGraph {
    pub fn new(lifetime: TimeInterval) -> TimeVaryingGraph {
        TimeVaryingGraph {
            labels: Vec::new(),
            by_label: BTreeMap::new(),
            edges: BTreeMap::new(),
            lifetime,
            directed: false,
        }
    }

    pub fn new_directed(lifetime: TimeInterval) -> TimeVaryingGraph {
        TimeVaryingGraph {
            directed: true,
            ..TimeVaryingGraph::new(lifetime)
        }
    }

    pub fn lifetime(&self) -> TimeInterval {
        self.lifetime
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(None);
        id
    }

    pub fn add_labeled_node(&mut self, label: &str) -> Result<NodeId, TvgError> {
        if self.by_label.contains_key(label) {
            return Err(TvgError::DuplicateNodeLabel(String::from(label)));
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(Some(String::from(label)));
        self.by_label.insert(String::from(label), id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len() as u32).map(NodeId)
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        n.index() < self.labels.len()
    }

    pub fn label(&self, n: NodeId) -> Option<&str> {
        self.labels.get(n.index()).and_then(|l| l.as_deref())
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    fn key(&self, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
        if self.directed || u <= v { (u, v) } else { (v, u) }
    }

    fn check_pair(&self, u: NodeId, v: NodeId) -> Result<(), TvgError> {
        if !self.contains_node(u) {
            return Err(TvgError::UnknownNode(u));
        }
        if !self.contains_node(v) {
            return Err(TvgError::UnknownNode(v));
        }
        if u == v {
            return Err(TvgError::SelfLoop(u));
        }
        Ok(())
    }

    /// Registers the edge slot without giving it any presence. Such an edge
    /// answers queries but does not reach the footprint.
    pub fn declare_edge(&mut self, u: NodeId, v: NodeId) -> Result<(), TvgError> {
        self.check_pair(u, v)?;
        let key = self.key(u, v);
        self.edges.entry(key).or_insert_with(|| TemporalEdge::new(key));
        Ok(())
    }

    /// Records that `u` and `v` are linked over `[t1, t2)`. Overlapping or
    /// abutting contacts merge into the edge's presence set.
    pub fn add_contact(
        &mut self,
        u: NodeId,
        v: NodeId,
        t1: TimeInstant,
        t2: TimeInstant,
    ) -> Result<&TemporalEdge, TvgError> {
        self.check_pair(u, v)?;
        let contact = TimeInterval::new(t1, t2)?;
        if !self.lifetime.contains_interval(&contact) {
            return Err(TvgError::OutsideLifetime {
                contact,
                lifetime: self.lifetime,
            });
        }
        let key = self.key(u, v);
        let edge = self.edges.entry(key).or_insert_with(|| TemporalEdge::new(key));
        edge.add_presence(contact);
        Ok(edge)
    }

    /// Assigns a constant traversal delay over `piece`, which must fall
    /// inside the edge's presence and not collide with earlier pieces.
    pub fn set_latency(
        &mut self,
        u: NodeId,
        v: NodeId,
        piece: TimeInterval,
        delay: f64,
    ) -> Result<(), TvgError> {
        self.check_pair(u, v)?;
        let key = self.key(u, v);
        match self.edges.get_mut(&key) {
            Some(edge) => edge.set_latency(piece, delay),
            None => Err(TvgError::EdgeAbsent(u, v)),
        }
    }

    pub fn edge(&self, u: NodeId, v: NodeId) -> Option<&TemporalEdge> {
        self.edges.get(&self.key(u, v))
    }

    pub fn edge_mut(&mut self, u: NodeId, v: NodeId) -> Option<&mut TemporalEdge> {
        let key = self.key(u, v);
        self.edges.get_mut(&key)
    }

    pub fn edges(&self) -> impl Iterator<Item = &TemporalEdge> {
        self.edges.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incident edges usable from `n`: all of them when undirected, outgoing
    /// only when directed. Yields the far endpoint.
    pub fn neighbors(&self, n: NodeId) -> impl Iterator<Item = (NodeId, &TemporalEdge)> {
        self.edges.values().filter_map(move |edge| {
            let (u, v) = edge.endpoints;
            if u == n {
                Some((v, edge))
            } else if v == n && !self.directed {
                Some((u, edge))
            } else {
                None
            }
        })
    }

    /// Whether `u` and `v` are linked at `t`. An edge that was never added
    /// is simply absent, so the answer is false rather than an error.
    pub fn presence(&self, u: NodeId, v: NodeId, t: TimeInstant) -> bool {
        self.edge(u, v).is_some_and(|e| e.is_present(t))
    }

    pub fn latency_at(&self, u: NodeId, v: NodeId, t: TimeInstant) -> Result<f64, TvgError> {
        match self.edge(u, v) {
            Some(e) => e.latency_at(t),
            None => Err(TvgError::EdgeAbsent(u, v)),
        }
    }

    /// The static graph of every pair that is in contact at some point.
    /// Keeps all nodes, drops declared edges with empty presence.
    pub fn footprint(&self) -> StaticGraph {
        StaticGraph {
            nodes: self.nodes().collect(),
            edges: self
                .edges
                .values()
                .filter(|e| !e.available_dates().is_empty())
                .map(|e| e.endpoints)
                .collect(),
        }
    }

    /// Sorted union of every edge's characteristic dates, deduplicated.
    pub fn characteristic_dates(&self) -> Vec<TimeInstant> {
        let mut dates: Vec<TimeInstant> = self
            .edges
            .values()
            .flat_map(|e| e.characteristic_dates().combined)
            .collect();
        dates.sort();
        dates.dedup();
        dates
    }

    /// The graph as a sequence of static views, one per span between
    /// consecutive characteristic dates, extended to cover the lifetime.
    pub fn snapshots(&self) -> Vec<(TimeInterval, StaticGraph)> {
        let mut bounds: Vec<TimeInstant> = self.characteristic_dates();
        bounds.insert(0, self.lifetime.start());
        bounds.push(self.lifetime.end());
        bounds.sort();
        bounds.dedup();

        let nodes: BTreeSet<NodeId> = self.nodes().collect();
        bounds
            .windows(2)
            .map(|w| {
                let span = TimeInterval::new(w[0], w[1]).expect("bounds strictly increase");
                let edges = self
                    .edges
                    .values()
                    .filter(|e| e.is_present(span.start()))
                    .map(|e| e.endpoints)
                    .collect();
                (
                    span,
                    StaticGraph {
                        nodes: nodes.clone(),
                        edges,
                    },
                )
            })
            .collect()
    }
}
