//! Time-respecting walks over a time-varying graph.
//!
//! A journey is a walk whose hops depart in nondecreasing time order, each
//! hop leaving while its edge is present and no earlier than the previous
//! hop's arrival (departure plus traversal delay). Waiting at a node is
//! free. Reachability under journeys is inherently asymmetric: edges that
//! exist in the wrong time order connect the footprint without connecting
//! any actual journey.
//!
//! `foremost_journey` returns the earliest-arrival journey, breaking ties by
//! fewer hops and then by lexicographically smallest visited-node sequence.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::fmt;

use crate::interval::{TimeInstant, TimeInterval};
use crate::tvg::{NodeId, TimeVaryingGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub from: NodeId,
    pub to: NodeId,
    pub departure: TimeInstant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Journey {
    pub source: NodeId,
    pub hops: Vec<Hop>,
    /// departure of the last hop plus its delay; for an empty journey, the
    /// instant the search started from
    pub arrival: TimeInstant,
}

impl Journey {
    pub fn destination(&self) -> NodeId {
        self.hops.last().map(|h| h.to).unwrap_or(self.source)
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JourneyError {
    UnknownNode(NodeId),
    UnknownEdge(NodeId, NodeId),
}

impl fmt::Display for JourneyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JourneyError::UnknownNode(n) => write!(f, "unknown node {n}"),
            JourneyError::UnknownEdge(u, v) => write!(f, "no edge between {u} and {v}"),
        }
    }
}

impl core::error::Error for JourneyError {}

fn check_node(g: &TimeVaryingGraph, n: NodeId) -> Result<(), JourneyError> {
    if g.contains_node(n) {
        Ok(())
    } else {
        Err(JourneyError::UnknownNode(n))
    }
}

/// Validates a hop sequence as a journey from `source`: hops chain, each
/// departs while its edge is present, and departures respect arrival times.
/// Unknown nodes or edges are errors, not merely invalid journeys.
pub fn is_journey(
    g: &TimeVaryingGraph,
    source: NodeId,
    hops: &[Hop],
) -> Result<bool, JourneyError> {
    check_node(g, source)?;
    for hop in hops {
        check_node(g, hop.from)?;
        check_node(g, hop.to)?;
        if g.edge(hop.from, hop.to).is_none() {
            return Err(JourneyError::UnknownEdge(hop.from, hop.to));
        }
    }

    let mut at = source;
    let mut ready = None::<TimeInstant>;
    for hop in hops {
        if hop.from != at {
            return Ok(false);
        }
        let edge = g.edge(hop.from, hop.to).expect("checked above");
        if !edge.is_present(hop.departure) {
            return Ok(false);
        }
        if let Some(r) = ready {
            if hop.departure < r {
                return Ok(false);
            }
        }
        let delay = edge.latency_at(hop.departure).expect("presence checked");
        ready = Some(hop.departure.after(delay));
        at = hop.to;
    }
    Ok(true)
}

// Search state ordered by (arrival, hop count, visited nodes, departures).
// The first two plus the node sequence implement the documented tie-break;
// the departure list pins a total order so the search is deterministic.
struct State {
    arrival: TimeInstant,
    nodes: Vec<NodeId>,
    hops: Vec<Hop>,
}

impl State {
    fn position(&self) -> NodeId {
        *self.nodes.last().expect("never empty")
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.arrival
            .cmp(&other.arrival)
            .then_with(|| self.hops.len().cmp(&other.hops.len()))
            .then_with(|| self.nodes.cmp(&other.nodes))
            .then_with(|| {
                self.hops
                    .iter()
                    .map(|h| h.departure)
                    .cmp(other.hops.iter().map(|h| h.departure))
            })
    }
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl Eq for State {}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.key_cmp(other))
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

/// Label-setting sweep from `source` over departures in `[dep_lo, dep_hi)`.
/// Settles each reachable node with its minimal journey under the tie-break
/// order. Waiting is free, so a node's label never improves after settling.
fn earliest_arrival_sweep(
    g: &TimeVaryingGraph,
    source: NodeId,
    dep_lo: TimeInstant,
    dep_hi: TimeInstant,
) -> BTreeMap<NodeId, Journey> {
    let mut settled: BTreeMap<NodeId, Journey> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(State {
        arrival: dep_lo,
        nodes: alloc::vec![source],
        hops: Vec::new(),
    }));

    while let Some(Reverse(state)) = heap.pop() {
        let here = state.position();
        if settled.contains_key(&here) {
            continue;
        }
        settled.insert(
            here,
            Journey {
                source,
                hops: state.hops.clone(),
                arrival: state.arrival,
            },
        );

        for (next, edge) in g.neighbors(here) {
            if settled.contains_key(&next) {
                continue;
            }
            for piece in edge.available_dates() {
                let lo = state.arrival.max(piece.start());
                let hi = piece.end().min(dep_hi);
                if lo >= hi {
                    continue;
                }
                // leave as early as possible; also try each delay boundary
                // inside the span, where a shorter delay may beat an
                // earlier departure
                let mut departures = alloc::vec![lo];
                for (piece, _) in edge.latency_pieces() {
                    for b in [piece.start(), piece.end()] {
                        if lo < b && b < hi {
                            departures.push(b);
                        }
                    }
                }
                for dep in departures {
                    let delay = edge.latency_at(dep).expect("dep lies in presence");
                    let mut nodes = state.nodes.clone();
                    nodes.push(next);
                    let mut hops = state.hops.clone();
                    hops.push(Hop {
                        from: here,
                        to: next,
                        departure: dep,
                    });
                    heap.push(Reverse(State {
                        arrival: dep.after(delay),
                        nodes,
                        hops,
                    }));
                }
            }
        }
    }
    settled
}

/// Earliest-arrival journey from `u` to `v` departing no earlier than
/// `start`. `None` when no journey exists; the empty journey when `u == v`.
pub fn foremost_journey(
    g: &TimeVaryingGraph,
    u: NodeId,
    v: NodeId,
    start: TimeInstant,
) -> Result<Option<Journey>, JourneyError> {
    check_node(g, u)?;
    check_node(g, v)?;
    let mut settled = earliest_arrival_sweep(g, u, start, TimeInstant::INFINITY);
    Ok(settled.remove(&v))
}

/// Every node some journey from `u` can reach, departing at `start` or
/// later. Always contains `u` itself.
pub fn reachability_set(
    g: &TimeVaryingGraph,
    u: NodeId,
    start: TimeInstant,
) -> Result<BTreeSet<NodeId>, JourneyError> {
    check_node(g, u)?;
    Ok(earliest_arrival_sweep(g, u, start, TimeInstant::INFINITY)
        .into_keys()
        .collect())
}

/// Nodes reachable from `u` by journeys whose departures all fall inside
/// `window`. Arrival may land past the window's end.
pub fn reachable_within(
    g: &TimeVaryingGraph,
    u: NodeId,
    window: TimeInterval,
) -> Result<BTreeSet<NodeId>, JourneyError> {
    check_node(g, u)?;
    Ok(earliest_arrival_sweep(g, u, window.start(), window.end())
        .into_keys()
        .collect())
}

/// Earliest journey from `u` to `v` departing and arriving inside `window`.
pub fn journey_within(
    g: &TimeVaryingGraph,
    u: NodeId,
    v: NodeId,
    window: TimeInterval,
) -> Result<Option<Journey>, JourneyError> {
    check_node(g, u)?;
    check_node(g, v)?;
    let mut settled = earliest_arrival_sweep(g, u, window.start(), window.end());
    Ok(settled.remove(&v).filter(|j| j.arrival < window.end()))
}

/// Which ordered pairs admit a journey departing and arriving inside the
/// window. The diagonal is always true via the empty journey.
pub struct ReachabilityMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl ReachabilityMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn reaches(&self, u: NodeId, v: NodeId) -> bool {
        self.cells[u.index() * self.n + v.index()]
    }
}

pub fn mutual_reachability_matrix(
    g: &TimeVaryingGraph,
    window: TimeInterval,
) -> ReachabilityMatrix {
    let n = g.node_count();
    let mut cells = alloc::vec![false; n * n];
    for u in g.nodes() {
        let settled = earliest_arrival_sweep(g, u, window.start(), window.end());
        for (v, journey) in settled {
            if journey.arrival < window.end() {
                cells[u.index() * n + v.index()] = true;
            }
        }
    }
    ReachabilityMatrix { n, cells }
}

/// True when every ordered pair drawn from `nodes` admits a journey inside
/// the window.
pub fn is_temporally_connected(
    g: &TimeVaryingGraph,
    nodes: &BTreeSet<NodeId>,
    window: TimeInterval,
) -> Result<bool, JourneyError> {
    for &n in nodes {
        check_node(g, n)?;
    }
    for &u in nodes {
        let settled = earliest_arrival_sweep(g, u, window.start(), window.end());
        for &v in nodes {
            match settled.get(&v) {
                Some(j) if j.arrival < window.end() => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}
