//! Internal representations agents hold about propositions.
//!
//! Each representation pairs an objective truth degree with a subjective
//! one and a confidence weight. The taxonomy below is graded, not
//! exclusive: the same representation can qualify as knowledge, belief and
//! opinion at once, and the primary kind just picks the strongest label.
//!
//! A mind is itself a time-varying graph: representation nodes joined by
//! correlation contacts. Raising a topic activates whatever part of the
//! mind is journey-reachable from the topic's node, and the size and
//! confidence of that activated component decide how much resistance the
//! agent puts up, hence how narrow its tolerance gets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::interval::{TimeInstant, TimeInterval};
use crate::journey::{self, JourneyError};
use crate::tvg::{NodeId, TimeVaryingGraph, TvgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionTag {
    Factual,
    Evaluative,
}

/// Something an agent can hold a representation about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proposition {
    pub id: String,
    pub text: Option<String>,
    pub kind_tag: Option<PropositionTag>,
}

impl Proposition {
    pub fn bare(id: &str) -> Proposition {
        Proposition {
            id: String::from(id),
            text: None,
            kind_tag: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Knowledge,
    Belief,
    Opinion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimaryKind {
    Knowledge,
    Belief,
    Opinion,
    Unclassified,
}

/// Which taxonomy labels a representation earns. The flags are independent;
/// `primary` resolves them by precedence knowledge, belief, opinion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindSet {
    pub knowledge: bool,
    pub belief: bool,
    pub opinion: bool,
    pub primary: PrimaryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MindError {
    UnknownTopic(String),
    DuplicateProposition(String),
    /// each topic may carry at most one representation node
    DuplicateTopicNode(String),
    UnknownNode(NodeId),
    EmptyComponent,
    OutOfRange { what: &'static str, value: f64 },
    Graph(TvgError),
    Journey(JourneyError),
}

impl fmt::Display for MindError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MindError::UnknownTopic(t) => write!(f, "no representation for topic {t:?}"),
            MindError::DuplicateProposition(t) => write!(f, "proposition {t:?} already registered"),
            MindError::DuplicateTopicNode(t) => write!(f, "topic {t:?} already has a node"),
            MindError::UnknownNode(n) => write!(f, "unknown mind node {n}"),
            MindError::EmptyComponent => write!(f, "empty component"),
            MindError::OutOfRange { what, value } => {
                write!(f, "{what} = {value} outside [0, 1] or otherwise invalid")
            }
            MindError::Graph(e) => write!(f, "{e}"),
            MindError::Journey(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MindError {}

impl From<TvgError> for MindError {
    fn from(e: TvgError) -> MindError {
        MindError::Graph(e)
    }
}

impl From<JourneyError> for MindError {
    fn from(e: JourneyError) -> MindError {
        MindError::Journey(e)
    }
}

fn unit_range(what: &'static str, value: f64) -> Result<f64, MindError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(MindError::OutOfRange { what, value })
    }
}

/// One agent's representation of one proposition.
#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicRep {
    pub topic: String,
    /// degree to which the proposition holds in the world
    pub objective_truth: f64,
    /// degree to which the agent takes it to hold
    pub subjective_truth: f64,
    /// how firmly the agent holds this representation
    pub confidence: f64,
    /// label the agent itself would use, independent of what `classify` says
    pub designated_kind: Option<RepKind>,
}

impl EpistemicRep {
    pub fn new(
        topic: &str,
        objective_truth: f64,
        subjective_truth: f64,
        confidence: f64,
    ) -> Result<EpistemicRep, MindError> {
        Ok(EpistemicRep {
            topic: String::from(topic),
            objective_truth: unit_range("objective_truth", objective_truth)?,
            subjective_truth: unit_range("subjective_truth", subjective_truth)?,
            confidence: unit_range("confidence", confidence)?,
            designated_kind: None,
        })
    }

    pub fn with_designated_kind(mut self, kind: RepKind) -> EpistemicRep {
        self.designated_kind = Some(kind);
        self
    }

    /// Taxonomy labels at alignment tolerance `tau`: knowledge when the two
    /// truth degrees agree to within `tau`, belief when the objective degree
    /// is strictly interior, opinion whenever it falls short of certainty.
    /// A representation matching nothing (certainly true objectively but
    /// held otherwise) comes out unclassified.
    pub fn classify(&self, tau: f64) -> Result<KindSet, MindError> {
        if !(tau >= 0.0) || tau.is_nan() {
            return Err(MindError::OutOfRange {
                what: "tau",
                value: tau,
            });
        }
        let knowledge = (self.objective_truth - self.subjective_truth).abs() <= tau;
        let belief = self.objective_truth > 0.0 && self.objective_truth < 1.0;
        let opinion = self.objective_truth < 1.0;
        let primary = if knowledge {
            PrimaryKind::Knowledge
        } else if belief {
            PrimaryKind::Belief
        } else if opinion {
            PrimaryKind::Opinion
        } else {
            PrimaryKind::Unclassified
        };
        Ok(KindSet {
            knowledge,
            belief,
            opinion,
            primary,
        })
    }

    /// Confidence reinforced on agreement, eroded on disagreement. Both
    /// updates stay inside [0, 1] and leave full confidence fixed.
    pub fn confidence_updated(
        &self,
        agreed: bool,
        delta_plus: f64,
        delta_minus: f64,
    ) -> Result<EpistemicRep, MindError> {
        unit_range("delta_plus", delta_plus)?;
        unit_range("delta_minus", delta_minus)?;
        let mut out = self.clone();
        out.confidence = if agreed {
            self.confidence + delta_plus * (1.0 - self.confidence)
        } else {
            self.confidence * (1.0 - delta_minus)
        };
        Ok(out)
    }
}

/// Stimulus that brings a topic up for an agent, optionally attributed to
/// another agent.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalEvent {
    pub topic: String,
    pub time: TimeInstant,
    pub source: Option<NodeId>,
}

/// An agent's representations and the correlations among them, as a
/// time-varying graph over the unbounded lifetime `[0, inf)`.
#[derive(Debug, Clone)]
pub struct MindGraph {
    graph: TimeVaryingGraph,
    reps: Vec<EpistemicRep>,
    propositions: BTreeMap<String, Proposition>,
    topic_nodes: BTreeMap<String, NodeId>,
}

impl Default for MindGraph {
    fn default() -> Self {
        MindGraph::new()
    }
}

impl MindGraph {
    pub fn new() -> MindGraph {
        let lifetime = TimeInterval::new(TimeInstant::ZERO, TimeInstant::INFINITY)
            .expect("unbounded lifetime is valid");
        MindGraph {
            graph: TimeVaryingGraph::new(lifetime),
            reps: Vec::new(),
            propositions: BTreeMap::new(),
            topic_nodes: BTreeMap::new(),
        }
    }

    pub fn register_proposition(&mut self, p: Proposition) -> Result<(), MindError> {
        if self.propositions.contains_key(&p.id) {
            return Err(MindError::DuplicateProposition(p.id));
        }
        self.propositions.insert(p.id.clone(), p);
        Ok(())
    }

    pub fn proposition(&self, id: &str) -> Option<&Proposition> {
        self.propositions.get(id)
    }

    pub fn propositions(&self) -> impl Iterator<Item = &Proposition> {
        self.propositions.values()
    }

    /// Adds the node carrying `rep`. Registers a bare proposition for the
    /// topic when none exists; rejects a second node on the same topic.
    pub fn add_rep(&mut self, rep: EpistemicRep) -> Result<NodeId, MindError> {
        if self.topic_nodes.contains_key(&rep.topic) {
            return Err(MindError::DuplicateTopicNode(rep.topic));
        }
        if !self.propositions.contains_key(&rep.topic) {
            self.register_proposition(Proposition::bare(&rep.topic))?;
        }
        let node = self.graph.add_node();
        self.topic_nodes.insert(rep.topic.clone(), node);
        self.reps.push(rep);
        Ok(node)
    }

    /// Records that the representations at `u` and `v` are correlated over
    /// `[t1, t2)`.
    pub fn correlate(
        &mut self,
        u: NodeId,
        v: NodeId,
        t1: TimeInstant,
        t2: TimeInstant,
    ) -> Result<(), MindError> {
        self.graph.add_contact(u, v, t1, t2)?;
        Ok(())
    }

    pub fn node_for_topic(&self, topic: &str) -> Option<NodeId> {
        self.topic_nodes.get(topic).copied()
    }

    pub fn rep(&self, node: NodeId) -> Option<&EpistemicRep> {
        self.reps.get(node.index())
    }

    pub fn reps(&self) -> impl Iterator<Item = (NodeId, &EpistemicRep)> {
        self.reps
            .iter()
            .enumerate()
            .map(|(i, r)| (NodeId(i as u32), r))
    }

    pub fn node_count(&self) -> usize {
        self.reps.len()
    }

    pub fn graph(&self) -> &TimeVaryingGraph {
        &self.graph
    }

    /// The whole time axis, for callers that want an unconstrained
    /// activation window.
    pub fn full_window(&self) -> TimeInterval {
        self.graph.lifetime()
    }

    pub fn set_subjective_truth(&mut self, node: NodeId, value: f64) -> Result<(), MindError> {
        unit_range("subjective_truth", value)?;
        match self.reps.get_mut(node.index()) {
            Some(rep) => {
                rep.subjective_truth = value;
                Ok(())
            }
            None => Err(MindError::UnknownNode(node)),
        }
    }

    pub fn set_confidence(&mut self, node: NodeId, value: f64) -> Result<(), MindError> {
        unit_range("confidence", value)?;
        match self.reps.get_mut(node.index()) {
            Some(rep) => {
                rep.confidence = value;
                Ok(())
            }
            None => Err(MindError::UnknownNode(node)),
        }
    }

    /// Nodes recruited when `event` raises its topic: everything reachable
    /// from the topic node by journeys departing inside `window`. The topic
    /// node itself is always recruited.
    pub fn activate(
        &self,
        event: &ExternalEvent,
        window: TimeInterval,
    ) -> Result<BTreeSet<NodeId>, MindError> {
        let seed = self
            .node_for_topic(&event.topic)
            .ok_or_else(|| MindError::UnknownTopic(event.topic.clone()))?;
        Ok(journey::reachable_within(&self.graph, seed, window)?)
    }

    /// Resistance of an activated component: mean confidence, discounted by
    /// component size against the half-saturation constant `k`. With `k` at
    /// zero the mean passes through untouched; larger components approach
    /// the mean from below as they grow.
    pub fn resistance(&self, component: &BTreeSet<NodeId>, k: f64) -> Result<f64, MindError> {
        if component.is_empty() {
            return Err(MindError::EmptyComponent);
        }
        if !(k >= 0.0) || !k.is_finite() {
            return Err(MindError::OutOfRange { what: "k", value: k });
        }
        let mut total = 0.0;
        for &node in component {
            let rep = self.rep(node).ok_or(MindError::UnknownNode(node))?;
            total += rep.confidence;
        }
        let size = component.len() as f64;
        Ok((total / size) * (size / (size + k)))
    }

    /// The agent's tolerance when `event` raises its topic: the ceiling
    /// `eps_max` scaled down by the resistance of the activated component.
    pub fn tolerance_of(
        &self,
        event: &ExternalEvent,
        eps_max: f64,
        k: f64,
        window: TimeInterval,
    ) -> Result<f64, MindError> {
        unit_range("eps_max", eps_max)?;
        let component = self.activate(event, window)?;
        let resistance = self.resistance(&component, k)?;
        Ok(eps_max * (1.0 - resistance))
    }
}
