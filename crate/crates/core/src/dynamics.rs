//! Event-driven opinion dynamics over a social contact graph.
//!
//! Agents hold their opinion as the subjective truth degree of their topic
//! representation. Contacts between agents come from a time-varying graph;
//! each maximal contact interval yields one interaction event at its
//! appearance date. An interaction nudges each agent toward the other only
//! when the opinion gap falls strictly inside that agent's own tolerance,
//! which is either a fixed number (classic mode) or derived from the
//! agent's activated mind (cognitive mode). Agreement and disagreement
//! feed back into the confidence of the topic representation, which in
//! cognitive mode hardens or softens future tolerance.
//!
//! Everything is deterministic given the society and config: one ChaCha
//! stream seeded once, drawn in a fixed order (initial opinions for agents
//! 0..n first, then any contact sampling).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::epistemic::{EpistemicRep, ExternalEvent, MindError, MindGraph, RepKind};
use crate::interval::{TimeInstant, TimeInterval};
use crate::metrics;
use crate::tvg::{NodeId, TimeVaryingGraph, TvgError};

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    /// one entry per violated field, all collected before reporting
    InvalidConfig(Vec<String>),
    InvalidParams(String),
    MissingTopicRep { agent: NodeId, topic: String },
    AgentNodeMismatch { agents: usize, nodes: usize },
    TooFewAgents(usize),
    Mind(MindError),
    Graph(TvgError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidConfig(violations) => {
                write!(f, "invalid config: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            SimError::InvalidParams(msg) => write!(f, "{msg}"),
            SimError::MissingTopicRep { agent, topic } => {
                write!(f, "agent {agent} holds no representation on topic {topic:?}")
            }
            SimError::AgentNodeMismatch { agents, nodes } => {
                write!(f, "{agents} agents for a contact graph with {nodes} nodes")
            }
            SimError::TooFewAgents(n) => write!(f, "need at least 2 agents, got {n}"),
            SimError::Mind(e) => write!(f, "{e}"),
            SimError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SimError {}

impl From<MindError> for SimError {
    fn from(e: MindError) -> SimError {
        SimError::Mind(e)
    }
}

impl From<TvgError> for SimError {
    fn from(e: TvgError) -> SimError {
        SimError::Graph(e)
    }
}

/// One participant: a social node plus the mind behind it. The opinion on
/// a topic is the subjective truth of the mind's rep for that topic.
#[derive(Debug, Clone)]
pub struct Agent {
    pub id: NodeId,
    pub mind: MindGraph,
}

impl Agent {
    pub fn opinion(&self, topic: &str) -> Option<f64> {
        let node = self.mind.node_for_topic(topic)?;
        self.mind.rep(node).map(|r| r.subjective_truth)
    }

    pub fn confidence(&self, topic: &str) -> Option<f64> {
        let node = self.mind.node_for_topic(topic)?;
        self.mind.rep(node).map(|r| r.confidence)
    }
}

/// An interaction slot: which pair meets, and when. Pairs are stored with
/// the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledContact {
    pub time: TimeInstant,
    pub pair: (NodeId, NodeId),
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v { (u, v) } else { (v, u) }
}

/// Agents plus the social contact layer. Generated complete societies also
/// carry the pre-sampled per-tick event list their schedule uses.
#[derive(Debug, Clone)]
pub struct Society {
    agents: Vec<Agent>,
    contacts: TimeVaryingGraph,
    sampled_events: Option<Vec<ScheduledContact>>,
}

impl Society {
    /// Couples agents to a contact graph. Agent ids must be exactly the
    /// graph's nodes, in order.
    pub fn from_parts(agents: Vec<Agent>, contacts: TimeVaryingGraph) -> Result<Society, SimError> {
        if agents.len() != contacts.node_count() {
            return Err(SimError::AgentNodeMismatch {
                agents: agents.len(),
                nodes: contacts.node_count(),
            });
        }
        for (i, a) in agents.iter().enumerate() {
            if a.id.index() != i {
                return Err(SimError::InvalidParams(format!(
                    "agent at position {i} has id {}",
                    a.id
                )));
            }
        }
        Ok(Society {
            agents,
            contacts,
            sampled_events: None,
        })
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, id: NodeId) -> Option<&Agent> {
        self.agents.get(id.index())
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn contacts(&self) -> &TimeVaryingGraph {
        &self.contacts
    }

    pub fn opinions(&self, topic: &str) -> Vec<Option<f64>> {
        self.agents.iter().map(|a| a.opinion(topic)).collect()
    }
}

/// The interaction sequence a run consumes. Societies with a sampled event
/// list use it directly; otherwise every maximal presence interval of every
/// social edge contributes one event at its appearance date. Sorted by
/// (time, smaller id, larger id).
pub fn contact_schedule(society: &Society) -> Vec<ScheduledContact> {
    let mut events = match &society.sampled_events {
        Some(sampled) => sampled.clone(),
        None => {
            let mut out = Vec::new();
            for edge in society.contacts.edges() {
                let (u, v) = edge.endpoints();
                for iv in edge.available_dates() {
                    out.push(ScheduledContact {
                        time: iv.start(),
                        pair: ordered(u, v),
                    });
                }
            }
            out
        }
    };
    events.sort_by(|a, b| (a.time, a.pair).cmp(&(b.time, b.pair)));
    events
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Classic {
        eps: f64,
    },
    Cognitive {
        eps_max: f64,
        k: f64,
        /// activation window for tolerance; each agent's whole mind
        /// lifetime when absent
        window: Option<TimeInterval>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    pub tol: f64,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub topic: String,
    pub mode: Mode,
    pub mu: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub seed: u64,
    pub max_events: usize,
    pub convergence: Option<Convergence>,
}

impl SimConfig {
    pub fn classic(topic: &str, eps: f64, seed: u64) -> SimConfig {
        SimConfig {
            topic: String::from(topic),
            mode: Mode::Classic { eps },
            mu: 0.5,
            delta_plus: 0.1,
            delta_minus: 0.0,
            seed,
            max_events: 100_000,
            convergence: None,
        }
    }

    pub fn cognitive(topic: &str, eps_max: f64, k: f64, seed: u64) -> SimConfig {
        SimConfig {
            mode: Mode::Cognitive {
                eps_max,
                k,
                window: None,
            },
            ..SimConfig::classic(topic, 0.0, seed)
        }
    }

    /// Checks every field and reports all violations together.
    pub fn validate(&self) -> Result<(), SimError> {
        let mut violations = Vec::new();
        let unit = |name: &str, v: f64, out: &mut Vec<String>| {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                out.push(format!("{name} must lie in [0, 1], got {v}"));
            }
        };
        if self.topic.is_empty() {
            violations.push("topic must not be empty".to_string());
        }
        match &self.mode {
            Mode::Classic { eps } => unit("eps", *eps, &mut violations),
            Mode::Cognitive { eps_max, k, .. } => {
                unit("eps_max", *eps_max, &mut violations);
                if !(*k >= 0.0) || !k.is_finite() {
                    violations.push(format!("k must be a nonnegative real, got {k}"));
                }
            }
        }
        unit("mu", self.mu, &mut violations);
        unit("delta_plus", self.delta_plus, &mut violations);
        unit("delta_minus", self.delta_minus, &mut violations);
        if let Some(c) = &self.convergence {
            if !(c.tol > 0.0) || !c.tol.is_finite() {
                violations.push(format!("convergence.tol must be positive, got {}", c.tol));
            }
            if c.window == 0 {
                violations.push("convergence.window must be at least 1".to_string());
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(violations))
        }
    }
}

/// Everything observed about one interaction, pre and post.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub event: usize,
    pub time: TimeInstant,
    pub agent_i: NodeId,
    pub agent_j: NodeId,
    pub x_i_pre: f64,
    pub x_j_pre: f64,
    pub x_i_post: f64,
    pub x_j_post: f64,
    pub conf_i_pre: f64,
    pub conf_j_pre: f64,
    pub conf_i_post: f64,
    pub conf_j_post: f64,
    pub eps_i: f64,
    pub eps_j: f64,
    pub updated_i: bool,
    pub updated_j: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<EventRecord>,
    pub final_opinions: Vec<f64>,
    pub final_confidences: Vec<f64>,
    /// index of the event at which the convergence detector fired
    pub converged_at: Option<usize>,
}

fn topic_node(agent: &Agent, topic: &str) -> Result<NodeId, SimError> {
    agent
        .mind
        .node_for_topic(topic)
        .ok_or_else(|| SimError::MissingTopicRep {
            agent: agent.id,
            topic: String::from(topic),
        })
}

/// One pairwise encounter at time `t`. Tolerances and update decisions are
/// evaluated on the pre-interaction state of both agents; each agent moves
/// only when the gap is strictly inside its own tolerance, and its topic
/// confidence is reinforced or eroded accordingly. The returned record has
/// its event index zeroed; `run` numbers it.
pub fn interact(
    i: &mut Agent,
    j: &mut Agent,
    t: TimeInstant,
    config: &SimConfig,
) -> Result<EventRecord, SimError> {
    let node_i = topic_node(i, &config.topic)?;
    let node_j = topic_node(j, &config.topic)?;
    let rep_i = i.mind.rep(node_i).expect("node from topic map").clone();
    let rep_j = j.mind.rep(node_j).expect("node from topic map").clone();
    let x_i = rep_i.subjective_truth;
    let x_j = rep_j.subjective_truth;

    let (eps_i, eps_j) = match &config.mode {
        Mode::Classic { eps } => (*eps, *eps),
        Mode::Cognitive { eps_max, k, window } => {
            let eps_of = |agent: &Agent, other: NodeId| -> Result<f64, SimError> {
                let event = ExternalEvent {
                    topic: config.topic.clone(),
                    time: t,
                    source: Some(other),
                };
                let w = window.unwrap_or(agent.mind.full_window());
                Ok(agent.mind.tolerance_of(&event, *eps_max, *k, w)?)
            };
            (eps_of(i, j.id)?, eps_of(j, i.id)?)
        }
    };

    let gap = (x_j - x_i).abs();
    let updated_i = gap < eps_i;
    let updated_j = gap < eps_j;
    let x_i_post = if updated_i {
        (x_i + config.mu * (x_j - x_i)).clamp(0.0, 1.0)
    } else {
        x_i
    };
    let x_j_post = if updated_j {
        (x_j + config.mu * (x_i - x_j)).clamp(0.0, 1.0)
    } else {
        x_j
    };

    let rep_i_next = rep_i.confidence_updated(updated_i, config.delta_plus, config.delta_minus)?;
    let rep_j_next = rep_j.confidence_updated(updated_j, config.delta_plus, config.delta_minus)?;

    i.mind.set_subjective_truth(node_i, x_i_post)?;
    i.mind.set_confidence(node_i, rep_i_next.confidence)?;
    j.mind.set_subjective_truth(node_j, x_j_post)?;
    j.mind.set_confidence(node_j, rep_j_next.confidence)?;

    Ok(EventRecord {
        event: 0,
        time: t,
        agent_i: i.id,
        agent_j: j.id,
        x_i_pre: x_i,
        x_j_pre: x_j,
        x_i_post,
        x_j_post,
        conf_i_pre: rep_i.confidence,
        conf_j_pre: rep_j.confidence,
        conf_i_post: rep_i_next.confidence,
        conf_j_post: rep_j_next.confidence,
        eps_i,
        eps_j,
        updated_i,
        updated_j,
    })
}

/// Plays the contact schedule through `interact`, at most `max_events`
/// events, stopping early when the convergence detector fires. Rejects an
/// invalid config or a missing topic rep before touching any state.
pub fn run(society: &mut Society, config: &SimConfig) -> Result<Trajectory, SimError> {
    config.validate()?;
    for agent in &society.agents {
        topic_node(agent, &config.topic)?;
    }

    let schedule = contact_schedule(society);
    let mut records: Vec<EventRecord> = Vec::new();
    let mut converged_at = None;

    for contact in schedule.into_iter().take(config.max_events) {
        let (u, v) = contact.pair;
        debug_assert!(u < v);
        let (left, right) = society.agents.split_at_mut(v.index());
        let mut record = interact(&mut left[u.index()], &mut right[0], contact.time, config)?;
        record.event = records.len();
        records.push(record);

        if let Some(c) = &config.convergence {
            if metrics::converged(&records, c.tol, c.window) {
                converged_at = Some(records.len() - 1);
                break;
            }
        }
    }

    let final_opinions = society
        .agents
        .iter()
        .map(|a| a.opinion(&config.topic).expect("checked before the run"))
        .collect();
    let final_confidences = society
        .agents
        .iter()
        .map(|a| a.confidence(&config.topic).expect("checked before the run"))
        .collect();
    Ok(Trajectory {
        records,
        final_opinions,
        final_confidences,
        converged_at,
    })
}

/// Shape of a generated social layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SocietyKind {
    /// every pair linked for the whole lifetime; one random pair meets per
    /// integer tick
    CompleteStatic { ticks: u64 },
    /// m random contacts at integer times inside the horizon
    RandomPairwise { contacts: u64, horizon: u64 },
    /// each agent linked to its successor around the ring
    RingStatic { horizon: u64 },
}

/// How generated minds are furnished: the topic rep plus a number of
/// support reps correlated to it.
#[derive(Debug, Clone, PartialEq)]
pub struct MindSpec {
    pub topic: String,
    pub topic_confidence: f64,
    pub support_nodes: u32,
    pub support_confidence: f64,
}

impl MindSpec {
    pub fn bare(topic: &str) -> MindSpec {
        MindSpec {
            topic: String::from(topic),
            topic_confidence: 0.0,
            support_nodes: 0,
            support_confidence: 0.0,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        let mut violations = Vec::new();
        if self.topic.is_empty() {
            violations.push("mind.topic must not be empty".to_string());
        }
        for (name, v) in [
            ("mind.topic_confidence", self.topic_confidence),
            ("mind.support_confidence", self.support_confidence),
        ] {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                violations.push(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(violations))
        }
    }
}

/// The topic rep carries the opinion as its subjective truth; supports are
/// correlated to it over the whole mind lifetime.
pub fn synthesize_mind(spec: &MindSpec, opinion: f64) -> Result<MindGraph, SimError> {
    let mut mind = MindGraph::new();
    let topic = mind.add_rep(
        EpistemicRep::new(&spec.topic, 0.0, opinion, spec.topic_confidence)?
            .with_designated_kind(RepKind::Opinion),
    )?;
    for s in 0..spec.support_nodes {
        let id = format!("{}_support_{}", spec.topic, s);
        let node = mind.add_rep(EpistemicRep::new(
            &id,
            0.5,
            0.5,
            spec.support_confidence,
        )?)?;
        mind.correlate(topic, node, TimeInstant::ZERO, TimeInstant::INFINITY)?;
    }
    Ok(mind)
}

fn draw_opinions(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

fn agents_with_minds(spec: &MindSpec, opinions: &[f64]) -> Result<Vec<Agent>, SimError> {
    opinions
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            Ok(Agent {
                id: NodeId(i as u32),
                mind: synthesize_mind(spec, x)?,
            })
        })
        .collect()
}

fn random_distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (NodeId, NodeId) {
    let u = rng.random_range(0..n as u32);
    let mut v = rng.random_range(0..n as u32 - 1);
    if v >= u {
        v += 1;
    }
    (NodeId(u), NodeId(v))
}

/// Builds a synthetic society. The seed drives one stream consumed in a
/// fixed order: initial opinions for agents 0..n first, then contact
/// sampling where the kind calls for it.
pub fn generate_society(
    kind: &SocietyKind,
    n: usize,
    mind: &MindSpec,
    seed: u64,
) -> Result<Society, SimError> {
    if n < 2 {
        return Err(SimError::TooFewAgents(n));
    }
    mind.validate()?;
    match kind {
        SocietyKind::CompleteStatic { ticks } if *ticks == 0 => {
            return Err(SimError::InvalidParams("ticks must be at least 1".into()));
        }
        SocietyKind::RandomPairwise { horizon, .. } | SocietyKind::RingStatic { horizon }
            if *horizon == 0 =>
        {
            return Err(SimError::InvalidParams("horizon must be at least 1".into()));
        }
        _ => {}
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opinions = draw_opinions(&mut rng, n);
    let agents = agents_with_minds(mind, &opinions)?;

    let end = |ticks: u64| TimeInstant::new(ticks as f64).expect("nonnegative");
    match kind {
        SocietyKind::CompleteStatic { ticks } => {
            let lifetime = TimeInterval::new(TimeInstant::ZERO, end(*ticks)).expect("ticks >= 1");
            let mut g = TimeVaryingGraph::new(lifetime);
            for _ in 0..n {
                g.add_node();
            }
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    g.add_contact(NodeId(u), NodeId(v), lifetime.start(), lifetime.end())?;
                }
            }
            let sampled = (0..*ticks)
                .map(|tick| ScheduledContact {
                    time: TimeInstant::new(tick as f64).expect("nonnegative"),
                    pair: {
                        let (u, v) = random_distinct_pair(&mut rng, n);
                        ordered(u, v)
                    },
                })
                .collect();
            let mut society = Society::from_parts(agents, g)?;
            society.sampled_events = Some(sampled);
            Ok(society)
        }
        SocietyKind::RandomPairwise { contacts, horizon } => {
            let lifetime = TimeInterval::new(TimeInstant::ZERO, end(*horizon)).expect("horizon >= 1");
            let mut g = TimeVaryingGraph::new(lifetime);
            for _ in 0..n {
                g.add_node();
            }
            for _ in 0..*contacts {
                let (u, v) = random_distinct_pair(&mut rng, n);
                let t = rng.random_range(0..*horizon);
                let t1 = TimeInstant::new(t as f64).expect("nonnegative");
                g.add_contact(u, v, t1, t1.after(1.0))?;
            }
            Society::from_parts(agents, g)
        }
        SocietyKind::RingStatic { horizon } => {
            let lifetime = TimeInterval::new(TimeInstant::ZERO, end(*horizon)).expect("horizon >= 1");
            let mut g = TimeVaryingGraph::new(lifetime);
            for _ in 0..n {
                g.add_node();
            }
            for i in 0..n as u32 {
                let j = (i + 1) % n as u32;
                g.add_contact(NodeId(i), NodeId(j), lifetime.start(), lifetime.end())?;
            }
            Society::from_parts(agents, g)
        }
    }
}

/// Society over an externally supplied contact graph (a parsed trace):
/// minds are synthesized just as for generated kinds, opinions drawn from
/// the seed in agent order.
pub fn society_from_trace(
    contacts: TimeVaryingGraph,
    mind: &MindSpec,
    seed: u64,
) -> Result<Society, SimError> {
    let n = contacts.node_count();
    if n < 2 {
        return Err(SimError::TooFewAgents(n));
    }
    mind.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opinions = draw_opinions(&mut rng, n);
    let agents = agents_with_minds(mind, &opinions)?;
    Society::from_parts(agents, contacts)
}
