use std::collections::BTreeMap;

use opidyn_core::epistemic::{
    EpistemicRep, MindGraph, Proposition, PropositionTag, RepKind,
};
use opidyn_core::{NodeId, TimeInstant};
use serde::{Deserialize, Serialize};

use crate::errors::CliError;

/// On-disk form of one agent's mind graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MindFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topics: Vec<TopicEntry>,
    pub nodes: Vec<NodeEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlations: Vec<CorrelationEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind_tag: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: u64,
    pub topic: String,
    #[serde(rename = "T_o")]
    pub objective: f64,
    #[serde(rename = "T_s")]
    pub subjective: f64,
    #[serde(rename = "d_c")]
    pub confidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated_kind: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationEntry {
    pub u: u64,
    pub v: u64,
    pub t1: f64,
    pub t2: TimeField,
}

/// A time bound that JSON numbers cannot always express: finite ones are
/// numbers, the unbounded end is the string "inf".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeField {
    Number(f64),
    Word(String),
}

impl TimeField {
    fn value(&self, ctx: &str) -> Result<f64, CliError> {
        match self {
            TimeField::Number(v) => Ok(*v),
            TimeField::Word(w) if w == "inf" => Ok(f64::INFINITY),
            TimeField::Word(w) => Err(CliError::parse(format!(
                "{ctx}: time must be a number or \"inf\", got {w:?}"
            ))),
        }
    }

    fn from_instant(t: TimeInstant) -> TimeField {
        if t.is_finite() {
            TimeField::Number(t.value())
        } else {
            TimeField::Word(String::from("inf"))
        }
    }
}

fn tag_from_str(s: &str, ctx: &str) -> Result<PropositionTag, CliError> {
    match s {
        "factual" => Ok(PropositionTag::Factual),
        "evaluative" => Ok(PropositionTag::Evaluative),
        other => Err(CliError::parse(format!(
            "{ctx}: kind_tag must be factual or evaluative, got {other:?}"
        ))),
    }
}

fn tag_to_str(tag: PropositionTag) -> &'static str {
    match tag {
        PropositionTag::Factual => "factual",
        PropositionTag::Evaluative => "evaluative",
    }
}

fn kind_from_str(s: &str, ctx: &str) -> Result<RepKind, CliError> {
    match s {
        "knowledge" => Ok(RepKind::Knowledge),
        "belief" => Ok(RepKind::Belief),
        "opinion" => Ok(RepKind::Opinion),
        other => Err(CliError::parse(format!(
            "{ctx}: designated_kind must be knowledge, belief, or opinion, got {other:?}"
        ))),
    }
}

fn kind_to_str(kind: RepKind) -> &'static str {
    match kind {
        RepKind::Knowledge => "knowledge",
        RepKind::Belief => "belief",
        RepKind::Opinion => "opinion",
    }
}

/// Builds a mind graph from its file form. `ctx` names the source for error
/// messages.
pub fn to_mind(file: &MindFile, ctx: &str) -> Result<MindGraph, CliError> {
    let mut mind = MindGraph::new();
    for topic in &file.topics {
        let kind_tag = match &topic.kind_tag {
            Some(s) => Some(tag_from_str(s, ctx)?),
            None => None,
        };
        mind.register_proposition(Proposition {
            id: topic.id.clone(),
            text: topic.text.clone(),
            kind_tag,
        })
        .map_err(|e| CliError::parse(format!("{ctx}: {e}")))?;
    }

    let mut ids: BTreeMap<u64, NodeId> = BTreeMap::new();
    for node in &file.nodes {
        if ids.contains_key(&node.id) {
            return Err(CliError::parse(format!(
                "{ctx}: node id {} appears twice",
                node.id
            )));
        }
        let mut rep = EpistemicRep::new(&node.topic, node.objective, node.subjective, node.confidence)
            .map_err(|e| CliError::parse(format!("{ctx}: node {}: {e}", node.id)))?;
        if let Some(kind) = &node.designated_kind {
            rep = rep.with_designated_kind(kind_from_str(kind, ctx)?);
        }
        let assigned = mind
            .add_rep(rep)
            .map_err(|e| CliError::parse(format!("{ctx}: node {}: {e}", node.id)))?;
        ids.insert(node.id, assigned);
    }

    for (i, c) in file.correlations.iter().enumerate() {
        let pick = |raw: u64| {
            ids.get(&raw).copied().ok_or_else(|| {
                CliError::parse(format!(
                    "{ctx}: correlation {i} references unknown node id {raw}"
                ))
            })
        };
        let u = pick(c.u)?;
        let v = pick(c.v)?;
        let make = |value: f64, what: &str| {
            TimeInstant::new(value).map_err(|e| {
                CliError::parse(format!("{ctx}: correlation {i}: {what}: {e}"))
            })
        };
        let t1 = make(c.t1, "t1")?;
        let t2 = make(c.t2.value(&format!("{ctx}: correlation {i}"))?, "t2")?;
        mind.correlate(u, v, t1, t2)
            .map_err(|e| CliError::parse(format!("{ctx}: correlation {i}: {e}")))?;
    }
    Ok(mind)
}

/// Renders a mind graph into its file form. Node ids are the dense indices.
pub fn from_mind(mind: &MindGraph) -> MindFile {
    let topics = mind
        .propositions()
        .map(|p| TopicEntry {
            id: p.id.clone(),
            text: p.text.clone(),
            kind_tag: p.kind_tag.map(tag_to_str).map(String::from),
        })
        .collect();
    let nodes = mind
        .reps()
        .map(|(id, rep)| NodeEntry {
            id: id.index() as u64,
            topic: rep.topic.clone(),
            objective: rep.objective_truth,
            subjective: rep.subjective_truth,
            confidence: rep.confidence,
            designated_kind: rep.designated_kind.map(kind_to_str).map(String::from),
        })
        .collect();
    let mut correlations = Vec::new();
    for edge in mind.graph().edges() {
        let (u, v) = edge.endpoints();
        for iv in edge.available_dates() {
            correlations.push(CorrelationEntry {
                u: u.index() as u64,
                v: v.index() as u64,
                t1: iv.start().value(),
                t2: TimeField::from_instant(iv.end()),
            });
        }
    }
    MindFile {
        topics,
        nodes,
        correlations,
    }
}
