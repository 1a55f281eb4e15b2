use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use opidyn_core::dynamics::{EventRecord, Trajectory};
use opidyn_core::metrics::{self, DEFAULT_CLUSTER_GAP};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::errors::CliError;

pub const TRAJECTORY_HEADER: &str =
    "event,time,agent_i,agent_j,x_i_pre,x_j_pre,x_i_post,x_j_post,eps_i,eps_j,updated_i,updated_j";

pub fn trajectory_csv(records: &[EventRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 64 + TRAJECTORY_HEADER.len() + 1);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.event,
            r.time.value(),
            r.agent_i.0,
            r.agent_j.0,
            r.x_i_pre,
            r.x_j_pre,
            r.x_i_post,
            r.x_j_post,
            r.eps_i,
            r.eps_j,
            r.updated_i,
            r.updated_j
        )
        .expect("writing to a string cannot fail");
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SpreadOut {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClustersOut {
    pub gap: f64,
    pub count: usize,
    pub centroids: Vec<f64>,
    pub boundaries: Vec<f64>,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub topic: String,
    pub agents: usize,
    pub events: usize,
    pub converged_at: Option<usize>,
    pub final_opinions: Vec<f64>,
    pub final_confidences: Vec<f64>,
    pub spread: SpreadOut,
    pub clusters: ClustersOut,
}

pub fn summarize(topic: &str, traj: &Trajectory) -> Result<Summary, CliError> {
    let spread = metrics::spread(&traj.final_opinions)
        .map_err(|e| CliError::new("config", format!("summary statistics: {e}")))?;
    let report = metrics::clusters(&traj.final_opinions, DEFAULT_CLUSTER_GAP)
        .map_err(|e| CliError::new("config", format!("summary clustering: {e}")))?;
    Ok(Summary {
        topic: String::from(topic),
        agents: traj.final_opinions.len(),
        events: traj.records.len(),
        converged_at: traj.converged_at,
        final_opinions: traj.final_opinions.clone(),
        final_confidences: traj.final_confidences.clone(),
        spread: SpreadOut {
            min: spread.min,
            max: spread.max,
            mean: spread.mean,
            variance: spread.variance,
        },
        clusters: ClustersOut {
            gap: DEFAULT_CLUSTER_GAP,
            count: report.count,
            centroids: report.centroids,
            boundaries: report.boundaries,
            sizes: report.members.iter().map(Vec::len).collect(),
        },
    })
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable outputs");
    text.push('\n');
    text
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

/// What produced a run and what it wrote. `created_unix` is wall-clock
/// provenance only; no digest covers it, so reruns differ in nothing but
/// this field.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub created_unix: u64,
    pub seed: u64,
    pub config: FileRecord,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
