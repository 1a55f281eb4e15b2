use std::fs;
use std::path::{Path, PathBuf};

use opidyn_core::dynamics::{
    Agent, MindSpec, Mode, SimConfig, Society, SocietyKind,
};
use opidyn_core::TimeInterval;
use serde::{Deserialize, Serialize};

use crate::errors::CliError;
use crate::mindfile::{self, MindFile};
use crate::trace;

/// Everything a `simulate` invocation needs, in one JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub topic: String,
    pub mode: ModeEntry,
    #[serde(default = "defaults::mu")]
    pub mu: f64,
    #[serde(default = "defaults::delta_plus")]
    pub delta_plus: f64,
    #[serde(default)]
    pub delta_minus: f64,
    pub seed: u64,
    #[serde(default = "defaults::max_events")]
    pub max_events: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceEntry>,
    pub society: SocietyEntry,
}

mod defaults {
    pub fn mu() -> f64 {
        0.5
    }
    pub fn delta_plus() -> f64 {
        0.1
    }
    pub fn max_events() -> usize {
        100_000
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeEntry {
    Classic {
        eps: f64,
    },
    Cognitive {
        eps_max: f64,
        k: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceEntry {
    pub tol: f64,
    pub window: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SocietyEntry {
    CompleteStatic {
        n: usize,
        ticks: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mind: Option<MindParams>,
    },
    RandomPairwise {
        n: usize,
        contacts: u64,
        horizon: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mind: Option<MindParams>,
    },
    RingStatic {
        n: usize,
        horizon: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mind: Option<MindParams>,
    },
    /// explicit contact trace plus one mind file entry per agent
    Trace {
        trace: String,
        minds: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lifetime: Option<[f64; 2]>,
    },
}

/// Furnishing for generated minds; the topic itself comes from the config's
/// `topic` field.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MindParams {
    #[serde(default)]
    pub topic_confidence: f64,
    #[serde(default)]
    pub support_nodes: u32,
    #[serde(default)]
    pub support_confidence: f64,
}

pub fn read_config(path: &Path) -> Result<(ConfigFile, String), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::new("config", format!("{}: {e}", path.display())))?;
    Ok((file, text))
}

fn interval_from_pair(pair: [f64; 2], what: &str) -> Result<TimeInterval, CliError> {
    TimeInterval::from_values(pair[0], pair[1])
        .map_err(|e| CliError::new("config", format!("{what}: {e}")))
}

/// Lowers the file's fields into a validated simulation config.
pub fn sim_config(file: &ConfigFile) -> Result<SimConfig, CliError> {
    let mode = match &file.mode {
        ModeEntry::Classic { eps } => Mode::Classic { eps: *eps },
        ModeEntry::Cognitive { eps_max, k, window } => Mode::Cognitive {
            eps_max: *eps_max,
            k: *k,
            window: match window {
                Some(pair) => Some(interval_from_pair(*pair, "mode.window")?),
                None => None,
            },
        },
    };
    let config = SimConfig {
        topic: file.topic.clone(),
        mode,
        mu: file.mu,
        delta_plus: file.delta_plus,
        delta_minus: file.delta_minus,
        seed: file.seed,
        max_events: file.max_events,
        convergence: file.convergence.map(|c| opidyn_core::dynamics::Convergence {
            tol: c.tol,
            window: c.window,
        }),
    };
    config.validate().map_err(CliError::from_sim)?;
    Ok(config)
}

fn mind_spec(topic: &str, params: Option<MindParams>) -> MindSpec {
    let p = params.unwrap_or_default();
    MindSpec {
        topic: String::from(topic),
        topic_confidence: p.topic_confidence,
        support_nodes: p.support_nodes,
        support_confidence: p.support_confidence,
    }
}

/// Assembles the society a config describes. Returns the society plus the
/// extra input files it had to read, for the run manifest.
pub fn build_society(
    file: &ConfigFile,
    base_dir: &Path,
) -> Result<(Society, Vec<PathBuf>), CliError> {
    match &file.society {
        SocietyEntry::CompleteStatic { n, ticks, mind } => {
            let kind = SocietyKind::CompleteStatic { ticks: *ticks };
            let spec = mind_spec(&file.topic, *mind);
            let society = opidyn_core::dynamics::generate_society(&kind, *n, &spec, file.seed)
                .map_err(CliError::from_sim)?;
            Ok((society, Vec::new()))
        }
        SocietyEntry::RandomPairwise {
            n,
            contacts,
            horizon,
            mind,
        } => {
            let kind = SocietyKind::RandomPairwise {
                contacts: *contacts,
                horizon: *horizon,
            };
            let spec = mind_spec(&file.topic, *mind);
            let society = opidyn_core::dynamics::generate_society(&kind, *n, &spec, file.seed)
                .map_err(CliError::from_sim)?;
            Ok((society, Vec::new()))
        }
        SocietyEntry::RingStatic { n, horizon, mind } => {
            let kind = SocietyKind::RingStatic { horizon: *horizon };
            let spec = mind_spec(&file.topic, *mind);
            let society = opidyn_core::dynamics::generate_society(&kind, *n, &spec, file.seed)
                .map_err(CliError::from_sim)?;
            Ok((society, Vec::new()))
        }
        SocietyEntry::Trace {
            trace: trace_name,
            minds: minds_name,
            lifetime,
        } => {
            let trace_path = base_dir.join(trace_name);
            let minds_path = base_dir.join(minds_name);
            let text =
                fs::read_to_string(&trace_path).map_err(|e| CliError::io(&trace_path, &e))?;
            let lifetime = match lifetime {
                Some(pair) => Some(interval_from_pair(*pair, "society.lifetime")?),
                None => None,
            };
            let parsed = trace::parse_trace(&text, lifetime)?;

            let minds_text =
                fs::read_to_string(&minds_path).map_err(|e| CliError::io(&minds_path, &e))?;
            let mind_files: Vec<MindFile> = serde_json::from_str(&minds_text)
                .map_err(|e| CliError::parse(format!("{}: {e}", minds_path.display())))?;
            if mind_files.len() != parsed.graph.node_count() {
                return Err(CliError::config(vec![format!(
                    "society.minds holds {} minds but the trace names {} nodes",
                    mind_files.len(),
                    parsed.graph.node_count()
                )]));
            }
            let mut agents = Vec::with_capacity(mind_files.len());
            for (i, mf) in mind_files.iter().enumerate() {
                let ctx = format!("{}[{}]", minds_path.display(), i);
                let mind = mindfile::to_mind(mf, &ctx)?;
                agents.push(Agent {
                    id: opidyn_core::NodeId(i as u32),
                    mind,
                });
            }
            let society =
                Society::from_parts(agents, parsed.graph).map_err(CliError::from_sim)?;
            Ok((society, vec![trace_path, minds_path]))
        }
    }
}
