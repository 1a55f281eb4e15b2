use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use opidyn_core::dynamics::{self, MindSpec, SimError, SocietyKind};
use opidyn_core::journey::{foremost_journey, reachability_set};
use opidyn_core::TimeInstant;

use crate::configfile::{
    self, ConfigFile, ConvergenceEntry, MindParams, ModeEntry, SocietyEntry,
};
use crate::errors::{CliError, EXIT_INPUT, EXIT_NEGATIVE};
use crate::mindfile::{self, MindFile};
use crate::outputs::{self, FileRecord, RunManifest};
use crate::trace;

#[derive(Debug, Parser)]
#[command(
    name = "opidyn",
    version,
    about = "Temporal contact graphs and seeded opinion dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a contact trace: footprint, characteristic dates, snapshots
    Analyze(AnalyzeArgs),
    /// Find the foremost journey between two nodes of a trace
    Journey(JourneyArgs),
    /// Run the opinion dynamics a config file describes
    Simulate(SimulateArgs),
    /// Synthesize a society: contact trace, minds, and a ready-to-run config
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// contact trace file
    pub trace: PathBuf,
    /// lifetime override; END may be inf
    #[arg(long, value_name = "START:END")]
    pub lifetime: Option<String>,
    /// export the snapshot sequence as CSV
    #[arg(long, value_name = "FILE")]
    pub snapshots: Option<PathBuf>,
    /// print the nodes reachable from NODE departing at TIME or later
    #[arg(long, num_args = 2, value_names = ["NODE", "TIME"])]
    pub reach: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct JourneyArgs {
    /// contact trace file
    pub trace: PathBuf,
    /// source node token
    pub u: String,
    /// destination node token
    pub v: String,
    /// earliest departure time
    pub start: f64,
    /// lifetime override; END may be inf
    #[arg(long, value_name = "START:END")]
    pub lifetime: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// simulation config (JSON)
    pub config: PathBuf,
    /// where trajectory.csv, summary.json, manifest.json land
    #[arg(long, env = "OPIDYN_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// suppress progress output
    #[arg(long)]
    pub quiet: bool,
    /// fan out N runs with consecutive seeds, each into run_<seed>/
    #[arg(long, value_name = "N")]
    pub sweep: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    CompleteStatic,
    RandomPairwise,
    RingStatic,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// society shape
    #[arg(value_enum)]
    pub kind: GenKind,
    /// number of agents
    #[arg(long)]
    pub n: usize,
    /// tick count for complete-static societies
    #[arg(long, default_value_t = 1000)]
    pub ticks: u64,
    /// sampled contact count for random-pairwise societies
    #[arg(long, default_value_t = 1000)]
    pub contacts: u64,
    /// lifetime length for random-pairwise and ring-static societies
    #[arg(long, default_value_t = 100)]
    pub horizon: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// topic the generated minds hold an opinion on
    #[arg(long, default_value = "issue")]
    pub topic: String,
    /// confidence attached to each agent's topic representation
    #[arg(long, default_value_t = 0.0)]
    pub topic_confidence: f64,
    /// correlated support representations per mind
    #[arg(long, default_value_t = 0)]
    pub support_nodes: u32,
    /// confidence attached to each support representation
    #[arg(long, default_value_t = 0.0)]
    pub support_confidence: f64,
    /// tolerance written into the emitted classic-mode config
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    /// where society.trace, minds.json, config.json land
    #[arg(long, env = "OPIDYN_OUT_DIR", value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// suppress progress output
    #[arg(long)]
    pub quiet: bool,
}

/// Parses argv and runs the requested command, returning the process exit
/// code. Errors print one `error: <category>: <reason>` line per reason.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error: usage: {line}");
            return EXIT_INPUT;
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Journey(a) => cmd_journey(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            err.report();
            EXIT_INPUT
        }
    }
}

fn load_trace(path: &Path, lifetime: &Option<String>) -> Result<trace::ParsedTrace, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let lifetime = match lifetime {
        Some(flag) => Some(trace::parse_lifetime_flag(flag)?),
        None => None,
    };
    trace::parse_trace(&text, lifetime)
}

fn instant(value: f64, what: &str) -> Result<TimeInstant, CliError> {
    TimeInstant::new(value).map_err(|e| CliError::usage(format!("{what}: {e}")))
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<i32, CliError> {
    let parsed = load_trace(&a.trace, &a.lifetime)?;
    let g = &parsed.graph;

    println!("nodes: {}", g.node_count());
    println!("edges: {}", g.edge_count());
    let fp = g.footprint();
    println!("footprint edges: {}", fp.edges.len());
    println!("footprint connected: {}", fp.is_connected());
    println!("lifetime: {}", g.lifetime());
    let dates = g.characteristic_dates();
    let joined = dates
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    println!("graph characteristic dates: {joined}");
    for edge in g.edges() {
        let (u, v) = edge.endpoints();
        let ed = edge.characteristic_dates();
        let fmt_times = |ts: &[TimeInstant]| {
            ts.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let avail = edge
            .available_dates()
            .iter()
            .map(|iv| iv.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        println!(
            "edge {}-{}: available {}; appearances {}; disappearances {}",
            parsed.name(u),
            parsed.name(v),
            avail,
            fmt_times(&ed.appearances),
            fmt_times(&ed.disappearances)
        );
    }
    let snaps = g.snapshots();
    println!("snapshots: {}", snaps.len());

    if let Some(path) = &a.snapshots {
        let mut csv = String::from("snapshot,start,end,edge_count,edges\n");
        for (i, (span, graph)) in snaps.iter().enumerate() {
            let edges = graph
                .edges
                .iter()
                .map(|(u, v)| format!("{}-{}", parsed.name(*u), parsed.name(*v)))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                csv,
                "{},{},{},{},{}",
                i,
                span.start(),
                span.end(),
                graph.edges.len(),
                edges
            )
            .expect("writing to a string cannot fail");
        }
        fs::write(path, csv).map_err(|e| CliError::io(path, &e))?;
        println!("wrote {}", path.display());
    }

    if let Some(reach) = &a.reach {
        let token = &reach[0];
        let node = parsed
            .node(token)
            .ok_or_else(|| CliError::usage(format!("unknown node {token:?}")))?;
        let at: f64 = reach[1]
            .parse()
            .map_err(|_| CliError::usage(format!("reach time is not a number: {:?}", reach[1])))?;
        let start = instant(at, "reach time")?;
        let set = reachability_set(g, node, start)
            .map_err(|e| CliError::usage(e.to_string()))?;
        let names = set
            .iter()
            .map(|&n| parsed.name(n))
            .collect::<Vec<_>>()
            .join(" ");
        println!("reachable from {token} at {at}: {names}");
    }
    Ok(0)
}

fn cmd_journey(a: &JourneyArgs) -> Result<i32, CliError> {
    let parsed = load_trace(&a.trace, &a.lifetime)?;
    let resolve = |token: &str| {
        parsed
            .node(token)
            .ok_or_else(|| CliError::usage(format!("unknown node {token:?}")))
    };
    let u = resolve(&a.u)?;
    let v = resolve(&a.v)?;
    let start = instant(a.start, "start time")?;
    let found = foremost_journey(&parsed.graph, u, v, start)
        .map_err(|e| CliError::usage(e.to_string()))?;
    match found {
        Some(j) => {
            let mut hops = String::from("hops:");
            for hop in &j.hops {
                write!(
                    hops,
                    " ({},{})@{}",
                    parsed.name(hop.from),
                    parsed.name(hop.to),
                    hop.departure
                )
                .expect("writing to a string cannot fail");
            }
            println!("{hops}");
            println!("arrival: {}", j.arrival);
            Ok(0)
        }
        None => {
            println!("none");
            Ok(EXIT_NEGATIVE)
        }
    }
}

struct RunFiles {
    events: usize,
    converged_at: Option<usize>,
    written: Vec<PathBuf>,
}

fn run_once(
    file: &ConfigFile,
    config_path: &Path,
    config_text: &str,
    base_dir: &Path,
    out_dir: &Path,
) -> Result<RunFiles, CliError> {
    let sim = configfile::sim_config(file)?;
    let (mut society, input_paths) = configfile::build_society(file, base_dir)?;
    let traj = dynamics::run(&mut society, &sim).map_err(CliError::from_sim)?;
    let summary = outputs::summarize(&file.topic, &traj)?;

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, &e))?;
    let csv = outputs::trajectory_csv(&traj.records);
    let summary_json = outputs::to_pretty_json(&summary);
    let trajectory_path = out_dir.join("trajectory.csv");
    let summary_path = out_dir.join("summary.json");
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&trajectory_path, &csv).map_err(|e| CliError::io(&trajectory_path, &e))?;
    fs::write(&summary_path, &summary_json).map_err(|e| CliError::io(&summary_path, &e))?;

    let mut inputs = Vec::new();
    for path in &input_paths {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, &e))?;
        inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: outputs::sha256_hex(&bytes),
        });
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        created_unix: outputs::now_unix(),
        seed: file.seed,
        config: FileRecord {
            path: config_path.display().to_string(),
            sha256: outputs::sha256_hex(config_text.as_bytes()),
        },
        inputs,
        outputs: vec![
            FileRecord {
                path: trajectory_path.display().to_string(),
                sha256: outputs::sha256_hex(csv.as_bytes()),
            },
            FileRecord {
                path: summary_path.display().to_string(),
                sha256: outputs::sha256_hex(summary_json.as_bytes()),
            },
        ],
    };
    let manifest_json = outputs::to_pretty_json(&manifest);
    fs::write(&manifest_path, manifest_json).map_err(|e| CliError::io(&manifest_path, &e))?;

    Ok(RunFiles {
        events: traj.records.len(),
        converged_at: traj.converged_at,
        written: vec![trajectory_path, summary_path, manifest_path],
    })
}

fn report_run(seed: u64, run: &RunFiles, quiet: bool) {
    if quiet {
        return;
    }
    match run.converged_at {
        Some(idx) => println!("seed {seed}: {} events, converged at event {idx}", run.events),
        None => println!("seed {seed}: {} events", run.events),
    }
    for path in &run.written {
        println!("wrote {}", path.display());
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<i32, CliError> {
    let (file, text) = configfile::read_config(&a.config)?;
    let base_dir = a
        .config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let out_base = a.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));

    match a.sweep {
        None => {
            let run = run_once(&file, &a.config, &text, &base_dir, &out_base)?;
            report_run(file.seed, &run, a.quiet);
            Ok(0)
        }
        Some(0) => Err(CliError::usage("sweep needs at least 1 run")),
        Some(count) => {
            let results: Vec<Result<(u64, RunFiles), CliError>> = std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for i in 0..count {
                    let mut per_run = file.clone();
                    per_run.seed = file.seed.wrapping_add(u64::from(i));
                    let dir = out_base.join(format!("run_{}", per_run.seed));
                    let text = &text;
                    let base_dir = &base_dir;
                    let config_path = &a.config;
                    handles.push(scope.spawn(move || {
                        let seed = per_run.seed;
                        run_once(&per_run, config_path, text, base_dir, &dir)
                            .map(|run| (seed, run))
                    }));
                }
                handles
                    .into_iter()
                    .map(|h| h.join().expect("sweep worker panicked"))
                    .collect()
            });
            let mut first_err = None;
            for result in results {
                match result {
                    Ok((seed, run)) => report_run(seed, &run, a.quiet),
                    Err(e) => first_err = first_err.or(Some(e)),
                }
            }
            match first_err {
                Some(e) => Err(e),
                None => Ok(0),
            }
        }
    }
}

fn usage_from_sim(err: SimError) -> CliError {
    match err {
        SimError::InvalidConfig(violations) => CliError {
            category: "usage",
            reasons: violations,
        },
        other => CliError::usage(other.to_string()),
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32, CliError> {
    let kind = match a.kind {
        GenKind::CompleteStatic => SocietyKind::CompleteStatic { ticks: a.ticks },
        GenKind::RandomPairwise => SocietyKind::RandomPairwise {
            contacts: a.contacts,
            horizon: a.horizon,
        },
        GenKind::RingStatic => SocietyKind::RingStatic { horizon: a.horizon },
    };
    let spec = MindSpec {
        topic: a.topic.clone(),
        topic_confidence: a.topic_confidence,
        support_nodes: a.support_nodes,
        support_confidence: a.support_confidence,
    };
    let society =
        dynamics::generate_society(&kind, a.n, &spec, a.seed).map_err(usage_from_sim)?;

    let names: Vec<String> = (0..a.n).map(|i| i.to_string()).collect();
    let trace_text = trace::write_trace(society.contacts(), &names);
    let minds: Vec<MindFile> = society
        .agents()
        .iter()
        .map(|agent| mindfile::from_mind(&agent.mind))
        .collect();
    let minds_json = outputs::to_pretty_json(&minds);

    let mind_params = MindParams {
        topic_confidence: a.topic_confidence,
        support_nodes: a.support_nodes,
        support_confidence: a.support_confidence,
    };
    let society_entry = match a.kind {
        GenKind::CompleteStatic => SocietyEntry::CompleteStatic {
            n: a.n,
            ticks: a.ticks,
            mind: Some(mind_params),
        },
        GenKind::RandomPairwise => SocietyEntry::RandomPairwise {
            n: a.n,
            contacts: a.contacts,
            horizon: a.horizon,
            mind: Some(mind_params),
        },
        GenKind::RingStatic => SocietyEntry::RingStatic {
            n: a.n,
            horizon: a.horizon,
            mind: Some(mind_params),
        },
    };
    let config = ConfigFile {
        topic: a.topic.clone(),
        mode: ModeEntry::Classic { eps: a.eps },
        mu: 0.5,
        delta_plus: 0.1,
        delta_minus: 0.0,
        seed: a.seed,
        max_events: 100_000,
        convergence: Some(ConvergenceEntry {
            tol: 1e-9,
            window: 200,
        }),
        society: society_entry,
    };
    let config_json = outputs::to_pretty_json(&config);

    fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, &e))?;
    let files = [
        (a.out_dir.join("society.trace"), trace_text),
        (a.out_dir.join("minds.json"), minds_json),
        (a.out_dir.join("config.json"), config_json),
    ];
    for (path, content) in &files {
        fs::write(path, content).map_err(|e| CliError::io(path, &e))?;
        if !a.quiet {
            println!("wrote {}", path.display());
        }
    }
    Ok(0)
}
