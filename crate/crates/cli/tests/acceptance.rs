//! One test per release criterion, each printing a single PASS/FAIL line.
//! Tolerances are pinned here on purpose; loosening one is a release decision,
//! not a test fix.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::process::Command;

use opidyn_core::dynamics::{
    generate_society, run, synthesize_mind, Agent, MindSpec, SimConfig, Society, SocietyKind,
};
use opidyn_core::epistemic::{EpistemicRep, PrimaryKind};
use opidyn_core::journey::foremost_journey;
use opidyn_core::metrics::{clusters, spread};
use opidyn_core::{NodeId, TimeInstant, TimeInterval, TimeVaryingGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(criterion: u32, what: &str, pass: bool) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {tag} - {what}");
    assert!(pass, "criterion {criterion}: {what}");
}

fn t(v: f64) -> TimeInstant {
    TimeInstant::new(v).unwrap()
}

const MAX_TIME: u32 = 20;

struct RawContact {
    u: u32,
    v: u32,
    t1: u32,
    t2: u32,
}

fn random_graph(
    rng: &mut ChaCha8Rng,
    max_nodes: u32,
    max_contacts: usize,
    directed: bool,
) -> (TimeVaryingGraph, Vec<RawContact>) {
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(0..=max_contacts);
    let lifetime = TimeInterval::from_values(0.0, MAX_TIME as f64).unwrap();
    let mut g = if directed {
        TimeVaryingGraph::new_directed(lifetime)
    } else {
        TimeVaryingGraph::new(lifetime)
    };
    for _ in 0..n {
        g.add_node();
    }
    let mut kept = Vec::new();
    for _ in 0..m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let t1 = rng.random_range(0..MAX_TIME);
        let t2 = (t1 + rng.random_range(1..=MAX_TIME)).min(MAX_TIME);
        g.add_contact(NodeId(u), NodeId(v), t(t1 as f64), t(t2 as f64))
            .unwrap();
        kept.push(RawContact { u, v, t1, t2 });
    }
    (g, kept)
}

fn quarter_steps() -> impl Iterator<Item = TimeInstant> {
    (0..MAX_TIME * 4).map(|k| t(k as f64 * 0.25))
}

#[test]
fn criterion_01_tvg_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut violations = 0usize;
    for _ in 0..1000 {
        let (g, kept) = random_graph(&mut rng, 8, 12, false);

        // presence agrees with the merged availability sets everywhere
        for edge in g.edges() {
            let (u, v) = edge.endpoints();
            for x in quarter_steps() {
                if g.presence(u, v, x) != edge.available_dates().contains(x) {
                    violations += 1;
                }
            }
        }
        for c in &kept {
            let edge = g.edge(NodeId(c.u), NodeId(c.v)).unwrap();
            let raw = TimeInterval::from_values(c.t1 as f64, c.t2 as f64).unwrap();
            if !edge.available_dates().covers(&raw) {
                violations += 1;
            }
        }

        // the footprint is exactly the set of contacted pairs
        let fp = g.footprint();
        let expected: BTreeSet<(u32, u32)> = kept
            .iter()
            .map(|c| (c.u.min(c.v), c.u.max(c.v)))
            .collect();
        let got: BTreeSet<(u32, u32)> = fp.edges.iter().map(|&(a, b)| (a.0, b.0)).collect();
        if got != expected {
            violations += 1;
        }

        // snapshots tile the lifetime and reproduce presence pointwise
        let snaps = g.snapshots();
        if snaps.is_empty()
            || snaps[0].0.start() != g.lifetime().start()
            || snaps.last().unwrap().0.end() != g.lifetime().end()
            || snaps.windows(2).any(|w| w[0].0.end() != w[1].0.start())
        {
            violations += 1;
        }
        for x in quarter_steps() {
            let Some(snap) = snaps.iter().find(|(span, _)| span.contains(x)) else {
                violations += 1;
                continue;
            };
            for edge in g.edges() {
                let (u, v) = edge.endpoints();
                if snap.1.contains_edge(u, v) != g.presence(u, v, x) {
                    violations += 1;
                }
            }
        }

        // graph characteristic dates are the union of every edge's boundaries
        let dates = g.characteristic_dates();
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            violations += 1;
        }
        let mut boundaries = BTreeSet::new();
        for edge in g.edges() {
            let ed = edge.characteristic_dates();
            for d in ed.appearances.iter().chain(ed.disappearances.iter()) {
                boundaries.insert(*d);
                if !dates.contains(d) {
                    violations += 1;
                }
            }
        }
        for d in &dates {
            if !boundaries.contains(d) {
                violations += 1;
            }
        }
    }
    verdict(
        1,
        "presence, footprint, snapshot, and characteristic-date coherence on 1000 random graphs",
        violations == 0,
    );
}

// Exhaustive search over hop sequences of at most |V| hops whose departures
// sit on the characteristic-date grid; zero-latency graphs only. States
// dominated by an earlier-and-shorter visit to the same node are cut.
fn oracle_arrivals(
    g: &TimeVaryingGraph,
    source: NodeId,
    dep_lo: TimeInstant,
) -> BTreeMap<NodeId, TimeInstant> {
    let mut grid: Vec<TimeInstant> = vec![dep_lo];
    grid.extend(g.characteristic_dates());
    grid.sort();
    grid.dedup();
    grid.retain(|&d| d >= dep_lo);

    let max_hops = g.node_count();
    let mut best: BTreeMap<NodeId, TimeInstant> = BTreeMap::new();
    let mut frontier: BTreeMap<NodeId, Vec<(TimeInstant, usize)>> = BTreeMap::new();
    let mut stack = vec![(source, dep_lo, 0usize)];
    best.insert(source, dep_lo);
    frontier.insert(source, vec![(dep_lo, 0)]);

    while let Some((node, ready, hops)) = stack.pop() {
        if hops == max_hops {
            continue;
        }
        for (next, edge) in g.neighbors(node) {
            for &d in &grid {
                if d < ready || !edge.is_present(d) {
                    continue;
                }
                let arrival = d;
                let entry = best.entry(next).or_insert(arrival);
                if arrival < *entry {
                    *entry = arrival;
                }
                let states = frontier.entry(next).or_default();
                let dominated = states.iter().any(|&(r, h)| r <= arrival && h <= hops + 1);
                if !dominated {
                    states.push((arrival, hops + 1));
                    stack.push((next, arrival, hops + 1));
                }
            }
        }
    }
    best
}

#[test]
fn criterion_02_journey_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut mismatches = 0usize;
    for case in 0..500 {
        let directed = case % 2 == 1;
        let (g, _) = random_graph(&mut rng, 6, 10, directed);
        let start = t(rng.random_range(0..MAX_TIME) as f64);
        for u in g.nodes() {
            let best = oracle_arrivals(&g, u, start);
            for v in g.nodes() {
                let found = foremost_journey(&g, u, v, start).unwrap();
                match (best.get(&v), found) {
                    (Some(&arrival), Some(j)) => {
                        if j.arrival != arrival {
                            mismatches += 1;
                        }
                    }
                    (None, None) => {}
                    _ => mismatches += 1,
                }
            }
        }
    }
    verdict(
        2,
        "foremost journeys match exhaustive enumeration on 500 random graphs",
        mismatches == 0,
    );
}

#[test]
fn criterion_03_footprint_is_not_temporal_connectivity() {
    let lifetime = TimeInterval::from_values(0.0, 3.0).unwrap();
    let mut g = TimeVaryingGraph::new(lifetime);
    let a = g.add_node();
    let b = g.add_node();
    let c = g.add_node();
    g.add_contact(b, c, t(0.0), t(1.0)).unwrap();
    g.add_contact(a, b, t(2.0), t(3.0)).unwrap();

    let connected = g.footprint().is_connected();
    let a_to_c = foremost_journey(&g, a, c, t(0.0)).unwrap();
    let a_to_b = foremost_journey(&g, a, b, t(0.0)).unwrap();
    let pass = connected
        && a_to_c.is_none()
        && a_to_b.as_ref().map(|j| j.arrival) == Some(t(2.0));
    verdict(
        3,
        "connected footprint yet no journey across the expired edge",
        pass,
    );
}

#[test]
fn criterion_04_taxonomy_grid() {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut mismatches = 0usize;
    for &to in &grid {
        for &ts in &grid {
            let kinds = EpistemicRep::new("p", to, ts, 0.5)
                .unwrap()
                .classify(0.0)
                .unwrap();
            let expect_knowledge = to == ts;
            let expect_belief = to > 0.0 && to < 1.0;
            let expect_opinion = to < 1.0;
            let expect_primary = if expect_knowledge {
                PrimaryKind::Knowledge
            } else if expect_belief {
                PrimaryKind::Belief
            } else if expect_opinion {
                PrimaryKind::Opinion
            } else {
                PrimaryKind::Unclassified
            };
            if kinds.knowledge != expect_knowledge
                || kinds.belief != expect_belief
                || kinds.opinion != expect_opinion
                || kinds.primary != expect_primary
            {
                mismatches += 1;
            }
            if expect_belief && !kinds.opinion {
                mismatches += 1;
            }
        }
    }
    let corner = EpistemicRep::new("p", 1.0, 0.3, 0.5)
        .unwrap()
        .classify(0.0)
        .unwrap();
    if corner.primary != PrimaryKind::Unclassified
        || corner.knowledge
        || corner.belief
        || corner.opinion
    {
        mismatches += 1;
    }
    verdict(
        4,
        "classification matches the definition ranges on the 25-point grid",
        mismatches == 0,
    );
}

// Plain restatement of the pairwise update, fed by the same seed stream the
// engine uses: n uniform opinions first, then one (u, v) draw per tick.
fn replay_complete_static(seed: u64, n: u32, ticks: u64, eps: f64, mu: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    for _ in 0..ticks {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let (i, j) = (u as usize, v as usize);
        let (xi, xj) = (x[i], x[j]);
        if (xj - xi).abs() < eps {
            x[i] = (xi + mu * (xj - xi)).clamp(0.0, 1.0);
            x[j] = (xj + mu * (xi - xj)).clamp(0.0, 1.0);
        }
    }
    x
}

fn complete_static_run(seed: u64, eps: f64) -> (Vec<f64>, Vec<f64>) {
    let kind = SocietyKind::CompleteStatic { ticks: 100_000 };
    let mut society = generate_society(&kind, 100, &MindSpec::bare("issue"), seed).unwrap();
    let initial: Vec<f64> = society
        .opinions("issue")
        .into_iter()
        .map(|o| o.unwrap())
        .collect();
    let mut config = SimConfig::classic("issue", eps, seed);
    config.mu = 0.5;
    config.delta_plus = 0.0;
    config.max_events = 100_000;
    let traj = run(&mut society, &config).unwrap();
    (initial, traj.final_opinions)
}

#[test]
fn criterion_05_classic_consensus_against_an_independent_replay() {
    let seed = 42;
    let (initial, final_x) = complete_static_run(seed, 1.0);
    let s = spread(&final_x).unwrap();
    let initial_mean = initial.iter().sum::<f64>() / initial.len() as f64;
    let drift = (s.mean - initial_mean).abs();

    let replay = replay_complete_static(seed, 100, 100_000, 1.0, 0.5);
    let ours = clusters(&final_x, 0.01).unwrap();
    let theirs = clusters(&replay, 0.01).unwrap();
    let same_structure = ours.count == theirs.count
        && ours
            .centroids
            .iter()
            .zip(&theirs.centroids)
            .all(|(a, b)| (a - b).abs() <= 1e-9);

    let pass = (s.max - s.min) < 1e-6 && drift <= 1e-9 && same_structure;
    verdict(
        5,
        "full-tolerance mixing reaches consensus and matches the replay's clusters",
        pass,
    );
}

#[test]
fn criterion_06_classic_fragmentation() {
    let mut pass = true;
    for seed in 1..=5u64 {
        let (_, final_x) = complete_static_run(seed, 0.05);
        let report = clusters(&final_x, 0.01).unwrap();
        if report.count <= 1 {
            pass = false;
        }
    }
    verdict(
        6,
        "a narrow tolerance leaves more than one cluster for each of 5 seeds",
        pass,
    );
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opidyn"))
}

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn simulate_into(config: &Path, out_dir: &Path) -> bool {
    bin()
        .arg("simulate")
        .arg(config)
        .arg("--quiet")
        .arg("--out-dir")
        .arg(out_dir)
        .status()
        .unwrap()
        .success()
}

#[test]
fn criterion_07_cognitive_mode_reduces_to_classic() {
    let dir = tempfile::tempdir().unwrap();
    let society = r#""society":{"kind":"complete_static","n":50,"ticks":5000,
        "mind":{"topic_confidence":0.0,"support_nodes":0,"support_confidence":0.0}}"#;
    let classic = write(
        dir.path(),
        "classic.json",
        &format!(
            r#"{{"topic":"issue","mode":{{"kind":"classic","eps":0.2}},
                "mu":0.5,"delta_plus":0.0,"delta_minus":0.0,"seed":99,{society}}}"#
        ),
    );
    let cognitive = write(
        dir.path(),
        "cognitive.json",
        &format!(
            r#"{{"topic":"issue","mode":{{"kind":"cognitive","eps_max":0.2,"k":1.0}},
                "mu":0.5,"delta_plus":0.0,"delta_minus":0.0,"seed":99,{society}}}"#
        ),
    );
    let (d1, d2) = (dir.path().join("classic"), dir.path().join("cognitive"));
    let ran = simulate_into(&classic, &d1) && simulate_into(&cognitive, &d2);
    let same = ran
        && fs::read(d1.join("trajectory.csv")).unwrap()
            == fs::read(d2.join("trajectory.csv")).unwrap();
    verdict(
        7,
        "zero-confidence cognitive trajectories are byte-equal to classic ones",
        same,
    );
}

#[test]
fn criterion_08_certainty_pins_an_agent_in_place() {
    let n = 5u32;
    let events = 10_000u64;
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let lifetime = TimeInterval::from_values(0.0, events as f64).unwrap();
    let mut contacts = TimeVaryingGraph::new(lifetime);
    for _ in 0..n {
        contacts.add_node();
    }
    for tick in 0..events {
        let (u, v) = pairs[(tick as usize) % pairs.len()];
        contacts
            .add_contact(
                NodeId(u),
                NodeId(v),
                t(tick as f64),
                t(tick as f64 + 1.0),
            )
            .unwrap();
    }
    let mut agents = Vec::new();
    for i in 0..n {
        let spec = MindSpec {
            topic: String::from("issue"),
            topic_confidence: if i == 0 { 1.0 } else { 0.0 },
            support_nodes: 0,
            support_confidence: 0.0,
        };
        let opinion = i as f64 / (n - 1) as f64;
        agents.push(Agent {
            id: NodeId(i),
            mind: synthesize_mind(&spec, opinion).unwrap(),
        });
    }
    let mut society = Society::from_parts(agents, contacts).unwrap();
    let mut config = SimConfig::cognitive("issue", 1.0, 0.0, 7);
    config.delta_plus = 0.0;
    config.max_events = events as usize;
    let traj = run(&mut society, &config).unwrap();

    let others = &traj.final_opinions[1..];
    let s = spread(others).unwrap();
    let pass = traj.records.len() == events as usize
        && traj.final_opinions[0] == 0.0
        && (s.max - s.min) < 1e-6;
    verdict(
        8,
        "a fully confident agent keeps its opinion while the rest settle",
        pass,
    );
}

#[test]
fn criterion_09_simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"topic":"issue","mode":{"kind":"classic","eps":0.5},"seed":123,
            "society":{"kind":"ring_static","n":8,"horizon":60}}"#,
    );
    let (d1, d2) = (dir.path().join("one"), dir.path().join("two"));
    let ran = simulate_into(&config, &d1) && simulate_into(&config, &d2);
    let same = ran
        && fs::read(d1.join("trajectory.csv")).unwrap()
            == fs::read(d2.join("trajectory.csv")).unwrap()
        && fs::read(d1.join("summary.json")).unwrap()
            == fs::read(d2.join("summary.json")).unwrap();
    verdict(
        9,
        "repeated runs of one config produce identical trajectory and summary bytes",
        same,
    );
}

#[test]
fn criterion_10_generate_simulate_analyze_round_trip() {
    let mut pass = true;
    for kind in ["complete-static", "random-pairwise", "ring-static"] {
        for n in [2u32, 10, 100] {
            let dir = tempfile::tempdir().unwrap();
            let generated = bin()
                .args([
                    "generate", kind, "--n", &n.to_string(),
                    "--ticks", "200", "--contacts", "300", "--horizon", "60",
                    "--seed", "9",
                ])
                .arg("--out-dir")
                .arg(dir.path())
                .arg("--quiet")
                .status()
                .unwrap()
                .success();
            let simulated = generated
                && simulate_into(&dir.path().join("config.json"), &dir.path().join("out"));
            let analyzed = simulated
                && bin()
                    .arg("analyze")
                    .arg(dir.path().join("society.trace"))
                    .stdout(std::process::Stdio::null())
                    .status()
                    .unwrap()
                    .success();
            if !analyzed {
                pass = false;
            }
        }
    }
    verdict(
        10,
        "generate, simulate, analyze pipeline exits cleanly for every kind and size",
        pass,
    );
}
