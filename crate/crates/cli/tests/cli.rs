use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opidyn"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).expect("test file writes");
    path
}

const COUNTEREXAMPLE: &str = "b c 0 1\na b 2 3\n";

#[test]
fn analyze_reports_the_ordering_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "counter.trace", COUNTEREXAMPLE);
    let out = run(bin().arg("analyze").arg(&trace).args(["--reach", "a", "0"]));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("footprint connected: true"), "got:\n{text}");
    assert!(text.contains("footprint edges: 2"));
    assert!(text.contains("snapshots: 3"));
    let reach_line = text
        .lines()
        .find(|l| l.starts_with("reachable from a at 0:"))
        .expect("reach line printed");
    let reached: Vec<&str> = reach_line
        .split(':')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .collect();
    assert!(reached.contains(&"a"));
    assert!(reached.contains(&"b"));
    assert!(!reached.contains(&"c"), "a must not reach c: {reach_line}");
}

#[test]
fn analyze_accepts_an_empty_trace_with_a_declared_lifetime() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "empty.trace", "# nothing here\n");
    let out = run(bin().arg("analyze").arg(&trace).args(["--lifetime", "0:5"]));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("snapshots: 1"), "got:\n{text}");
    assert!(text.contains("nodes: 0"));
}

#[test]
fn analyze_rejects_a_malformed_line_citing_it() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "bad.trace", "a b 0 1\na c 2 x\n");
    let out = run(bin().arg("analyze").arg(&trace));
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error: parse: line 2"), "got: {err}");
}

#[test]
fn analyze_exports_the_snapshot_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "counter.trace", COUNTEREXAMPLE);
    let csv_path = dir.path().join("snaps.csv");
    let out = run(bin()
        .arg("analyze")
        .arg(&trace)
        .arg("--snapshots")
        .arg(&csv_path));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let csv = fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "snapshot,start,end,edge_count,edges");
    assert_eq!(lines.len(), 4, "three snapshots plus header: {csv}");
    assert!(lines[1].starts_with("0,0,1,1,"));
    assert!(lines[2].starts_with("1,1,2,0,"));
    assert!(lines[3].starts_with("2,2,3,1,"));
}

#[test]
fn journey_prints_hops_and_arrival() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "one.trace", "a b 2 3\n");
    let out = run(bin().arg("journey").arg(&trace).args(["a", "b", "0"]));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("hops: (a,b)@2"), "got:\n{text}");
    assert!(text.contains("arrival: 2"));
}

#[test]
fn journey_to_itself_is_empty_and_arrives_at_the_start() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "one.trace", "a b 2 3\n");
    let out = run(bin().arg("journey").arg(&trace).args(["a", "a", "1.5"]));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "hops:"), "got:\n{text}");
    assert!(text.contains("arrival: 1.5"));
}

#[test]
fn journey_answers_no_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "counter.trace", COUNTEREXAMPLE);
    let out = run(bin().arg("journey").arg(&trace).args(["a", "c", "0"]));
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out).trim(), "none");
}

#[test]
fn journey_rejects_unknown_nodes_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "counter.trace", COUNTEREXAMPLE);
    let out = run(bin().arg("journey").arg(&trace).args(["a", "z", "0"]));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: usage: unknown node"));
}

fn consensus_config(seed: u64) -> String {
    format!(
        r#"{{
  "topic": "issue",
  "mode": {{"kind": "classic", "eps": 1.0}},
  "mu": 0.5,
  "seed": {seed},
  "max_events": 100000,
  "convergence": {{"tol": 1e-7, "window": 200}},
  "society": {{"kind": "complete_static", "n": 100, "ticks": 100000}}
}}
"#
    )
}

#[test]
fn simulate_full_mixing_summary_reports_one_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", &consensus_config(42));
    let out_dir = dir.path().join("out");
    let out = run(bin()
        .arg("simulate")
        .arg(&config)
        .arg("--quiet")
        .arg("--out-dir")
        .arg(&out_dir));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "", "quiet runs print nothing");

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["clusters"]["count"], 1, "summary: {summary}");
    assert_eq!(summary["agents"], 100);
    let csv = fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with(
        "event,time,agent_i,agent_j,x_i_pre,x_j_pre,x_i_post,x_j_post,eps_i,eps_j,updated_i,updated_j\n"
    ));
}

#[test]
fn simulate_twice_with_one_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", &consensus_config(7));
    let (d1, d2) = (dir.path().join("one"), dir.path().join("two"));
    for d in [&d1, &d2] {
        let out = run(bin()
            .arg("simulate")
            .arg(&config)
            .arg("--quiet")
            .arg("--out-dir")
            .arg(d));
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    for name in ["trajectory.csv", "summary.json"] {
        let a = fs::read(d1.join(name)).unwrap();
        let b = fs::read(d2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    // manifests agree once the wall-clock field is ignored
    let strip = |p: &Path| {
        fs::read_to_string(p.join("manifest.json"))
            .unwrap()
            .lines()
            .filter(|l| !l.contains("created_unix"))
            .filter(|l| !l.contains("/one/") && !l.contains("/two/"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&d1), strip(&d2));
}

#[test]
fn simulate_reports_a_missing_minds_file_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "society.trace", "0 1 0 5\n");
    let config = write(
        dir.path(),
        "config.json",
        r#"{"topic":"issue","mode":{"kind":"classic","eps":0.2},"seed":1,
            "society":{"kind":"trace","trace":"society.trace","minds":"absent.json"}}"#,
    );
    let out = run(bin().arg("simulate").arg(&config).arg("--quiet"));
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error: io:"), "got: {err}");
    assert!(err.contains("absent.json"), "path cited: {err}");
}

#[test]
fn simulate_enumerates_every_config_violation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"topic":"","mode":{"kind":"classic","eps":1.5},"mu":-0.25,"seed":1,
            "society":{"kind":"ring_static","n":4,"horizon":5}}"#,
    );
    let out = run(bin().arg("simulate").arg(&config).arg("--quiet"));
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("error: config: topic must not be empty"), "got: {err}");
    assert!(err.contains("error: config: eps must lie in [0, 1], got 1.5"));
    assert!(err.contains("error: config: mu must lie in [0, 1], got -0.25"));
}

#[test]
fn simulate_sweep_writes_one_directory_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"topic":"issue","mode":{"kind":"classic","eps":0.5},"seed":20,
            "society":{"kind":"ring_static","n":6,"horizon":8}}"#,
    );
    let out_dir = dir.path().join("sweep");
    let out = run(bin()
        .arg("simulate")
        .arg(&config)
        .arg("--quiet")
        .arg("--sweep")
        .arg("3")
        .arg("--out-dir")
        .arg(&out_dir));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    for seed in [20, 21, 22] {
        let manifest: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(out_dir.join(format!("run_{seed}")).join("manifest.json"))
                .unwrap(),
        )
        .unwrap();
        assert_eq!(manifest["seed"], seed);
    }
}

#[test]
fn generated_ring_of_four_has_exactly_four_contacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["generate", "ring-static", "--n", "4", "--seed", "5"])
        .arg("--out-dir")
        .arg(dir.path())
        .arg("--quiet"));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let trace = fs::read_to_string(dir.path().join("society.trace")).unwrap();
    let contacts = trace
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .count();
    assert_eq!(contacts, 4, "trace:\n{trace}");
}

#[test]
fn generate_is_reproducible_for_one_seed() {
    let base = tempfile::tempdir().unwrap();
    let (d1, d2) = (base.path().join("g1"), base.path().join("g2"));
    for d in [&d1, &d2] {
        let out = run(bin()
            .args([
                "generate",
                "random-pairwise",
                "--n",
                "10",
                "--contacts",
                "40",
                "--horizon",
                "20",
                "--seed",
                "11",
                "--support-nodes",
                "2",
                "--support-confidence",
                "0.7",
            ])
            .arg("--out-dir")
            .arg(d)
            .arg("--quiet"));
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    for name in ["society.trace", "minds.json", "config.json"] {
        let a = fs::read(d1.join(name)).unwrap();
        let b = fs::read(d2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs for identical seeds");
    }
}

#[test]
fn generate_rejects_a_single_agent() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["generate", "ring-static", "--n", "1"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: usage:"), "got: {}", stderr(&out));
}

#[test]
fn a_generated_society_round_trips_through_a_trace_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args([
            "generate",
            "ring-static",
            "--n",
            "5",
            "--seed",
            "3",
            "--topic-confidence",
            "0.4",
            "--support-nodes",
            "1",
            "--support-confidence",
            "0.6",
        ])
        .arg("--out-dir")
        .arg(dir.path())
        .arg("--quiet"));
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    // rewire the emitted artifacts through an explicit trace society
    let config = write(
        dir.path(),
        "trace_config.json",
        r#"{"topic":"issue","mode":{"kind":"cognitive","eps_max":0.3,"k":1.0},"seed":5,
            "delta_plus":0.0,
            "society":{"kind":"trace","trace":"society.trace","minds":"minds.json"}}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(bin()
        .arg("simulate")
        .arg(&config)
        .arg("--quiet")
        .arg("--out-dir")
        .arg(&out_dir));
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    // the loaded minds carry confidence 0.4 on the topic and 0.6 on the
    // correlated support, so every tolerance is 0.3 * (1 - 0.5 * 2/3) = 0.2
    let csv = fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        for idx in [8, 9] {
            let eps: f64 = fields[idx].parse().unwrap();
            assert!((eps - 0.2).abs() < 1e-12, "eps in {line}");
        }
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn the_environment_variable_sets_the_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"topic":"issue","mode":{"kind":"classic","eps":0.5},"seed":2,
            "society":{"kind":"ring_static","n":4,"horizon":6}}"#,
    );
    let env_dir = dir.path().join("from_env");
    let out = run(bin()
        .arg("simulate")
        .arg(&config)
        .arg("--quiet")
        .env("OPIDYN_OUT_DIR", &env_dir));
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(env_dir.join("trajectory.csv").exists());
    assert!(env_dir.join("summary.json").exists());
    assert!(env_dir.join("manifest.json").exists());
}

#[test]
fn mind_files_reject_unknown_designated_kinds() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "society.trace", "0 1 0 5\n");
    write(
        dir.path(),
        "minds.json",
        r#"[
            {"nodes":[{"id":0,"topic":"issue","T_o":0.0,"T_s":0.5,"d_c":0.0,"designated_kind":"hunch"}]},
            {"nodes":[{"id":0,"topic":"issue","T_o":0.0,"T_s":0.5,"d_c":0.0}]}
        ]"#,
    );
    let config = write(
        dir.path(),
        "config.json",
        r#"{"topic":"issue","mode":{"kind":"classic","eps":0.2},"seed":1,
            "society":{"kind":"trace","trace":"society.trace","minds":"minds.json"}}"#,
    );
    let out = run(bin().arg("simulate").arg(&config).arg("--quiet"));
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("designated_kind must be knowledge, belief, or opinion"),
        "got: {}",
        stderr(&out)
    );
}

#[test]
fn lifetime_overrides_reject_contacts_outside_them() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "one.trace", "a b 2 3\n");
    let out = run(bin()
        .arg("analyze")
        .arg(&trace)
        .args(["--lifetime", "0:1"]));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: parse: line 1"), "got: {}", stderr(&out));
}
