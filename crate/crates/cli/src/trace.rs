use opidyn_core::{NodeId, TimeInstant, TimeInterval, TimeVaryingGraph};

use crate::errors::CliError;

/// A contact trace bound to a graph, with the node tokens that named its
/// nodes. Tokens map to dense indices in order of first appearance.
#[derive(Debug, Clone)]
pub struct ParsedTrace {
    pub graph: TimeVaryingGraph,
    pub names: Vec<String>,
}

impl ParsedTrace {
    pub fn node(&self, token: &str) -> Option<NodeId> {
        self.graph.node_by_label(token)
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.names[n.index()]
    }
}

#[derive(Debug)]
struct RawContact {
    line_no: usize,
    u: String,
    v: String,
    t1: f64,
    t2: f64,
    label: Option<String>,
}

fn bad_line(line_no: usize, detail: impl std::fmt::Display) -> CliError {
    CliError::parse(format!("line {line_no}: {detail}"))
}

fn parse_number(token: &str, line_no: usize, what: &str) -> Result<f64, CliError> {
    let value: f64 = token
        .parse()
        .map_err(|_| bad_line(line_no, format!("{what} is not a number: {token:?}")))?;
    if value.is_nan() {
        return Err(bad_line(line_no, format!("{what} is NaN")));
    }
    if value < 0.0 {
        return Err(bad_line(line_no, format!("{what} is negative: {value}")));
    }
    Ok(value)
}

/// Reads `u v t_start t_end [label]` lines. `#` starts a comment, blank
/// lines are skipped, `inf` is a valid t_end. Without an explicit lifetime
/// the trace spans from its earliest start to its latest end.
pub fn parse_trace(
    text: &str,
    lifetime: Option<TimeInterval>,
) -> Result<ParsedTrace, CliError> {
    let mut raws: Vec<RawContact> = Vec::new();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(p) => &full_line[..p],
            None => full_line,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() < 4 || fields.len() > 5 {
            return Err(bad_line(
                line_no,
                format!(
                    "expected `u v t_start t_end [label]`, found {} fields",
                    fields.len()
                ),
            ));
        }
        if fields[0] == fields[1] {
            return Err(bad_line(
                line_no,
                format!("contact connects {:?} to itself", fields[0]),
            ));
        }
        let t1 = parse_number(fields[2], line_no, "t_start")?;
        if !t1.is_finite() {
            return Err(bad_line(line_no, "t_start must be finite"));
        }
        let t2 = parse_number(fields[3], line_no, "t_end")?;
        if t2 <= t1 {
            return Err(bad_line(
                line_no,
                format!("contact ends at {t2} before it starts at {t1}"),
            ));
        }
        raws.push(RawContact {
            line_no,
            u: String::from(fields[0]),
            v: String::from(fields[1]),
            t1,
            t2,
            label: fields.get(4).map(|s| String::from(*s)),
        });
    }

    let lifetime = match lifetime {
        Some(l) => l,
        None => {
            if raws.is_empty() {
                return Err(CliError::parse(
                    "trace has no contacts; pass an explicit lifetime to analyze an empty graph",
                ));
            }
            let start = raws.iter().map(|r| r.t1).fold(f64::INFINITY, f64::min);
            let end = raws.iter().map(|r| r.t2).fold(f64::NEG_INFINITY, f64::max);
            TimeInterval::from_values(start, end)
                .map_err(|e| CliError::parse(format!("derived lifetime is invalid: {e}")))?
        }
    };

    let mut graph = TimeVaryingGraph::new(lifetime);
    let mut names: Vec<String> = Vec::new();
    for raw in &raws {
        for token in [&raw.u, &raw.v] {
            if graph.node_by_label(token).is_none() {
                graph
                    .add_labeled_node(token)
                    .expect("tokens are interned exactly once");
                names.push(token.clone());
            }
        }
    }
    for raw in &raws {
        let u = graph.node_by_label(&raw.u).expect("interned above");
        let v = graph.node_by_label(&raw.v).expect("interned above");
        let t1 = TimeInstant::new(raw.t1).expect("validated nonnegative");
        let t2 = TimeInstant::new(raw.t2).expect("validated nonnegative");
        graph
            .add_contact(u, v, t1, t2)
            .map_err(|e| bad_line(raw.line_no, e))?;
        if let Some(label) = &raw.label {
            if let Some(edge) = graph.edge_mut(u, v) {
                edge.set_label(Some(label.clone()));
            }
        }
    }
    Ok(ParsedTrace { graph, names })
}

/// Renders a graph back into trace lines, one per maximal presence interval.
pub fn write_trace(graph: &TimeVaryingGraph, names: &[String]) -> String {
    let mut out = String::from("# contact trace: u v t_start t_end\n");
    for edge in graph.edges() {
        let (u, v) = edge.endpoints();
        for iv in edge.available_dates() {
            out.push_str(&format!(
                "{} {} {} {}\n",
                names[u.index()],
                names[v.index()],
                iv.start().value(),
                iv.end().value()
            ));
        }
    }
    out
}

/// Parses the `--lifetime START:END` flag; END may be `inf`.
pub fn parse_lifetime_flag(text: &str) -> Result<TimeInterval, CliError> {
    let bad = || {
        CliError::usage(format!(
            "lifetime must look like START:END with END possibly inf, got {text:?}"
        ))
    };
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let start: f64 = a.trim().parse().map_err(|_| bad())?;
    let end: f64 = b.trim().parse().map_err(|_| bad())?;
    TimeInterval::from_values(start, end)
        .map_err(|e| CliError::usage(format!("lifetime {text:?} is invalid: {e}")))
}
