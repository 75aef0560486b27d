//! Edge ledger format, one record per line:
//!
//! ```text
//! verdict <id> <H> <G> <Localization|NotLocalization|Undecided> <route>
//! scope <main|extra>
//! chain A <n0> asserted <citation>
//! edge <H> <G> <verified|asserted> <citation or verdict id>
//! node <G>
//! ```
//!
//! Lines starting with `#` are comments. `scope` applies to the records
//! after it and defaults to `main`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rigidloc_core::localization::VerdictValue;
use rigidloc_core::rigid::{AlternatingChain, EdgeStatus, LocEdge, RigidError, RigidGraph, Scope, VerdictRecord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EdgeFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: RigidError },
}

fn verdict_value(s: &str) -> Option<VerdictValue> {
    match s {
        "Localization" => Some(VerdictValue::Localization),
        "NotLocalization" => Some(VerdictValue::NotLocalization),
        "Undecided" => Some(VerdictValue::Undecided),
        _ => None,
    }
}

/// Splits off `n` whitespace-separated tokens and returns the trimmed rest.
fn tokens(s: &str, n: usize) -> Option<(Vec<&str>, &str)> {
    let mut rest = s.trim_start();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        if rest.is_empty() {
            return None;
        }
        let (t, r) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        out.push(t);
        rest = r.trim_start();
    }
    Some((out, rest.trim_end()))
}

pub fn parse(text: &str) -> Result<RigidGraph, EdgeFileError> {
    let mut g = RigidGraph::new();
    let mut scope = Scope::Main;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let syntax = |message: &str| EdgeFileError::Syntax {
            line,
            message: message.into(),
        };
        let graph = |source: RigidError| EdgeFileError::Graph { line, source };
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (head, rest) = tokens(content, 1).expect("non-empty");
        match head[0] {
            "scope" => scope = Scope::parse(rest).ok_or_else(|| syntax("expected `scope main|extra`"))?,
            "node" => g.add_node(rest).map_err(graph)?,
            "verdict" => {
                let (t, extra) = tokens(rest, 5).ok_or_else(|| syntax("expected `verdict <id> <H> <G> <value> <route>`"))?;
                if !extra.is_empty() {
                    return Err(syntax("trailing text after verdict record"));
                }
                let value = verdict_value(t[3]).ok_or_else(|| syntax("bad verdict value"))?;
                g.add_verdict(VerdictRecord {
                    id: t[0].into(),
                    from: t[1].into(),
                    to: t[2].into(),
                    value,
                    route: t[4].into(),
                })
                .map_err(graph)?;
            }
            "chain" => {
                let (t, source) = tokens(rest, 3).ok_or_else(|| syntax("expected `chain A <n0> <status> <citation>`"))?;
                if t[0] != "A" {
                    return Err(syntax("only the alternating chain `A` is supported"));
                }
                let start = t[1].parse().map_err(|_| syntax("bad chain start"))?;
                let status = EdgeStatus::parse(t[2]).ok_or_else(|| syntax("bad edge status"))?;
                g.add_chain(AlternatingChain {
                    start,
                    status,
                    scope,
                    source: source.into(),
                })
                .map_err(graph)?;
            }
            "edge" => {
                let (t, source) = tokens(rest, 3).ok_or_else(|| syntax("expected `edge <H> <G> <status> <source>`"))?;
                let status = EdgeStatus::parse(t[2]).ok_or_else(|| syntax("bad edge status"))?;
                g.add_edge(LocEdge {
                    from: t[0].into(),
                    to: t[1].into(),
                    status,
                    scope,
                    source: source.into(),
                })
                .map_err(graph)?;
            }
            other => return Err(syntax(&format!("unknown record `{other}`"))),
        }
    }
    Ok(g)
}

/// Canonical form: verdicts, then main-scope and extra-scope records, then
/// nodes without edges.
pub fn write(g: &RigidGraph) -> String {
    let mut s = String::new();
    for v in g.verdicts() {
        let _ = writeln!(s, "verdict {} {} {} {} {}", v.id, v.from, v.to, v.value.as_str(), v.route);
    }
    for scope in [Scope::Main, Scope::Extra] {
        let chains: Vec<&AlternatingChain> = g.chains().iter().filter(|c| c.scope == scope).collect();
        let edges: Vec<&LocEdge> = g.edges().iter().filter(|e| e.scope == scope).collect();
        if chains.is_empty() && edges.is_empty() {
            continue;
        }
        let _ = writeln!(s, "scope {}", scope.as_str());
        for c in chains {
            let _ = writeln!(s, "chain A {} {} {}", c.start, c.status.as_str(), c.source);
        }
        for e in edges {
            let _ = writeln!(s, "edge {} {} {} {}", e.from, e.to, e.status.as_str(), e.source);
        }
    }
    let touched: BTreeSet<&str> = g
        .edges()
        .iter()
        .flat_map(|e| [e.from.as_str(), e.to.as_str()])
        .collect();
    for n in g.nodes().filter(|n| !touched.contains(n)) {
        let _ = writeln!(s, "node {n}");
    }
    s
}
