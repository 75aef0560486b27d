//! Graphviz export. Verified edges are solid, asserted ones dashed; the
//! alternating chain is drawn between consecutive `A_n` nodes present.

use std::fmt::Write as _;

use rigidloc_core::rigid::{alternating_degree, EdgeStatus, RigidGraph};

fn style(s: EdgeStatus) -> &'static str {
    match s {
        EdgeStatus::Verified => "solid",
        EdgeStatus::Asserted => "dashed",
    }
}

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &RigidGraph) -> String {
    let mut s = String::from("digraph rigid {\n");
    for n in g.nodes() {
        let _ = writeln!(s, "  {};", quote(n));
    }
    for e in g.edges() {
        let _ = writeln!(s, "  {} -> {} [style={}];", quote(&e.from), quote(&e.to), style(e.status));
    }
    let mut alt: Vec<(u64, &str)> = g.nodes().filter_map(|n| alternating_degree(n).map(|d| (d, n))).collect();
    alt.sort_unstable();
    for c in g.chains() {
        let run: Vec<&(u64, &str)> = alt.iter().filter(|(d, _)| *d >= c.start).collect();
        for w in run.windows(2) {
            let _ = writeln!(
                s,
                "  {} -> {} [style={}, label=\"chain\"];",
                quote(w[0].1),
                quote(w[1].1),
                style(c.status)
            );
        }
    }
    s.push_str("}\n");
    s
}
