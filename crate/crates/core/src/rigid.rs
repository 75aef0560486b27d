//! A ledger of localization edges between simple groups, with connected
//! components and shortest zigzag paths.
//!
//! Connectivity ignores edge direction. The chain `A_n ↪ A_{n+1}` for all
//! `n` past a threshold is stored as a single family record and only ever
//! expanded between nodes that exist.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::localization::{Verdict, VerdictValue};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeStatus {
    Verified,
    Asserted,
}

impl EdgeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeStatus::Verified => "verified",
            EdgeStatus::Asserted => "asserted",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "verified" => Some(EdgeStatus::Verified),
            "asserted" => Some(EdgeStatus::Asserted),
            _ => None,
        }
    }
}

/// Whether an edge belongs to the zigzags connecting the main list of
/// groups, or is a further example.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Main,
    Extra,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Main => "main",
            Scope::Extra => "extra",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "main" => Some(Scope::Main),
            "extra" => Some(Scope::Extra),
            _ => None,
        }
    }
}

/// One localization `from ↪ to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocEdge {
    pub from: String,
    pub to: String,
    pub status: EdgeStatus,
    pub scope: Scope,
    /// Citation for asserted edges, verdict id for verified ones.
    pub source: String,
}

/// The family `A_n ↪ A_{n+1}` for every `n ≥ start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingChain {
    pub start: u64,
    pub status: EdgeStatus,
    pub scope: Scope,
    pub source: String,
}

/// What a verified edge points at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictRecord {
    pub id: String,
    pub from: String,
    pub to: String,
    pub value: VerdictValue,
    pub route: String,
}

impl VerdictRecord {
    pub fn from_verdict(id: &str, v: &Verdict) -> Self {
        VerdictRecord {
            id: id.into(),
            from: v.pair.0.clone(),
            to: v.pair.1.clone(),
            value: v.value,
            route: v.route.as_str().into(),
        }
    }

    pub fn is_localization(&self) -> bool {
        self.value == VerdictValue::Localization
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RigidError {
    #[error("unknown verdict `{0}`")]
    UnknownVerdict(String),
    #[error("verdict `{0}` is not a localization")]
    NotLocalization(String),
    #[error("verdict `{id}` concerns {from} ↪ {to}")]
    VerdictPairMismatch { id: String, from: String, to: String },
    #[error("duplicate verdict id `{0}`")]
    DuplicateVerdict(String),
    #[error("asserted edge {0} ↪ {1} has no citation")]
    MissingCitation(String, String),
    #[error("edge {0} ↪ {0} is a loop")]
    Loop(String),
    #[error("bad group name `{0}`")]
    BadName(String),
    #[error("unknown group `{0}`")]
    UnknownNode(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EdgeFilter {
    #[default]
    All,
    VerifiedOnly,
    MainOnly,
}

impl EdgeFilter {
    fn admits(self, status: EdgeStatus, scope: Scope) -> bool {
        match self {
            EdgeFilter::All => true,
            EdgeFilter::VerifiedOnly => status == EdgeStatus::Verified,
            EdgeFilter::MainOnly => scope == Scope::Main,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Lexicographically least member.
    pub representative: String,
    pub members: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrow {
    /// The left group includes into the right one.
    Into,
    /// The right group includes into the left one.
    From,
}

impl Arrow {
    pub fn symbol(self) -> &'static str {
        match self {
            Arrow::Into => "↪",
            Arrow::From => "↩",
        }
    }
}

/// Alternating sequence of groups and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagPath {
    pub nodes: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl ZigzagPath {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.nodes.iter().any(|n| n == name)
    }

    pub fn render(&self) -> String {
        let mut s = self.nodes.first().cloned().unwrap_or_default();
        for (a, n) in self.arrows.iter().zip(&self.nodes[1..]) {
            s.push(' ');
            s.push_str(a.symbol());
            s.push(' ');
            s.push_str(n);
        }
        s
    }
}

/// Degree of a node named `A<n>`.
pub fn alternating_degree(name: &str) -> Option<u64> {
    let digits = name.strip_prefix('A')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn alternating_name(n: u64) -> String {
    format!("A{n}")
}

fn check_name(name: &str) -> Result<(), RigidError> {
    if name.is_empty() || name.chars().any(char::is_whitespace) || name.starts_with('#') {
        Err(RigidError::BadName(name.into()))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RigidGraph {
    nodes: BTreeSet<String>,
    edges: Vec<LocEdge>,
    chains: Vec<AlternatingChain>,
    verdicts: Vec<VerdictRecord>,
}

/// A neighbour reached through one edge or one chain segment.
struct Step {
    to: usize,
    weight: u64,
    arrow: Arrow,
}

impl RigidGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn edges(&self) -> &[LocEdge] {
        &self.edges
    }

    pub fn chains(&self) -> &[AlternatingChain] {
        &self.chains
    }

    pub fn verdicts(&self) -> &[VerdictRecord] {
        &self.verdicts
    }

    pub fn contains(&self, name: &str) -> bool {
        self.nodes.contains(name)
    }

    pub fn add_node(&mut self, name: &str) -> Result<(), RigidError> {
        check_name(name)?;
        self.nodes.insert(name.into());
        Ok(())
    }

    pub fn verdict(&self, id: &str) -> Option<&VerdictRecord> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn add_verdict(&mut self, record: VerdictRecord) -> Result<(), RigidError> {
        check_name(&record.id)?;
        if self.verdict(&record.id).is_some() {
            return Err(RigidError::DuplicateVerdict(record.id));
        }
        self.verdicts.push(record);
        Ok(())
    }

    pub fn add_edge(&mut self, e: LocEdge) -> Result<(), RigidError> {
        check_name(&e.from)?;
        check_name(&e.to)?;
        if e.from == e.to {
            return Err(RigidError::Loop(e.from));
        }
        match e.status {
            EdgeStatus::Asserted if e.source.trim().is_empty() => {
                return Err(RigidError::MissingCitation(e.from, e.to));
            }
            EdgeStatus::Verified => {
                let v = self
                    .verdict(&e.source)
                    .ok_or_else(|| RigidError::UnknownVerdict(e.source.clone()))?;
                if !v.is_localization() {
                    return Err(RigidError::NotLocalization(e.source));
                }
                if v.from != e.from || v.to != e.to {
                    return Err(RigidError::VerdictPairMismatch {
                        id: e.source.clone(),
                        from: v.from.clone(),
                        to: v.to.clone(),
                    });
                }
            }
            EdgeStatus::Asserted => {}
        }
        self.nodes.insert(e.from.clone());
        self.nodes.insert(e.to.clone());
        self.edges.push(e);
        Ok(())
    }

    /// Stores a localization verdict and the verified edge it supports.
    pub fn add_verified(&mut self, id: &str, v: &Verdict, scope: Scope) -> Result<(), RigidError> {
        self.add_verdict(VerdictRecord::from_verdict(id, v))?;
        self.add_edge(LocEdge {
            from: v.pair.0.clone(),
            to: v.pair.1.clone(),
            status: EdgeStatus::Verified,
            scope,
            source: id.into(),
        })
    }

    pub fn add_chain(&mut self, c: AlternatingChain) -> Result<(), RigidError> {
        if c.status == EdgeStatus::Asserted && c.source.trim().is_empty() {
            return Err(RigidError::MissingCitation(alternating_name(c.start), String::from("…")));
        }
        if c.status == EdgeStatus::Verified {
            return Err(RigidError::UnknownVerdict(c.source));
        }
        self.chains.push(c);
        Ok(())
    }

    fn index(&self) -> (Vec<&str>, BTreeMap<&str, usize>) {
        let names: Vec<&str> = self.nodes.iter().map(String::as_str).collect();
        let idx = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        (names, idx)
    }

    /// Neighbour lists under `filter`; chain segments join consecutive
    /// alternating nodes from the chain start on.
    fn adjacency(&self, filter: EdgeFilter) -> Vec<Vec<Step>> {
        let (names, idx) = self.index();
        let mut adj: Vec<Vec<Step>> = (0..names.len()).map(|_| Vec::new()).collect();
        for e in self.edges.iter().filter(|e| filter.admits(e.status, e.scope)) {
            let (a, b) = (idx[e.from.as_str()], idx[e.to.as_str()]);
            adj[a].push(Step { to: b, weight: 1, arrow: Arrow::Into });
            adj[b].push(Step { to: a, weight: 1, arrow: Arrow::From });
        }
        let mut alt: Vec<(u64, usize)> = names
            .iter()
            .enumerate()
            .filter_map(|(i, n)| alternating_degree(n).map(|d| (d, i)))
            .collect();
        alt.sort_unstable();
        for c in self.chains.iter().filter(|c| filter.admits(c.status, c.scope)) {
            let run: Vec<&(u64, usize)> = alt.iter().filter(|(d, _)| *d >= c.start).collect();
            for w in run.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                adj[lo.1].push(Step { to: hi.1, weight: hi.0 - lo.0, arrow: Arrow::Into });
                adj[hi.1].push(Step { to: lo.1, weight: hi.0 - lo.0, arrow: Arrow::From });
            }
        }
        adj
    }

    pub fn components(&self, filter: EdgeFilter) -> Vec<Component> {
        let (names, _) = self.index();
        let adj = self.adjacency(filter);
        let mut uf = UnionFind::new(names.len());
        for (a, steps) in adj.iter().enumerate() {
            for s in steps {
                uf.union(a, s.to);
            }
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(n.to_string());
        }
        let mut out: Vec<Component> = groups
            .into_values()
            .map(|members| Component {
                representative: members[0].clone(),
                members,
            })
            .collect();
        out.sort_by(|a, b| a.representative.cmp(&b.representative));
        out
    }

    pub fn component_of(&self, name: &str, filter: EdgeFilter) -> Option<Component> {
        self.components(filter)
            .into_iter()
            .find(|c| c.members.iter().any(|m| m == name))
    }

    /// Shortest zigzag from `x` to `y`, counting each `A_n ↪ A_{n+1}` step.
    /// Ties break towards lexicographically smaller names.
    pub fn zigzag_path(&self, x: &str, y: &str, filter: EdgeFilter) -> Result<Option<ZigzagPath>, RigidError> {
        let (names, idx) = self.index();
        let s = *idx.get(x).ok_or_else(|| RigidError::UnknownNode(x.into()))?;
        let t = *idx.get(y).ok_or_else(|| RigidError::UnknownNode(y.into()))?;
        let adj = self.adjacency(filter);
        let mut dist: Vec<Option<u64>> = alloc::vec![None; names.len()];
        let mut prev: Vec<Option<(usize, Arrow)>> = alloc::vec![None; names.len()];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(0);
        heap.push(Reverse((0u64, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            if u == t {
                break;
            }
            for step in &adj[u] {
                let nd = d + step.weight;
                let better = match dist[step.to] {
                    None => true,
                    Some(old) => nd < old || (nd == old && prev[step.to].is_some_and(|(p, _)| names[u] < names[p])),
                };
                if better {
                    dist[step.to] = Some(nd);
                    prev[step.to] = Some((u, step.arrow));
                    heap.push(Reverse((nd, step.to)));
                }
            }
        }
        if dist[t].is_none() {
            return Ok(None);
        }
        let mut hops: Vec<(usize, usize, Arrow)> = Vec::new();
        let mut v = t;
        while v != s {
            let (u, a) = prev[v].expect("reached");
            hops.push((u, v, a));
            v = u;
        }
        hops.reverse();
        let mut path = ZigzagPath {
            nodes: alloc::vec![names[s].to_string()],
            arrows: Vec::new(),
        };
        for (u, v, a) in hops {
            match (alternating_degree(names[u]), alternating_degree(names[v])) {
                (Some(du), Some(dv)) if du.abs_diff(dv) > 1 && !self.has_direct_edge(names[u], names[v], filter) => {
                    let steps: Vec<u64> = if du < dv {
                        (du + 1..=dv).collect()
                    } else {
                        (dv..du).rev().collect()
                    };
                    for d in steps {
                        path.nodes.push(alternating_name(d));
                        path.arrows.push(a);
                    }
                }
                _ => {
                    path.nodes.push(names[v].to_string());
                    path.arrows.push(a);
                }
            }
        }
        Ok(Some(path))
    }

    fn has_direct_edge(&self, a: &str, b: &str, filter: EdgeFilter) -> bool {
        self.edges
            .iter()
            .filter(|e| filter.admits(e.status, e.scope))
            .any(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }
}
