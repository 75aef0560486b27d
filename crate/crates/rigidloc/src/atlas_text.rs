//! Line-oriented atlas format:
//!
//! ```text
//! group <name> degree <n>
//! gen <cycle notation>
//! rel <word>
//! sub <label> <word>
//! meta order <N> <derived|asserted>
//! meta out <N> <derived|asserted>
//! end
//! ```
//!
//! `#` starts a comment. [`write`] emits the canonical form, which
//! [`parse`] reads back unchanged.

use std::fmt::Write as _;

use rigidloc_core::atlas::{Atlas, AtlasError, GroupRecord, NamedSubgroup, Provenance, RecordSource, Tagged};
use rigidloc_core::fp::Word;
use rigidloc_core::parse_perm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("record starting on line {line}: {source}")]
    Invalid { line: usize, source: AtlasError },
}

fn provenance(s: &str) -> Option<Provenance> {
    match s {
        "derived" => Some(Provenance::Derived),
        "asserted" => Some(Provenance::Asserted),
        _ => None,
    }
}

struct Partial {
    start: usize,
    name: String,
    degree: usize,
    gens: Vec<String>,
    rels: Vec<Word>,
    subs: Vec<NamedSubgroup>,
    order: Option<Tagged<u128>>,
    out: Option<Tagged<u64>>,
}

/// Parses every record, returning each with the line it starts on.
pub fn parse_with_lines(text: &str) -> Result<Vec<(usize, RecordSource)>, FormatError> {
    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| FormatError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match (key, cur.as_mut()) {
            ("group", None) => {
                let t: Vec<&str> = rest.split_whitespace().collect();
                let [name, "degree", n] = t.as_slice() else {
                    return Err(err("expected `group <name> degree <n>`".into()));
                };
                let degree = n.parse().map_err(|_| err(format!("bad degree `{n}`")))?;
                cur = Some(Partial {
                    start: line,
                    name: (*name).into(),
                    degree,
                    gens: Vec::new(),
                    rels: Vec::new(),
                    subs: Vec::new(),
                    order: None,
                    out: None,
                });
            }
            ("group", Some(_)) => return Err(err("`group` before `end`".into())),
            (_, None) => return Err(err(format!("`{key}` outside a group record"))),
            ("gen", Some(p)) => p.gens.push(rest.into()),
            ("rel", Some(p)) => p.rels.push(Word::parse(rest).map_err(|e| err(e.to_string()))?),
            ("sub", Some(p)) => {
                let (label, word) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if label.is_empty() {
                    return Err(err("expected `sub <label> <word>`".into()));
                }
                let w = Word::parse(word).map_err(|e| err(e.to_string()))?;
                match p.subs.iter_mut().find(|s| s.label == label) {
                    Some(s) => s.words.push(w),
                    None => p.subs.push(NamedSubgroup {
                        label: label.into(),
                        words: vec![w],
                    }),
                }
            }
            ("meta", Some(p)) => {
                let t: Vec<&str> = rest.split_whitespace().collect();
                let [field, n, prov] = t.as_slice() else {
                    return Err(err("expected `meta <field> <N> <derived|asserted>`".into()));
                };
                let prov = provenance(prov).ok_or_else(|| err(format!("bad provenance `{prov}`")))?;
                match *field {
                    "order" => {
                        let v = n.parse().map_err(|_| err(format!("bad order `{n}`")))?;
                        p.order = Some(Tagged { value: v, provenance: prov });
                    }
                    "out" => {
                        let v = n.parse().map_err(|_| err(format!("bad out order `{n}`")))?;
                        p.out = Some(Tagged { value: v, provenance: prov });
                    }
                    other => return Err(err(format!("unknown meta field `{other}`"))),
                }
            }
            ("end", Some(_)) => {
                let p = cur.take().expect("matched Some");
                let order = p.order.ok_or_else(|| err(format!("{}: missing `meta order`", p.name)))?;
                let mut generators = Vec::with_capacity(p.gens.len());
                for g in &p.gens {
                    generators.push(parse_perm(g, p.degree).map_err(|e| err(format!("{}: {e}", p.name)))?);
                }
                out.push((
                    p.start,
                    RecordSource {
                        name: p.name,
                        degree: p.degree,
                        generators,
                        relators: p.rels,
                        subgroups: p.subs,
                        order,
                        out_order: p.out,
                    },
                ));
            }
            (other, Some(_)) => return Err(err(format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(p) = cur {
        return Err(FormatError {
            line: p.start,
            message: format!("{}: record not closed by `end`", p.name),
        });
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Vec<RecordSource>, FormatError> {
    Ok(parse_with_lines(text)?.into_iter().map(|(_, s)| s).collect())
}

/// Parses and validates; nothing is returned unless every record is valid.
pub fn load(text: &str) -> Result<Atlas, LoadError> {
    let sources = parse_with_lines(text)?;
    let mut atlas = Atlas::new();
    for (line, s) in sources {
        let r = GroupRecord::new(s).map_err(|source| LoadError::Invalid { line, source })?;
        atlas.insert(r).map_err(|source| LoadError::Invalid { line, source })?;
    }
    Ok(atlas)
}

pub fn write(sources: &[RecordSource]) -> String {
    let mut s = String::new();
    for (k, r) in sources.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "group {} degree {}", r.name, r.degree);
        for g in &r.generators {
            let _ = writeln!(s, "gen {g}");
        }
        for w in &r.relators {
            let _ = writeln!(s, "rel {w}");
        }
        for sub in &r.subgroups {
            for w in &sub.words {
                let _ = writeln!(s, "sub {} {w}", sub.label);
            }
        }
        let _ = writeln!(s, "meta order {} {}", r.order.value, r.order.provenance);
        if let Some(o) = r.out_order {
            let _ = writeln!(s, "meta out {} {}", o.value, o.provenance);
        }
        s.push_str("end\n");
    }
    s
}
