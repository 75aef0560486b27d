use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rigidloc::{atlas_text, dot, edges_text};
use rigidloc_core::atlas::Atlas;
use rigidloc_core::aut::aut_realization;
use rigidloc_core::embed::{check_largest_maximal, coset_embedding, CosetEmbedding, MIN_DEGREE};
use rigidloc_core::localization::{is_localization, Options, VerdictValue};
use rigidloc_core::rigid::{EdgeFilter, RigidGraph};
use rigidloc_core::search::Limits;

#[derive(Parser, Debug)]
#[command(name = "rigidloc", version, about = "Localizations between finite simple groups")]
struct Cli {
    /// Atlas file; the bundled corpus if omitted.
    #[arg(long, global = true, env = "RIGIDLOC_ATLAS")]
    atlas: Option<PathBuf>,
    /// Edge ledger; the bundled edge set if omitted.
    #[arg(long, global = true, env = "RIGIDLOC_EDGES")]
    edges: Option<PathBuf>,
    /// Largest source group order for monomorphism enumeration.
    #[arg(long, global = true, env = "RIGIDLOC_MAX_ORDER", value_parser = clap::value_parser!(u64).range(1..))]
    max_order: Option<u64>,
    /// Largest target degree for monomorphism enumeration.
    #[arg(long, global = true, env = "RIGIDLOC_MAX_DEGREE", value_parser = clap::value_parser!(u64).range(1..))]
    max_degree: Option<u64>,
    /// Coset table bound.
    #[arg(long, global = true, env = "RIGIDLOC_MAX_COSETS", value_parser = clap::value_parser!(u64).range(1..))]
    max_cosets: Option<u64>,
    /// Also run the brute-force count and require agreement.
    #[arg(long, global = true, env = "RIGIDLOC_CROSS_CHECK")]
    cross_check: bool,
    #[arg(long, global = true, env = "RIGIDLOC_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Localization,
    NotLocalization,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Filter {
    All,
    Verified,
    Main,
}

impl From<Filter> for EdgeFilter {
    fn from(f: Filter) -> Self {
        match f {
            Filter::All => EdgeFilter::All,
            Filter::Verified => EdgeFilter::VerifiedOnly,
            Filter::Main => EdgeFilter::MainOnly,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Atlas,
    Edges,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether H ↪ G is a localization.
    Verify {
        h: String,
        g: String,
        /// Exit 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Coset action of H on a named subgroup, with the largest-maximal test.
    Embed {
        h: String,
        /// Subgroup label; the first one if omitted.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Order and realization of Aut(G).
    Aut { g: String },
    /// Connected components of the edge ledger.
    Components {
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Shortest zigzag between two groups.
    Path {
        x: String,
        y: String,
        /// Edge set to search; main-scope edges first, then all, if omitted.
        #[arg(long, value_enum)]
        filter: Option<Filter>,
    },
    /// Load the atlas and report each record.
    ValidateAtlas,
    /// Canonical text of the atlas or ledger, or DOT for the ledger.
    Export {
        #[arg(long, value_enum, default_value_t = What::Edges)]
        what: What,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

const OK: u8 = 0;
const ERROR: u8 = 1;
const UNDECIDED: u8 = 2;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn atlas_text(cli: &Cli) -> Result<String, Failure> {
    match &cli.atlas {
        Some(p) => read(p),
        None => Ok(rigidloc::BUNDLED_ATLAS.to_string()),
    }
}

fn load_atlas(cli: &Cli) -> Result<Atlas, Failure> {
    Ok(atlas_text::load(&atlas_text(cli)?)?)
}

fn load_graph(cli: &Cli) -> Result<RigidGraph, Failure> {
    let text = match &cli.edges {
        Some(p) => read(p)?,
        None => rigidloc::BUNDLED_EDGES.to_string(),
    };
    Ok(edges_text::parse(&text)?)
}

fn options(cli: &Cli) -> Options {
    let mut limits = Limits::default();
    if let Some(n) = cli.max_order {
        limits.max_source_order = n.into();
    }
    if let Some(n) = cli.max_degree {
        limits.max_target_degree = n as usize;
    }
    Options {
        cross_check: cli.cross_check,
        limits,
        max_cosets: cli.max_cosets.map(|n| n as usize),
    }
}

fn describe_embedding(e: &CosetEmbedding, out: &mut String) {
    use std::fmt::Write as _;
    let _ = writeln!(out, "source: {}", e.source);
    let words: Vec<String> = e.stabilizer_words.iter().map(|w| w.to_string()).collect();
    let _ = writeln!(out, "stabilizer: [{}]", words.join(", "));
    let _ = writeln!(out, "degree: {}", e.degree);
    for (k, g) in e.images.iter().enumerate() {
        let _ = writeln!(out, "image {}: {g}", k + 1);
    }
    let _ = writeln!(out, "even: {}", e.evenness);
    let _ = writeln!(out, "faithful: {}", e.faithful);
    let _ = writeln!(out, "transitive: {}", e.transitive);
    let _ = writeln!(out, "primitive: {}", e.primitive);
    let _ = writeln!(out, "order_maximal: {}", e.order_maximal);
    let _ = writeln!(out, "unique_index_class: {}", e.unique_index_class);
    for c in 0..e.table.n_cosets() {
        let row: Vec<String> = e.table.action().iter().map(|g| (g.image(c as u32) + 1).to_string()).collect();
        let _ = writeln!(out, "coset {}: {}", c + 1, row.join(" "));
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<u8, Failure> {
    use std::fmt::Write as _;
    match &cli.command {
        Command::Verify { h, g, expect } => {
            let atlas = load_atlas(cli)?;
            let v = is_localization(&atlas, h, g, &options(cli))?;
            out.push_str(&v.to_text());
            Ok(match (v.value, expect) {
                (VerdictValue::Undecided, _) => UNDECIDED,
                (VerdictValue::Localization, Some(Expect::NotLocalization))
                | (VerdictValue::NotLocalization, Some(Expect::Localization)) => ERROR,
                _ => OK,
            })
        }
        Command::Embed { h, subgroup } => {
            let atlas = load_atlas(cli)?;
            let rec = atlas.get(h).ok_or_else(|| Failure(format!("unknown group {h}")))?;
            let sub = match subgroup {
                Some(label) => rec
                    .subgroup(label)
                    .ok_or_else(|| Failure(format!("{h} has no subgroup `{label}`")))?,
                None => rec
                    .subgroups()
                    .first()
                    .ok_or_else(|| Failure(format!("{h} has no named subgroups")))?,
            };
            let max = options(cli).max_cosets;
            let e = coset_embedding(rec, &sub.words, max)?;
            let e = if e.degree >= MIN_DEGREE {
                check_largest_maximal(rec, &sub.words, max)?
            } else {
                e
            };
            describe_embedding(&e, out);
            let decided = e.order_maximal.is_pass() && e.unique_index_class.is_pass();
            Ok(if decided { OK } else { UNDECIDED })
        }
        Command::Aut { g } => {
            let atlas = load_atlas(cli)?;
            let rec = atlas.get(g).ok_or_else(|| Failure(format!("unknown group {g}")))?;
            let a = aut_realization(rec)?;
            let _ = writeln!(out, "group: {}", a.name());
            let _ = writeln!(out, "aut_order: {} {}", a.aut_order().value, a.aut_order().provenance);
            let _ = writeln!(out, "out_order: {} {}", a.out_order().value, a.out_order().provenance);
            let _ = writeln!(out, "mode: {}", a.mode().as_str());
            let _ = writeln!(out, "degree: {}", a.realization().degree());
            let _ = writeln!(out, "certified: {}", a.is_certified());
            for c in a.certificate() {
                let _ = writeln!(out, "certificate: {c}");
            }
            Ok(if a.is_certified() { OK } else { UNDECIDED })
        }
        Command::Components { filter } => {
            let g = load_graph(cli)?;
            for c in g.components((*filter).into()) {
                let _ = writeln!(out, "{} ({}): {}", c.representative, c.members.len(), c.members.join(" "));
            }
            Ok(OK)
        }
        Command::Path { x, y, filter } => {
            let g = load_graph(cli)?;
            let p = match filter {
                Some(f) => g.zigzag_path(x, y, (*f).into())?,
                None => match g.zigzag_path(x, y, EdgeFilter::MainOnly)? {
                    Some(p) => Some(p),
                    None => g.zigzag_path(x, y, EdgeFilter::All)?,
                },
            };
            match p {
                Some(p) => {
                    let _ = writeln!(out, "{}", p.render());
                    Ok(OK)
                }
                None => {
                    let _ = writeln!(out, "none");
                    Ok(UNDECIDED)
                }
            }
        }
        Command::ValidateAtlas => {
            let atlas = load_atlas(cli)?;
            for r in atlas.records() {
                let _ = writeln!(
                    out,
                    "{} degree={} order={} {} presentation={} simplicity={:?}",
                    r.name(),
                    r.degree(),
                    r.order().value,
                    r.order().provenance,
                    r.presentation().is_some(),
                    r.simplicity()
                );
            }
            let _ = writeln!(out, "{} records valid", atlas.len());
            Ok(OK)
        }
        Command::Export { what } => {
            match (what, cli.format) {
                (What::Atlas, Format::Text) => {
                    let sources = atlas_text::parse(&atlas_text(cli)?)?;
                    out.push_str(&atlas_text::write(&sources));
                }
                (What::Atlas, Format::Dot) => return Err(Failure("the atlas has no DOT form".into())),
                (What::Edges, Format::Text) => out.push_str(&edges_text::write(&load_graph(cli)?)),
                (What::Edges, Format::Dot) => out.push_str(&dot::to_dot(&load_graph(cli)?)),
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ERROR
        }
    };
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::from(code)
}
