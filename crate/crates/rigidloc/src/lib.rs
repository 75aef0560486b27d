//! File formats and bundled data for `rigidloc-core`: the atlas text format,
//! the edge ledger format, and DOT export of the rigid graph.

pub mod atlas_text;
pub mod dot;
pub mod edges_text;

pub use rigidloc_core as core;

use rigidloc_core::atlas::Atlas;
use rigidloc_core::rigid::RigidGraph;

pub const BUNDLED_ATLAS: &str = include_str!("../data/atlas.txt");
pub const BUNDLED_EDGES: &str = include_str!("../data/edges.txt");

/// Loads and validates the bundled atlas.
pub fn bundled_atlas() -> Result<Atlas, atlas_text::LoadError> {
    atlas_text::load(BUNDLED_ATLAS)
}

pub fn bundled_graph() -> Result<RigidGraph, edges_text::EdgeFileError> {
    edges_text::parse(BUNDLED_EDGES)
}
