#![no_std]
//! Computational core for deciding whether an inclusion of finite simple
//! groups `H ↪ G` is a localization, i.e. whether every homomorphism
//! `H → G` extends uniquely to an endomorphism of `G`.
//!
//! Everything here is pure computation over permutation groups and finitely
//! presented groups; file formats and the command line live in the
//! `rigidloc` crate.

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod atlas;
pub mod aut;
pub mod chain;
pub mod embed;
pub mod error;
pub mod fp;
pub mod localization;
pub mod perm;
pub mod rigid;
pub mod search;
pub mod union_find;

#[cfg(test)]
extern crate self as rigidloc_core;
#[cfg(test)]
#[path = "../tests/common/groups.rs"]
mod groups;

pub use chain::StabilizerChain;
pub use perm::{parse_perm, Permutation};
