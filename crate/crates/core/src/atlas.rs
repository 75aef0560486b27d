//! Group records: permutation generators, an optional presentation, named
//! subgroups and provenance-tagged metadata.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::StabilizerChain;
use crate::error::{PermError, WordError};
use crate::fp::{check_relators, coset_enumerate, Presentation, Word, DEFAULT_MAX_COSETS};
use crate::perm::Permutation;

/// Largest order for which simplicity is checked on every conjugacy class.
pub const EXHAUSTIVE_SIMPLICITY_ORDER: u128 = 10_000;
/// Random elements tried above [`EXHAUSTIVE_SIMPLICITY_ORDER`].
pub const SIMPLICITY_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Derived,
    Asserted,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Derived => "derived",
            Provenance::Asserted => "asserted",
        }
    }

    /// The weaker of two tags.
    pub fn weakest(self, other: Provenance) -> Provenance {
        self.max(other)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: Provenance,
}

impl<T> Tagged<T> {
    pub fn derived(value: T) -> Self {
        Tagged {
            value,
            provenance: Provenance::Derived,
        }
    }

    pub fn asserted(value: T) -> Self {
        Tagged {
            value,
            provenance: Provenance::Asserted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplicityStatus {
    Verified,
    Asserted,
}

/// A subgroup given by words in the record's generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubgroup {
    pub label: String,
    pub words: Vec<Word>,
}

/// Unvalidated record data, as read from or written to an atlas file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordSource {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub relators: Vec<Word>,
    pub subgroups: Vec<NamedSubgroup>,
    pub order: Tagged<u128>,
    pub out_order: Option<Tagged<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AtlasError {
    #[error("{name}: relator {relator} fails on the generators")]
    RelatorViolation { name: String, relator: String },
    #[error("{name}: generators give order {found}, metadata says {expected}")]
    OrderMismatch {
        name: String,
        expected: u128,
        found: u128,
    },
    #[error("{name}: presentation defines a group of order {found}, expected {expected}")]
    PresentationOrder {
        name: String,
        expected: u128,
        found: String,
    },
    #[error("duplicate group name {0}")]
    Duplicate(String),
    #[error("{name}: not simple, normal closure of an element has order {witness_order}")]
    NotSimple { name: String, witness_order: u128 },
    #[error("{name}: subgroup {label} uses a letter outside the generators")]
    BadSubgroup { name: String, label: String },
    #[error("{name}: {detail}")]
    Malformed { name: String, detail: String },
    #[error("{name}: {source}")]
    Perm { name: String, source: PermError },
    #[error("{name}: {source}")]
    Word { name: String, source: WordError },
}

/// Outcome of [`verify_simplicity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    /// Every tested nontrivial element has normal closure equal to the group.
    Verified { exhaustive: bool },
    /// A proper nontrivial normal subgroup, given by generators.
    Counterexample {
        generators: Vec<Permutation>,
        order: u128,
    },
    /// The group is trivial.
    Trivial,
}

/// Normal closure of `seeds` in the group generated by `chain`.
pub fn normal_closure(chain: &StabilizerChain, seeds: &[Permutation]) -> StabilizerChain {
    let degree = chain.degree();
    let ambient = chain.group_generators();
    let mut gens: Vec<Permutation> = seeds.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut closure = StabilizerChain::new(degree, &gens).expect("degree checked by caller");
    let mut i = 0;
    while i < gens.len() {
        let mut grew = false;
        for s in &ambient {
            let c = gens[i].conjugate_by(s);
            if !closure.contains(&c) {
                gens.push(c);
                grew = true;
            }
        }
        if grew {
            closure = StabilizerChain::new(degree, &gens).expect("same degree");
        }
        i += 1;
    }
    closure
}

/// Representatives of the conjugacy classes of a group small enough to list.
pub fn class_representatives(chain: &StabilizerChain) -> Vec<Permutation> {
    let n = chain.order() as usize;
    let gens = chain.group_generators();
    let mut seen = alloc::vec![false; n];
    let mut reps = Vec::new();
    for r in 0..n {
        if seen[r] {
            continue;
        }
        let g = chain.unrank(r as u64);
        seen[r] = true;
        let mut stack = alloc::vec![g.clone()];
        while let Some(x) = stack.pop() {
            for s in &gens {
                let y = x.conjugate_by(s);
                let k = chain.rank(&y).expect("conjugate lies in the group") as usize;
                if !seen[k] {
                    seen[k] = true;
                    stack.push(y);
                }
            }
        }
        reps.push(g);
    }
    reps
}

/// Tests simplicity by normal closures: every conjugacy class when the order
/// is at most [`EXHAUSTIVE_SIMPLICITY_ORDER`], otherwise
/// [`SIMPLICITY_SAMPLES`] seeded random elements.
pub fn verify_simplicity(chain: &StabilizerChain) -> Simplicity {
    let order = chain.order();
    if order <= 1 {
        return Simplicity::Trivial;
    }
    let exhaustive = order <= EXHAUSTIVE_SIMPLICITY_ORDER;
    let candidates: Vec<Permutation> = if exhaustive {
        class_representatives(chain)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
        (0..SIMPLICITY_SAMPLES).map(|_| chain.random_element(&mut rng)).collect()
    };
    for g in candidates {
        if g.is_identity() {
            continue;
        }
        let closure = normal_closure(chain, core::slice::from_ref(&g));
        let o = closure.order();
        if o != order {
            return Simplicity::Counterexample {
                generators: closure.group_generators(),
                order: o,
            };
        }
    }
    Simplicity::Verified { exhaustive }
}

/// A validated atlas entry.
#[derive(Clone, Debug)]
pub struct GroupRecord {
    source: RecordSource,
    presentation: Option<Presentation>,
    chain: Option<StabilizerChain>,
    simplicity: SimplicityStatus,
}

impl GroupRecord {
    /// Validates `source`: generator degrees, relators, chain order against
    /// the metadata, the presentation's order by coset enumeration, subgroup
    /// words, and simplicity. Records without generators are stubs and must
    /// carry asserted metadata.
    pub fn new(source: RecordSource) -> Result<Self, AtlasError> {
        let name = source.name.clone();
        let perm_err = |e: PermError| AtlasError::Perm {
            name: name.clone(),
            source: e,
        };
        if source.generators.is_empty() {
            if source.order.provenance != Provenance::Asserted {
                return Err(AtlasError::Malformed {
                    name,
                    detail: "a record without generators needs asserted metadata".into(),
                });
            }
            if !source.relators.is_empty() || !source.subgroups.is_empty() {
                return Err(AtlasError::Malformed {
                    name,
                    detail: "relators or subgroups given without generators".into(),
                });
            }
            return Ok(GroupRecord {
                source,
                presentation: None,
                chain: None,
                simplicity: SimplicityStatus::Asserted,
            });
        }
        let chain = StabilizerChain::new(source.degree, &source.generators).map_err(perm_err)?;
        let found = chain.order();
        if found != source.order.value {
            return Err(AtlasError::OrderMismatch {
                name,
                expected: source.order.value,
                found,
            });
        }
        let ngens = source.generators.len();
        let word_err = |e: WordError| AtlasError::Word {
            name: name.clone(),
            source: e,
        };
        let presentation = if source.relators.is_empty() {
            None
        } else {
            let p = Presentation::new(ngens, source.relators.clone()).map_err(word_err)?;
            for r in p.relators() {
                if !r.evaluate(&source.generators).map_err(word_err)?.is_identity() {
                    return Err(AtlasError::RelatorViolation {
                        name,
                        relator: r.to_string(),
                    });
                }
            }
            debug_assert!(check_relators(&p, &source.generators).unwrap_or(false));
            let cap = DEFAULT_MAX_COSETS.min(usize::try_from(found).unwrap_or(usize::MAX).saturating_mul(16).max(1024));
            match coset_enumerate(&p, &[], cap) {
                Ok(t) if t.n_cosets() as u128 == found => {}
                Ok(t) => {
                    return Err(AtlasError::PresentationOrder {
                        name,
                        expected: found,
                        found: t.n_cosets().to_string(),
                    })
                }
                Err(e) => {
                    return Err(AtlasError::PresentationOrder {
                        name,
                        expected: found,
                        found: e.to_string(),
                    })
                }
            }
            Some(p)
        };
        for sub in &source.subgroups {
            if sub.words.iter().any(|w| w.max_generator() > ngens) {
                return Err(AtlasError::BadSubgroup {
                    name,
                    label: sub.label.clone(),
                });
            }
        }
        let simplicity = match verify_simplicity(&chain) {
            Simplicity::Verified { .. } => SimplicityStatus::Verified,
            Simplicity::Counterexample { order, .. } => {
                return Err(AtlasError::NotSimple {
                    name,
                    witness_order: order,
                })
            }
            Simplicity::Trivial => {
                return Err(AtlasError::Malformed {
                    name,
                    detail: "trivial group".into(),
                })
            }
        };
        Ok(GroupRecord {
            source,
            presentation,
            chain: Some(chain),
            simplicity,
        })
    }

    pub fn name(&self) -> &str {
        &self.source.name
    }

    pub fn degree(&self) -> usize {
        self.source.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.source.generators
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn subgroups(&self) -> &[NamedSubgroup] {
        &self.source.subgroups
    }

    pub fn subgroup(&self, label: &str) -> Option<&NamedSubgroup> {
        self.source.subgroups.iter().find(|s| s.label == label)
    }

    pub fn order(&self) -> Tagged<u128> {
        self.source.order
    }

    pub fn out_order(&self) -> Option<Tagged<u64>> {
        self.source.out_order
    }

    /// `None` for stub records.
    pub fn chain(&self) -> Option<&StabilizerChain> {
        self.chain.as_ref()
    }

    pub fn is_stub(&self) -> bool {
        self.chain.is_none()
    }

    pub fn simplicity(&self) -> SimplicityStatus {
        self.simplicity
    }

    /// Non-abelian with verified simplicity.
    pub fn is_nonabelian_simple(&self) -> bool {
        self.simplicity == SimplicityStatus::Verified
            && self.source.generators.iter().enumerate().any(|(i, g)| {
                self.source.generators[i + 1..].iter().any(|h| !g.commutes_with(h))
            })
    }

    pub fn source(&self) -> &RecordSource {
        &self.source
    }
}

/// An ordered catalog of validated records with unique names.
#[derive(Clone, Debug, Default)]
pub struct Atlas {
    records: Vec<GroupRecord>,
}

impl Atlas {
    pub fn new() -> Self {
        Atlas::default()
    }

    /// Validates every source; fails on the first error and keeps nothing.
    pub fn from_sources(sources: Vec<RecordSource>) -> Result<Self, (usize, AtlasError)> {
        let mut atlas = Atlas::new();
        for (i, s) in sources.into_iter().enumerate() {
            let r = GroupRecord::new(s).map_err(|e| (i, e))?;
            atlas.insert(r).map_err(|e| (i, e))?;
        }
        Ok(atlas)
    }

    pub fn insert(&mut self, record: GroupRecord) -> Result<(), AtlasError> {
        if self.get(record.name()).is_some() {
            return Err(AtlasError::Duplicate(record.name().into()));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&GroupRecord> {
        self.records.iter().find(|r| r.name() == name)
    }

    pub fn records(&self) -> &[GroupRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn sources(&self) -> Vec<RecordSource> {
        self.records.iter().map(|r| r.source.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;
    use alloc::vec;

    fn perms(deg: usize, cycles: &[&str]) -> Vec<Permutation> {
        cycles.iter().map(|c| parse_perm(c, deg).unwrap()).collect()
    }

    fn a5_source() -> RecordSource {
        RecordSource {
            name: "A5".into(),
            degree: 5,
            generators: perms(5, &["(1 2)(3 4)", "(1 3 5)"]),
            relators: vec![
                Word::parse("aa").unwrap(),
                Word::parse("bbb").unwrap(),
                Word::parse("ab").unwrap().pow(5),
            ],
            subgroups: vec![NamedSubgroup {
                label: "point".into(),
                words: vec![Word::parse("BAb").unwrap(), Word::parse("aBA").unwrap()],
            }],
            order: Tagged::derived(60),
            out_order: Some(Tagged::asserted(2)),
        }
    }

    #[test]
    fn a5_record_validates() {
        let r = GroupRecord::new(a5_source()).unwrap();
        assert_eq!(r.simplicity(), SimplicityStatus::Verified);
        assert!(r.is_nonabelian_simple());
        assert_eq!(r.chain().unwrap().order(), 60);
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let mut s = a5_source();
        s.order = Tagged::derived(61);
        assert!(matches!(
            GroupRecord::new(s),
            Err(AtlasError::OrderMismatch { expected: 61, found: 60, .. })
        ));
    }

    #[test]
    fn wrong_relator_is_rejected() {
        let mut s = a5_source();
        s.relators.push(Word::parse("ab").unwrap().pow(3));
        assert!(matches!(GroupRecord::new(s), Err(AtlasError::RelatorViolation { .. })));
    }

    #[test]
    fn incomplete_presentation_is_rejected() {
        let mut s = a5_source();
        s.relators.pop();
        assert!(matches!(GroupRecord::new(s), Err(AtlasError::PresentationOrder { .. })));
    }

    #[test]
    fn atomic_duplicate_failure() {
        let err = Atlas::from_sources(vec![a5_source(), a5_source()]).unwrap_err();
        assert_eq!(err.0, 1);
        assert!(matches!(err.1, AtlasError::Duplicate(_)));
        assert!(Atlas::from_sources(vec![]).unwrap().is_empty());
    }

    #[test]
    fn s5_is_not_simple() {
        let s5 = StabilizerChain::new(5, &perms(5, &["(1 2)", "(1 2 3 4 5)"])).unwrap();
        match verify_simplicity(&s5) {
            Simplicity::Counterexample { order, .. } => assert_eq!(order, 60),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_prime_order_passes_but_is_abelian() {
        let c7 = StabilizerChain::new(7, &perms(7, &["(1 2 3 4 5 6 7)"])).unwrap();
        assert_eq!(verify_simplicity(&c7), Simplicity::Verified { exhaustive: true });
        let src = RecordSource {
            name: "C7".into(),
            degree: 7,
            generators: perms(7, &["(1 2 3 4 5 6 7)"]),
            relators: vec![],
            subgroups: vec![],
            order: Tagged::derived(7),
            out_order: None,
        };
        let r = GroupRecord::new(src).unwrap();
        assert!(!r.is_nonabelian_simple());
    }

    #[test]
    fn stub_requires_asserted_order() {
        let mut src = a5_source();
        src.generators.clear();
        src.relators.clear();
        src.subgroups.clear();
        assert!(GroupRecord::new(src.clone()).is_err());
        src.order = Tagged::asserted(60);
        let r = GroupRecord::new(src).unwrap();
        assert!(r.is_stub());
        assert_eq!(r.simplicity(), SimplicityStatus::Asserted);
    }

    #[test]
    fn class_count_of_a5() {
        let a5 = StabilizerChain::new(5, &perms(5, &["(1 2)(3 4)", "(1 3 5)"])).unwrap();
        assert_eq!(class_representatives(&a5).len(), 5);
    }
}
