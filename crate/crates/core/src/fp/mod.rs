//! Finitely presented groups: words, presentations, coset tables.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{PermError, WordError};
use crate::perm::Permutation;

mod low_index;
mod todd_coxeter;

pub use low_index::{low_index_subgroups, LOW_INDEX_GUARD};
pub use todd_coxeter::{coset_enumerate, DEFAULT_MAX_COSETS};

/// A word in the generators: `+i` is generator `i` (1-based), `-i` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        Word { letters }
    }

    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(index: usize) -> Self {
        Word::new(alloc::vec![index as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses letters `a`, `b`, … (generators) and `A`, `B`, … (inverses);
    /// whitespace between letters is optional.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for (position, ch) in text.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            let l = match ch {
                'a'..='z' => (ch as i32) - ('a' as i32) + 1,
                'A'..='Z' => -((ch as i32) - ('A' as i32) + 1),
                _ => {
                    return Err(WordError::BadLetter {
                        letter: String::from(ch),
                        position,
                    })
                }
            };
            letters.push(l);
        }
        Ok(Word { letters })
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Cancels adjacent `x x⁻¹` pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Evaluates the word on generator images.
    pub fn evaluate(&self, images: &[Permutation]) -> Result<Permutation, WordError> {
        let degree = images.first().map(|g| g.degree()).unwrap_or(0);
        let inverses: Vec<Permutation> = images.iter().map(|g| g.inverse()).collect();
        let mut acc = Permutation::identity(degree);
        for &l in &self.letters {
            let idx = l.unsigned_abs() as usize;
            if idx == 0 || idx > images.len() {
                return Err(WordError::GeneratorOutOfRange {
                    index: idx,
                    n_generators: images.len(),
                });
            }
            let g = if l > 0 { &images[idx - 1] } else { &inverses[idx - 1] };
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                }
                .into());
            }
            acc.mul_assign(g);
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let base = if l > 0 { b'a' } else { b'A' };
            let ch = (base + (l.unsigned_abs() as u8 - 1)) as char;
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Generators and relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    n_generators: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(n_generators: usize, relators: Vec<Word>) -> Result<Self, WordError> {
        if n_generators > 26 {
            return Err(WordError::GeneratorOutOfRange {
                index: n_generators,
                n_generators: 26,
            });
        }
        for r in &relators {
            if r.max_generator() > n_generators {
                return Err(WordError::GeneratorOutOfRange {
                    index: r.max_generator(),
                    n_generators,
                });
            }
        }
        Ok(Presentation {
            n_generators,
            relators,
        })
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

/// True iff every relator evaluates to the identity on `images`.
pub fn check_relators(p: &Presentation, images: &[Permutation]) -> Result<bool, WordError> {
    if images.len() != p.n_generators {
        return Err(WordError::ImageCount {
            expected: p.n_generators,
            found: images.len(),
        });
    }
    if let Some(first) = images.first() {
        for g in images {
            if g.degree() != first.degree() {
                return Err(PermError::DegreeMismatch {
                    expected: first.degree(),
                    found: g.degree(),
                }
                .into());
            }
        }
    }
    for r in &p.relators {
        if !r.evaluate(images)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A complete coset table: the right action of the generators on the cosets
/// of a subgroup. Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    action: Vec<Permutation>,
    subgroup_words: Vec<Word>,
}

impl CosetTable {
    pub(crate) fn new(action: Vec<Permutation>, subgroup_words: Vec<Word>) -> Self {
        CosetTable {
            action,
            subgroup_words,
        }
    }

    pub fn n_cosets(&self) -> usize {
        self.action.first().map(|g| g.degree()).unwrap_or(1)
    }

    /// Index of the subgroup.
    pub fn index(&self) -> usize {
        self.n_cosets()
    }

    /// Action of each generator on the cosets.
    pub fn action(&self) -> &[Permutation] {
        &self.action
    }

    pub fn subgroup_words(&self) -> &[Word] {
        &self.subgroup_words
    }

    /// Image of `coset` under the word.
    pub fn apply_word(&self, mut coset: u32, w: &Word) -> u32 {
        for &l in w.letters() {
            let g = &self.action[l.unsigned_abs() as usize - 1];
            coset = if l > 0 {
                g.image(coset)
            } else {
                g.images().iter().position(|&y| y == coset).expect("bijection") as u32
            };
        }
        coset
    }

    /// Relators act trivially, subgroup words fix coset 0, action transitive.
    pub fn verify(&self, p: &Presentation) -> bool {
        let relators_ok = p.relators().iter().all(|r| {
            r.evaluate(&self.action)
                .map(|g| g.is_identity())
                .unwrap_or(false)
        }) || self.action.is_empty();
        let subgroup_ok = self.subgroup_words.iter().all(|w| self.apply_word(0, w) == 0);
        let chain = crate::chain::StabilizerChain::new(self.n_cosets(), &self.action);
        let transitive = chain.map(|c| c.is_transitive()).unwrap_or(false);
        relators_ok && subgroup_ok && transitive
    }

    /// Schreier generators of the stabilizer of coset 0, as words.
    pub fn stabilizer_words(&self) -> Vec<Word> {
        let n = self.n_cosets();
        let mut rep: Vec<Option<Word>> = alloc::vec![None; n];
        rep[0] = Some(Word::identity());
        let mut queue = alloc::vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let c = queue[head];
            head += 1;
            for (i, g) in self.action.iter().enumerate() {
                for sign in [1i32, -1] {
                    let d = if sign > 0 {
                        g.image(c)
                    } else {
                        g.images().iter().position(|&y| y == c).expect("bijection") as u32
                    };
                    if rep[d as usize].is_none() {
                        let w = rep[c as usize]
                            .as_ref()
                            .expect("visited")
                            .concat(&Word::new(alloc::vec![sign * (i as i32 + 1)]));
                        rep[d as usize] = Some(w);
                        queue.push(d);
                    }
                }
            }
        }
        let mut out: Vec<Word> = Vec::new();
        for c in 0..n {
            let rc = rep[c].as_ref().expect("transitive");
            for (i, g) in self.action.iter().enumerate() {
                let d = g.image(c as u32) as usize;
                let w = rc
                    .concat(&Word::generator(i + 1))
                    .concat(&rep[d].as_ref().expect("transitive").inverse())
                    .free_reduce();
                if !w.is_empty() && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }
}
