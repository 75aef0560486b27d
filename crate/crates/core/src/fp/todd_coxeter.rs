//! HLT coset enumeration with lookahead.
//!
//! Columns come in pairs: `2i` is generator `i`, `2i + 1` its inverse. The
//! scan order is fixed, so the resulting table is reproducible.

use alloc::vec;
use alloc::vec::Vec;

use super::{CosetTable, Presentation, Word};
use crate::error::{EnumerationError, WordError};
use crate::perm::Permutation;

pub const DEFAULT_MAX_COSETS: usize = 1 << 22;

const UNDEF: u32 = u32::MAX;

struct Full;

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    forward: Vec<u32>,
    n_alloc: usize,
    max_cosets: usize,
    queue: Vec<u32>,
}

#[inline]
fn column(letter: i32) -> usize {
    let g = (letter.unsigned_abs() - 1) as usize;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

impl Enumerator {
    fn new(n_generators: usize, max_cosets: usize) -> Self {
        let ncols = 2 * n_generators;
        let mut e = Enumerator {
            ncols,
            table: Vec::new(),
            forward: Vec::new(),
            n_alloc: 0,
            max_cosets: max_cosets.max(1),
            queue: Vec::new(),
        };
        e.push_row();
        e
    }

    fn push_row(&mut self) -> u32 {
        let c = self.n_alloc as u32;
        self.table.extend(core::iter::repeat(UNDEF).take(self.ncols));
        self.forward.push(c);
        self.n_alloc += 1;
        c
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.ncols + col] = d;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn live_count(&self) -> usize {
        (0..self.n_alloc as u32).filter(|&c| self.is_live(c)).count()
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, Full> {
        if self.n_alloc >= self.max_cosets {
            return Err(Full);
        }
        let d = self.push_row();
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.forward[r as usize] != r {
            r = self.forward[r as usize];
        }
        let mut x = c;
        while self.forward[x as usize] != r {
            let next = self.forward[x as usize];
            self.forward[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (keep, kill) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.forward[kill as usize] = keep;
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for col in 0..self.ncols {
                let target = self.get(dead, col);
                if target == UNDEF {
                    continue;
                }
                if self.get(target, col ^ 1) == dead {
                    self.set(target, col ^ 1, UNDEF);
                }
                let mu = self.rep(dead);
                let nu = self.rep(target);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, col ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `word` at coset `c`, defining cosets when `fill` is set.
    fn scan(&mut self, c: u32, word: &[usize], fill: bool) -> Result<(), Full> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, word[i]) != UNDEF {
                f = self.get(f, word[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, word[j as usize] ^ 1) != UNDEF {
                b = self.get(b, word[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn lookahead(&mut self, relators: &[Vec<usize>]) {
        let mut c = 0u32;
        while (c as usize) < self.n_alloc {
            if self.is_live(c) {
                for r in relators {
                    let _ = self.scan(c, r, false);
                    if !self.is_live(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    /// Removes dead rows, preserving the order of live ones. Returns the new
    /// index of each old coset (live ones only).
    fn compact(&mut self) -> Vec<u32> {
        let mut new_index = vec![UNDEF; self.n_alloc];
        let mut next = 0u32;
        for c in 0..self.n_alloc as u32 {
            if self.is_live(c) {
                new_index[c as usize] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..self.n_alloc as u32 {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.ncols {
                let t = self.get(c, col);
                table.push(if t == UNDEF { UNDEF } else { new_index[t as usize] });
            }
        }
        self.table = table;
        self.n_alloc = next as usize;
        self.forward = (0..next).collect();
        new_index
    }
}

fn columns_of(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|&l| column(l)).collect()
}

/// Enumerates the cosets of `⟨subgroup_words⟩` in the group presented by `p`.
///
/// Overflow of `max_cosets` is an error; no partial table is returned.
pub fn coset_enumerate(
    p: &Presentation,
    subgroup_words: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, EnumerationError> {
    for w in subgroup_words {
        if w.max_generator() > p.n_generators() {
            return Err(WordError::GeneratorOutOfRange {
                index: w.max_generator(),
                n_generators: p.n_generators(),
            }
            .into());
        }
    }
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.free_reduce())
        .filter(|r| !r.is_empty())
        .map(|r| columns_of(&r))
        .collect();
    let subgroup: Vec<Vec<usize>> = subgroup_words
        .iter()
        .map(|w| w.free_reduce())
        .filter(|w| !w.is_empty())
        .map(|w| columns_of(&w))
        .collect();
    let mut e = Enumerator::new(p.n_generators(), max_cosets);
    let overflow = EnumerationError::Overflow { max_cosets };

    // Subgroup generators at coset 0.
    let mut k = 0;
    while k < subgroup.len() {
        match e.scan(0, &subgroup[k], true) {
            Ok(()) => k += 1,
            Err(Full) => {
                e.lookahead(&relators);
                e.compact();
                if e.n_alloc >= e.max_cosets {
                    return Err(overflow);
                }
            }
        }
    }

    let mut c = 0u32;
    'cosets: while (c as usize) < e.n_alloc {
        if !e.is_live(c) {
            c += 1;
            continue;
        }
        let mut r = 0;
        while r < relators.len() {
            match e.scan(c, &relators[r], true) {
                Ok(()) => {
                    if !e.is_live(c) {
                        c += 1;
                        continue 'cosets;
                    }
                    r += 1;
                }
                Err(Full) => {
                    e.lookahead(&relators);
                    for w in &subgroup {
                        let _ = e.scan(0, w, false);
                    }
                    if e.live_count() >= e.max_cosets {
                        return Err(overflow);
                    }
                    let live_before = (0..c).filter(|&x| e.is_live(x)).count() as u32;
                    let was_live = e.is_live(c);
                    e.compact();
                    c = live_before;
                    if !was_live {
                        continue 'cosets;
                    }
                }
            }
        }
        for col in 0..e.ncols {
            if e.get(c, col) == UNDEF {
                if e.define(c, col).is_err() {
                    e.lookahead(&relators);
                    if e.live_count() >= e.max_cosets {
                        return Err(overflow);
                    }
                    let live_before = (0..c).filter(|&x| e.is_live(x)).count() as u32;
                    e.compact();
                    c = live_before;
                    continue 'cosets;
                }
            }
        }
        c += 1;
    }
    e.compact();
    let n = e.n_alloc;
    let mut action = Vec::with_capacity(p.n_generators());
    for g in 0..p.n_generators() {
        let images: Vec<u32> = (0..n as u32).map(|c| e.get(c, 2 * g)).collect();
        debug_assert!(images.iter().all(|&x| x != UNDEF));
        action.push(Permutation::from_images_unchecked(images));
    }
    Ok(CosetTable::new(action, subgroup_words.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pres(n: usize, rels: &[&str]) -> Presentation {
        Presentation::new(n, rels.iter().map(|r| Word::parse(r).unwrap()).collect()).unwrap()
    }

    fn a5() -> Presentation {
        pres(2, &["aa", "bbb", "ababababab"])
    }

    #[test]
    fn a5_regular_representation() {
        let t = coset_enumerate(&a5(), &[], DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(t.n_cosets(), 60);
        assert!(t.verify(&a5()));
    }

    #[test]
    fn whole_group_has_one_coset() {
        let gens = [Word::parse("a").unwrap(), Word::parse("b").unwrap()];
        let t = coset_enumerate(&a5(), &gens, DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(t.n_cosets(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        let e = coset_enumerate(&a5(), &[], 20).unwrap_err();
        assert_eq!(e, EnumerationError::Overflow { max_cosets: 20 });
    }

    #[test]
    fn cyclic_and_dihedral() {
        let c7 = pres(1, &["aaaaaaa"]);
        assert_eq!(coset_enumerate(&c7, &[], 100).unwrap().n_cosets(), 7);
        let d8 = pres(2, &["aaaa", "bb", "abab"]);
        assert_eq!(coset_enumerate(&d8, &[], 100).unwrap().n_cosets(), 8);
        let t = coset_enumerate(&d8, &[Word::parse("b").unwrap()], 100).unwrap();
        assert_eq!(t.n_cosets(), 4);
        assert!(t.verify(&d8));
    }

    #[test]
    fn stabilizer_words_reproduce_index() {
        let t = coset_enumerate(&a5(), &[Word::parse("b").unwrap()], 1000).unwrap();
        assert_eq!(t.n_cosets(), 20);
        let words = t.stabilizer_words();
        let again = coset_enumerate(&a5(), &words, 1000).unwrap();
        assert_eq!(again.n_cosets(), 20);
        let _ = vec![0];
    }
}
