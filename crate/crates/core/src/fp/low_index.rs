//! Sims' low-index subgroup search.
//!
//! Coset tables are filled row by row; each undefined entry is tried against
//! every existing coset and one fresh coset. Relator rotations give
//! deductions, and a table is kept only if it is least among the tables
//! obtained by renumbering from every other coset, so each conjugacy class
//! is produced once.

use alloc::vec;
use alloc::vec::Vec;

use super::{CosetTable, Presentation, Word};
use crate::error::EnumerationError;
use crate::perm::Permutation;

/// Largest accepted `n_max`.
pub const LOW_INDEX_GUARD: usize = 10_000;

const UNDEF: u32 = u32::MAX;

struct Search {
    ncols: usize,
    n_max: usize,
    table: Vec<u32>,
    n_cosets: usize,
    /// Per column, relator rotations (as column sequences) beginning there.
    rotations: Vec<Vec<Vec<usize>>>,
    relators: Vec<Vec<usize>>,
    results: Vec<Vec<u32>>,
}

impl Search {
    #[inline]
    fn get(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: usize, col: usize, d: u32) {
        self.table[c * self.ncols + col] = d;
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        for c in 0..self.n_cosets {
            for col in 0..self.ncols {
                if self.get(c, col) == UNDEF {
                    return Some((c, col));
                }
            }
        }
        None
    }

    /// Scans `word` from `c` in both directions; fills a single gap.
    /// Returns false on a contradiction.
    fn scan_deduce(&mut self, c: usize, word: &[usize], trail: &mut Vec<(usize, usize)>, queue: &mut Vec<(usize, usize)>) -> bool {
        let mut f = c;
        let mut i = 0usize;
        let n = word.len();
        while i < n {
            let x = self.get(f, word[i]);
            if x == UNDEF {
                break;
            }
            f = x as usize;
            i += 1;
        }
        if i == n {
            return f == c;
        }
        let mut b = c;
        let mut j = n;
        while j > i {
            let x = self.get(b, word[j - 1] ^ 1);
            if x == UNDEF {
                break;
            }
            b = x as usize;
            j -= 1;
        }
        if j == i {
            return f == b;
        }
        if j == i + 1 {
            let col = word[i];
            if self.get(b, col ^ 1) != UNDEF {
                return false;
            }
            self.set(f, col, b as u32);
            self.set(b, col ^ 1, f as u32);
            trail.push((f, col));
            trail.push((b, col ^ 1));
            queue.push((f, col));
        }
        true
    }

    fn process(&mut self, start: (usize, usize), trail: &mut Vec<(usize, usize)>) -> bool {
        let mut queue = vec![start];
        while let Some((c, col)) = queue.pop() {
            let d = self.get(c, col) as usize;
            for k in 0..self.rotations[col].len() {
                let w = core::mem::take(&mut self.rotations[col][k]);
                let ok = self.scan_deduce(c, &w, trail, &mut queue);
                self.rotations[col][k] = w;
                if !ok {
                    return false;
                }
            }
            let inv = col ^ 1;
            for k in 0..self.rotations[inv].len() {
                let w = core::mem::take(&mut self.rotations[inv][k]);
                let ok = self.scan_deduce(d, &w, trail, &mut queue);
                self.rotations[inv][k] = w;
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Renumbers starting at `alpha` and compares with the current table.
    /// False iff the renumbered prefix is strictly smaller.
    fn canonical_from(&self, alpha: usize, map: &mut [u32], inv: &mut Vec<usize>) -> bool {
        for m in map.iter_mut().take(self.n_cosets) {
            *m = UNDEF;
        }
        inv.clear();
        map[alpha] = 0;
        inv.push(alpha);
        let mut r = 0;
        while r < inv.len() {
            let old_row = inv[r];
            for col in 0..self.ncols {
                let orig = self.get(r, col);
                let old = self.get(old_row, col);
                if orig == UNDEF || old == UNDEF {
                    return true;
                }
                let mapped = if map[old as usize] == UNDEF {
                    let next = inv.len() as u32;
                    map[old as usize] = next;
                    inv.push(old as usize);
                    next
                } else {
                    map[old as usize]
                };
                if mapped < orig {
                    return false;
                }
                if mapped > orig {
                    return true;
                }
            }
            r += 1;
        }
        true
    }

    fn is_canonical(&self) -> bool {
        let mut map = vec![UNDEF; self.n_cosets];
        let mut inv = Vec::with_capacity(self.n_cosets);
        (1..self.n_cosets).all(|alpha| self.canonical_from(alpha, &mut map, &mut inv))
    }

    fn relators_hold(&self) -> bool {
        for c in 0..self.n_cosets {
            for r in &self.relators {
                let mut x = c;
                for &col in r {
                    x = self.get(x, col) as usize;
                }
                if x != c {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &[(usize, usize)]) {
        for &(c, col) in trail {
            self.set(c, col, UNDEF);
        }
    }

    fn run(&mut self) {
        if !self.is_canonical() {
            return;
        }
        let Some((c, col)) = self.first_undefined() else {
            if self.relators_hold() {
                self.results.push(self.table[..self.n_cosets * self.ncols].to_vec());
            }
            return;
        };
        for d in 0..self.n_cosets {
            if self.get(d, col ^ 1) != UNDEF {
                continue;
            }
            let mut trail = vec![(c, col), (d, col ^ 1)];
            self.set(c, col, d as u32);
            self.set(d, col ^ 1, c as u32);
            if self.process((c, col), &mut trail) {
                self.run();
            }
            self.undo(&trail);
        }
        if self.n_cosets < self.n_max {
            let d = self.n_cosets;
            self.n_cosets += 1;
            let mut trail = vec![(c, col), (d, col ^ 1)];
            self.set(c, col, d as u32);
            self.set(d, col ^ 1, c as u32);
            if self.process((c, col), &mut trail) {
                self.run();
            }
            self.undo(&trail);
            self.n_cosets -= 1;
        }
    }
}

fn cyclic_reduce(w: &Word) -> Vec<i32> {
    let mut l = w.free_reduce().letters().to_vec();
    while l.len() >= 2 && l[0] == -l[l.len() - 1] {
        l.remove(0);
        l.pop();
    }
    l
}

fn column(letter: i32) -> usize {
    let g = (letter.unsigned_abs() - 1) as usize;
    2 * g + usize::from(letter < 0)
}

/// One coset table per conjugacy class of subgroups of index at most `n_max`,
/// sorted by index and then by table contents.
pub fn low_index_subgroups(p: &Presentation, n_max: usize) -> Result<Vec<CosetTable>, EnumerationError> {
    if n_max > LOW_INDEX_GUARD {
        return Err(EnumerationError::GuardExceeded {
            requested: n_max,
            guard: LOW_INDEX_GUARD,
        });
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let ngens = p.n_generators();
    let ncols = 2 * ngens;
    let mut relators = Vec::new();
    let mut rotations: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ncols];
    for r in p.relators() {
        let l = cyclic_reduce(r);
        if l.is_empty() {
            continue;
        }
        let cols: Vec<usize> = l.iter().map(|&x| column(x)).collect();
        let inv: Vec<usize> = l.iter().rev().map(|&x| column(-x)).collect();
        for w in [&cols, &inv] {
            for s in 0..w.len() {
                let mut rot = w[s..].to_vec();
                rot.extend_from_slice(&w[..s]);
                if !rotations[rot[0]].contains(&rot) {
                    rotations[rot[0]].push(rot);
                }
            }
        }
        relators.push(cols);
    }
    if ngens == 0 {
        return Ok(vec![CosetTable::new(Vec::new(), Vec::new())]);
    }
    let mut s = Search {
        ncols,
        n_max,
        table: vec![UNDEF; n_max * ncols],
        n_cosets: 1,
        rotations,
        relators,
        results: Vec::new(),
    };
    s.run();
    let mut results = core::mem::take(&mut s.results);
    results.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(results
        .into_iter()
        .map(|t| {
            let n = t.len() / ncols;
            let action: Vec<Permutation> = (0..ngens)
                .map(|g| Permutation::from_images_unchecked((0..n).map(|c| t[c * ncols + 2 * g]).collect()))
                .collect();
            let provisional = CosetTable::new(action.clone(), Vec::new());
            let words = provisional.stabilizer_words();
            CosetTable::new(action, words)
        })
        .collect())
}
