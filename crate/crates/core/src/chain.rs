//! Stabilizer chains built by deterministic Schreier–Sims.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::PermError;
use crate::perm::{Permutation, MAX_DEGREE};
use crate::union_find::UnionFind;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// Index into `orbit`, or `NONE`.
    position: Vec<u32>,
    /// `transversal[k]` maps `base` to `orbit[k]`.
    transversal: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            position: vec![NONE; degree],
            transversal: Vec::new(),
            inverses: Vec::new(),
        }
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.orbit.clear();
        self.transversal.clear();
        self.position.iter_mut().for_each(|p| *p = NONE);
        self.orbit.push(self.base);
        self.transversal.push(Permutation::identity(degree));
        self.position[self.base as usize] = 0;
        let mut head = 0;
        while head < self.orbit.len() {
            let point = self.orbit[head];
            for s in &self.gens {
                let image = s.image(point);
                if self.position[image as usize] == NONE {
                    self.position[image as usize] = self.orbit.len() as u32;
                    self.orbit.push(image);
                    let u = self.transversal[head].mul(s);
                    self.transversal.push(u);
                }
            }
            head += 1;
        }
        self.inverses = self.transversal.iter().map(|u| u.inverse()).collect();
    }

    #[inline]
    fn representative(&self, point: u32) -> Option<&Permutation> {
        match self.position[point as usize] {
            NONE => None,
            k => Some(&self.transversal[k as usize]),
        }
    }
}

/// A permutation group stored as base, strong generators and transversals.
///
/// Immutable once built; all queries take `&self`.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Chain for `⟨generators⟩` acting on `degree` points.
    pub fn new(degree: usize, generators: &[Permutation]) -> Result<Self, PermError> {
        Self::with_base(degree, generators, &[])
    }

    /// Like [`StabilizerChain::new`] but the base starts with `base_prefix`.
    pub fn with_base(
        degree: usize,
        generators: &[Permutation],
        base_prefix: &[u32],
    ) -> Result<Self, PermError> {
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        for g in generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut chain = StabilizerChain {
            degree,
            generators: generators.to_vec(),
            levels: Vec::new(),
        };
        let mut seen = vec![false; degree];
        for &b in base_prefix {
            if (b as usize) < degree && !seen[b as usize] {
                seen[b as usize] = true;
                chain.levels.push(Level::new(b, degree));
            }
        }
        chain.schreier_sims();
        Ok(chain)
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        StabilizerChain {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// The full symmetric group with base `0, 1, …, n-2`.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..degree.saturating_sub(1) {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            images.swap(i, i + 1);
            gens.push(Permutation::from_images_unchecked(images));
        }
        let base: Vec<u32> = (0..degree.saturating_sub(1) as u32).collect();
        Self::with_base(degree, &gens, &base).expect("valid degree")
    }

    fn schreier_sims(&mut self) {
        let degree = self.degree;
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        for g in &gens {
            if self.levels.iter().all(|l| g.image(l.base) == l.base) {
                let moved = g.moved_points().next().expect("non-identity");
                self.levels.push(Level::new(moved, degree));
            }
        }
        for g in &gens {
            for l in self.levels.iter_mut() {
                l.gens.push(g.clone());
                if g.image(l.base) != l.base {
                    break;
                }
            }
        }
        for l in self.levels.iter_mut() {
            l.rebuild_orbit(degree);
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match self.find_non_sifting_schreier_generator(lvl) {
                None => i -= 1,
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let moved = residue.moved_points().next().expect("non-identity residue");
                        self.levels.push(Level::new(moved, degree));
                    }
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild_orbit(degree);
                    }
                    i = j as isize;
                }
            }
        }
        // Drop redundant trailing levels with trivial orbits.
        while self.levels.last().is_some_and(|l| l.orbit.len() == 1) {
            self.levels.pop();
        }
    }

    fn find_non_sifting_schreier_generator(&self, lvl: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[lvl];
        for (k, &point) in level.orbit.iter().enumerate() {
            let u = &level.transversal[k];
            for s in &level.gens {
                let image = s.image(point);
                let v = level.representative(image).expect("orbit is closed");
                let mut h = u.mul(s);
                h.mul_assign(&v.inverse());
                if h.is_identity() {
                    continue;
                }
                let (residue, j) = self.strip_from(h, lvl + 1);
                if j < self.levels.len() || !residue.is_identity() {
                    return Some((residue, j));
                }
            }
        }
        None
    }

    /// Sifts `g` starting at level `start`. Returns the residue and the level
    /// where sifting stopped (`levels.len()` if it went through).
    fn strip_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (j, level) in self.levels.iter().enumerate().skip(start) {
            let beta = g.image(level.base);
            match level.position[beta as usize] {
                NONE => return (g, j),
                k => g.mul_assign(&level.inverses[k as usize]),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Generators the chain was built from.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn base_len(&self) -> usize {
        self.levels.len()
    }

    /// All strong generators, without repetition.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Strong generators of the pointwise stabilizer of the first `level` base points.
    pub fn stabilizer_generators(&self, level: usize) -> &[Permutation] {
        self.levels.get(level).map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// Fundamental orbit at `level`, in discovery order.
    pub fn fundamental_orbit(&self, level: usize) -> &[u32] {
        &self.levels[level].orbit
    }

    /// Element of the `level`-th stabilizer mapping the base point to `point`.
    pub fn transversal_element(&self, level: usize, point: u32) -> Option<&Permutation> {
        self.levels[level].representative(point)
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Group order, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.checked_order().unwrap_or(u128::MAX)
    }

    pub fn checked_order(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.orbit.len() as u128))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Sifts `g` through the chain.
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        self.strip_from(g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.sift(g);
        j == self.levels.len() && residue.is_identity()
    }

    pub fn try_contains(&self, g: &Permutation) -> Result<bool, PermError> {
        if g.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        Ok(self.contains(g))
    }

    /// Position of `g` in the mixed-radix enumeration of the group, or `None`
    /// when `g` is not a member. Ranks lie in `0..order()`.
    pub fn rank(&self, g: &Permutation) -> Option<u64> {
        if g.degree() != self.degree {
            return None;
        }
        let mut h = g.clone();
        let mut rank: u64 = 0;
        for level in &self.levels {
            let beta = h.image(level.base);
            let k = level.position[beta as usize];
            if k == NONE {
                return None;
            }
            rank = rank * level.orbit.len() as u64 + k as u64;
            h.mul_assign(&level.inverses[k as usize]);
        }
        if h.is_identity() {
            Some(rank)
        } else {
            None
        }
    }

    /// Inverse of [`StabilizerChain::rank`].
    pub fn unrank(&self, mut rank: u64) -> Permutation {
        let mut idx = vec![0usize; self.levels.len()];
        for (j, level) in self.levels.iter().enumerate().rev() {
            let m = level.orbit.len() as u64;
            idx[j] = (rank % m) as usize;
            rank /= m;
        }
        // g = u_{k-1} ... u_1 u_0
        let mut g = Permutation::identity(self.degree);
        for (j, level) in self.levels.iter().enumerate().rev() {
            g.mul_assign(&level.transversal[idx[j]]);
        }
        g
    }

    /// Iterates over all elements in rank order.
    pub fn elements(&self) -> impl Iterator<Item = Permutation> + '_ {
        let n = self.order() as u64;
        (0..n).map(move |r| self.unrank(r))
    }

    /// A uniformly distributed element.
    pub fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let k = (rng.next_u64() % level.orbit.len() as u64) as usize;
            g.mul_assign(&level.transversal[k]);
        }
        g
    }

    /// Orbit partition of the natural action; blocks sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for (i, &x) in g.images().iter().enumerate() {
                uf.union(i, x as usize);
            }
        }
        uf.blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|x| x as u32).collect())
            .collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    /// Orbit of a single point under the whole group.
    pub fn orbit_of(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point as usize] = true;
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            for g in &self.generators {
                let q = g.image(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
            }
            head += 1;
        }
        orbit
    }

    /// Whether every strong generator sifts to the identity.
    pub fn is_consistent(&self) -> bool {
        self.strong_generators().iter().all(|g| self.contains(g))
            && self.generators.iter().all(|g| self.contains(g))
    }

    /// Generators of the group; identity-free.
    pub fn group_generators(&self) -> Vec<Permutation> {
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gens(deg: usize, cycles: &[&str]) -> Vec<Permutation> {
        cycles.iter().map(|c| parse_perm(c, deg).unwrap()).collect()
    }

    /// Closure of the generators by breadth-first multiplication.
    fn brute_force_elements(deg: usize, gens: &[Permutation]) -> Vec<Permutation> {
        let mut all = alloc::collections::BTreeSet::new();
        let id = Permutation::identity(deg);
        all.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.mul(g);
                if all.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        all.into_iter().collect()
    }

    #[test]
    fn alternating_orders_match_enumeration() {
        let a5 = gens(5, &["(1 2 3 4 5)", "(1 2 3)"]);
        let chain = StabilizerChain::new(5, &a5).unwrap();
        assert_eq!(chain.order(), 60);
        assert_eq!(brute_force_elements(5, &a5).len(), 60);
        let a6 = gens(6, &["(1 2 3 4 5)", "(4 5 6)"]);
        let chain = StabilizerChain::new(6, &a6).unwrap();
        assert_eq!(chain.order(), 360);
        assert_eq!(brute_force_elements(6, &a6).len(), 360);
    }

    #[test]
    fn trivial_group() {
        let chain = StabilizerChain::new(4, &[]).unwrap();
        assert_eq!(chain.order(), 1);
        assert!(chain.contains(&Permutation::identity(4)));
        assert_eq!(chain.orbits(), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn membership() {
        let chain = StabilizerChain::new(5, &gens(5, &["(1 2 3 4 5)", "(1 2 3)"])).unwrap();
        assert!(chain.contains(&parse_perm("(1 2 3)", 5).unwrap()));
        assert!(!chain.contains(&parse_perm("(1 2)", 5).unwrap()));
        assert!(chain.try_contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let g = vec![parse_perm("(1 2)", 3).unwrap(), parse_perm("(1 2)", 4).unwrap()];
        assert!(StabilizerChain::new(3, &g).is_err());
    }

    #[test]
    fn rank_unrank_bijective() {
        let chain = StabilizerChain::new(6, &gens(6, &["(1 2 3 4 5)", "(4 5 6)"])).unwrap();
        let mut seen = alloc::collections::BTreeSet::new();
        for r in 0..360u64 {
            let g = chain.unrank(r);
            assert_eq!(chain.rank(&g), Some(r));
            seen.insert(g);
        }
        assert_eq!(seen.len(), 360);
        assert_eq!(chain.rank(&parse_perm("(1 2)", 6).unwrap()), None);
    }

    #[test]
    fn symmetric_group_chain() {
        let s7 = StabilizerChain::symmetric(7);
        assert_eq!(s7.order(), 5040);
        assert_eq!(s7.base(), vec![0, 1, 2, 3, 4, 5]);
        assert!(s7.is_consistent());
    }

    #[test]
    fn prescribed_base_prefix() {
        let g = gens(6, &["(1 2 3 4 5)", "(4 5 6)"]);
        let chain = StabilizerChain::with_base(6, &g, &[5, 4]).unwrap();
        assert_eq!(&chain.base()[..2], &[5, 4]);
        assert_eq!(chain.order(), 360);
    }

    #[test]
    fn random_elements_are_members() {
        let chain = StabilizerChain::new(6, &gens(6, &["(1 2 3 4 5)", "(4 5 6)"])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = chain.random_element(&mut rng);
            let h = chain.random_element(&mut rng);
            assert!(chain.contains(&g.mul(&h)));
            assert!(chain.contains(&g.inverse()));
        }
    }

    #[test]
    fn transitive_a5_on_six_points() {
        // PSL(2,5) acting on the projective line over F_5.
        let g = gens(6, &["(1 2 3 4 5)", "(1 6)(2 5)"]);
        let chain = StabilizerChain::new(6, &g).unwrap();
        assert_eq!(chain.order(), 60);
        assert_eq!(chain.orbits().len(), 1);
    }
}
