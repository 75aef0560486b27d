//! Backtrack searches in permutation groups and enumeration of
//! monomorphisms from a presented group.
//!
//! Elements of `G` are walked as products `u_{k-1} ⋯ u_1 u_0` of transversal
//! elements, so the image of the `j`-th base point is fixed once `u_j` is
//! chosen. Pruning only ever looks at those base images.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::atlas::GroupRecord;
use crate::chain::StabilizerChain;
use crate::error::{GuardExceeded, SearchError};
use crate::fp::check_relators;
use crate::perm::Permutation;
use crate::union_find::UnionFind;

/// Largest ambient order (or index over a known subgroup) for backtracks.
pub const MAX_CHAIN_ORDER: u128 = 25_000_000;
/// Largest source order for monomorphism search.
pub const MAX_SOURCE_ORDER: u128 = 10_000;
/// Largest target degree for monomorphism search.
pub const MAX_TARGET_DEGREE: usize = 30;
/// Largest group whose elements are listed one by one.
pub const MAX_ENUMERATED_ELEMENTS: u128 = 1_000_000;

/// Guards for one run; the defaults are the constants above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_chain_order: u128,
    pub max_source_order: u128,
    pub max_target_degree: usize,
    pub max_elements: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_chain_order: MAX_CHAIN_ORDER,
            max_source_order: MAX_SOURCE_ORDER,
            max_target_degree: MAX_TARGET_DEGREE,
            max_elements: MAX_ENUMERATED_ELEMENTS,
        }
    }
}

fn guard(name: &'static str, detail: String) -> SearchError {
    SearchError::Guard(GuardExceeded { guard: name, detail })
}

fn check_members(g: &StabilizerChain, gens: &[Permutation]) -> Result<(), SearchError> {
    for (index, x) in gens.iter().enumerate() {
        if !g.try_contains(x)? {
            return Err(SearchError::NotInGroup { index });
        }
    }
    Ok(())
}

/// Orbit of `point` under `gens` as a membership mask.
fn orbit_mask(degree: usize, gens: &[Permutation], point: u32) -> Vec<bool> {
    let mut seen = vec![false; degree];
    seen[point as usize] = true;
    let mut stack = vec![point];
    while let Some(p) = stack.pop() {
        for s in gens {
            let q = s.image(p) as usize;
            if !seen[q] {
                seen[q] = true;
                stack.push(q as u32);
            }
        }
    }
    seen
}

/// Length of the orbit of every point under `gens`.
fn orbit_lengths_of_points(degree: usize, gens: &[Permutation]) -> Vec<usize> {
    let mut uf = UnionFind::new(degree);
    for s in gens {
        for (i, &x) in s.images().iter().enumerate() {
            uf.union(i, x as usize);
        }
    }
    (0..degree).map(|i| uf.set_size(i)).collect()
}

struct Walker<'a> {
    g: &'a StabilizerChain,
    k: usize,
}

impl<'a> Walker<'a> {
    /// Depth-first search over `{ u_{k-1} ⋯ u_{m+1} p }`, returning the
    /// first element accepted.
    fn below<P, A>(&self, m: usize, p: &Permutation, prune: &P, accept: &A) -> Option<Permutation>
    where
        P: Fn(usize, &Permutation) -> bool,
        A: Fn(&Permutation) -> bool,
    {
        if m + 1 >= self.k {
            return accept(p).then(|| p.clone());
        }
        let level = m + 1;
        for &gamma in self.g.fundamental_orbit(level) {
            let u = self.g.transversal_element(level, gamma).expect("orbit point");
            let q = u.mul(p);
            if !prune(level, &q) {
                continue;
            }
            if let Some(x) = self.below(level, &q, prune, accept) {
                return Some(x);
            }
        }
        None
    }

    /// First element of the whole group accepted, in walk order.
    fn first<P, A>(&self, prune: &P, accept: &A) -> Option<Permutation>
    where
        P: Fn(usize, &Permutation) -> bool,
        A: Fn(&Permutation) -> bool,
    {
        let id = Permutation::identity(self.g.degree());
        if self.k == 0 {
            return accept(&id).then_some(id);
        }
        for &gamma in self.g.fundamental_orbit(0) {
            let u = self.g.transversal_element(0, gamma).expect("orbit point");
            if !prune(0, u) {
                continue;
            }
            if let Some(x) = self.below(0, u, prune, accept) {
                return Some(x);
            }
        }
        None
    }
}

/// The subgroup `{ x ∈ G : accept(x) }`, which must be a subgroup containing
/// `known`. `prune(m, p)` sees a partial element whose base images up to
/// level `m` are final and may return false when no completion is accepted.
pub(crate) fn subgroup_search<P, A>(g: &StabilizerChain, known: &[Permutation], prune: P, accept: A) -> StabilizerChain
where
    P: Fn(usize, &Permutation) -> bool,
    A: Fn(&Permutation) -> bool,
{
    let n = g.degree();
    let base = g.base();
    let k = base.len();
    let known: Vec<Permutation> = known.iter().filter(|x| !x.is_identity()).cloned().collect();
    let r = StabilizerChain::with_base(n, &known, &base).expect("same degree as the ambient group");
    let walker = Walker { g, k };
    let mut found: Vec<(usize, Permutation)> = Vec::new();
    for l in (0..k).rev() {
        let mut gens: Vec<Permutation> = r.stabilizer_generators(l).to_vec();
        gens.extend(found.iter().filter(|(lv, _)| *lv >= l).map(|(_, x)| x.clone()));
        let mut reached = orbit_mask(n, &gens, base[l]);
        let mut dead = vec![false; n];
        for &gamma in g.fundamental_orbit(l) {
            if reached[gamma as usize] || dead[gamma as usize] {
                continue;
            }
            let u = g.transversal_element(l, gamma).expect("orbit point");
            let hit = if prune(l, u) { walker.below(l, u, &prune, &accept) } else { None };
            match hit {
                Some(x) => {
                    gens.push(x.clone());
                    found.push((l, x));
                    reached = orbit_mask(n, &gens, base[l]);
                }
                None => {
                    for (i, d) in orbit_mask(n, &gens, gamma).into_iter().enumerate() {
                        dead[i] |= d;
                    }
                }
            }
        }
    }
    let mut all = known;
    all.extend(found.into_iter().map(|(_, x)| x));
    StabilizerChain::new(n, &all).expect("same degree")
}

fn check_search_size(g: &StabilizerChain, known_order: u128, limits: &Limits) -> Result<(), SearchError> {
    let index = g.order() / known_order.max(1);
    if index > limits.max_chain_order {
        return Err(guard(
            "max_chain_order",
            format!("search space of size {index} exceeds {}", limits.max_chain_order),
        ));
    }
    Ok(())
}

/// `C_G(⟨h_gens⟩)`.
pub fn centralizer(g: &StabilizerChain, h_gens: &[Permutation]) -> Result<StabilizerChain, SearchError> {
    centralizer_with(g, h_gens, &Limits::default())
}

pub fn centralizer_with(g: &StabilizerChain, h_gens: &[Permutation], limits: &Limits) -> Result<StabilizerChain, SearchError> {
    check_members(g, h_gens)?;
    check_search_size(g, 1, limits)?;
    let base = g.base();
    let n = g.degree();
    // Pairs of base points related by an H generator, keyed by the later level.
    let mut pairs: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); base.len()];
    let mut level_of = vec![usize::MAX; n];
    for (j, &b) in base.iter().enumerate() {
        level_of[b as usize] = j;
    }
    for (hi, h) in h_gens.iter().enumerate() {
        for (i, &b) in base.iter().enumerate() {
            let j = level_of[h.image(b) as usize];
            if j != usize::MAX {
                pairs[i.max(j)].push((hi, i, j));
            }
        }
    }
    let cycle_len: Vec<Vec<usize>> = h_gens
        .iter()
        .map(|h| {
            let mut len = vec![0usize; n];
            for c in h.cycles() {
                for &x in &c {
                    len[x as usize] = c.len();
                }
            }
            for l in len.iter_mut() {
                if *l == 0 {
                    *l = 1;
                }
            }
            len
        })
        .collect();
    let prune = |m: usize, p: &Permutation| {
        let b = base[m];
        let img = p.image(b) as usize;
        if cycle_len.iter().any(|len| len[b as usize] != len[img]) {
            return false;
        }
        pairs[m]
            .iter()
            .all(|&(hi, i, j)| h_gens[hi].image(p.image(base[i])) == p.image(base[j]))
    };
    let accept = |x: &Permutation| h_gens.iter().all(|h| h.commutes_with(x));
    let known: Vec<Permutation> = h_gens
        .iter()
        .filter(|h| h_gens.iter().all(|y| y.commutes_with(h)))
        .cloned()
        .collect();
    Ok(subgroup_search(g, &known, prune, accept))
}

/// `N_G(⟨h_gens⟩)`.
pub fn normalizer(g: &StabilizerChain, h_gens: &[Permutation]) -> Result<StabilizerChain, SearchError> {
    normalizer_with(g, h_gens, &Limits::default())
}

pub fn normalizer_with(g: &StabilizerChain, h_gens: &[Permutation], limits: &Limits) -> Result<StabilizerChain, SearchError> {
    check_members(g, h_gens)?;
    let n = g.degree();
    let h = StabilizerChain::new(n, h_gens)?;
    check_search_size(g, h.order(), limits)?;
    let base = g.base();
    let lens = orbit_lengths_of_points(n, h_gens);
    let prune = |m: usize, p: &Permutation| {
        let b = base[m];
        lens[b as usize] == lens[p.image(b) as usize]
    };
    let accept = |x: &Permutation| h_gens.iter().all(|y| h.contains(&y.conjugate_by(x)));
    Ok(subgroup_search(g, h_gens, prune, accept))
}

/// Some `x ∈ G` with `⟨a_gens⟩^x = ⟨b_gens⟩`, or `None` when the two
/// subgroups are not conjugate in `G`.
pub fn transporter(
    g: &StabilizerChain,
    a_gens: &[Permutation],
    b_gens: &[Permutation],
) -> Result<Option<Permutation>, SearchError> {
    check_members(g, a_gens)?;
    check_members(g, b_gens)?;
    check_search_size(g, 1, &Limits::default())?;
    let n = g.degree();
    let a = StabilizerChain::new(n, a_gens)?;
    let b = StabilizerChain::new(n, b_gens)?;
    if a.order() != b.order() {
        return Ok(None);
    }
    let base = g.base();
    let len_a = orbit_lengths_of_points(n, a_gens);
    let len_b = orbit_lengths_of_points(n, b_gens);
    let prune = |m: usize, p: &Permutation| {
        let x = base[m];
        len_a[x as usize] == len_b[p.image(x) as usize]
    };
    let accept = |x: &Permutation| a_gens.iter().all(|y| b.contains(&y.conjugate_by(x)));
    Ok(Walker { g, k: base.len() }.first(&prune, &accept))
}

/// A permutation `σ` with `xs[i]^σ = ys[i]` for all `i`, assuming `⟨xs⟩`
/// is transitive. Tried image by image of point 0.
pub fn conjugating_element(xs: &[Permutation], ys: &[Permutation]) -> Option<Permutation> {
    if xs.len() != ys.len() {
        return None;
    }
    let n = xs.first().map_or(0, |x| x.degree());
    if xs.iter().chain(ys).any(|x| x.degree() != n) {
        return None;
    }
    if n == 0 {
        return Some(Permutation::identity(0));
    }
    'target: for t in 0..n as u32 {
        let mut map = vec![u32::MAX; n];
        let mut used = vec![false; n];
        map[0] = t;
        used[t as usize] = true;
        let mut stack = vec![0u32];
        while let Some(p) = stack.pop() {
            for (x, y) in xs.iter().zip(ys) {
                let (px, qy) = (x.image(p), y.image(map[p as usize]));
                match map[px as usize] {
                    u32::MAX => {
                        if used[qy as usize] {
                            continue 'target;
                        }
                        map[px as usize] = qy;
                        used[qy as usize] = true;
                        stack.push(px);
                    }
                    v if v != qy => continue 'target,
                    _ => {}
                }
            }
        }
        if map.iter().all(|&v| v != u32::MAX) {
            return Some(Permutation::from_images_unchecked(map));
        }
    }
    None
}

/// Whether the transitive group `⟨gens⟩` on `degree` points is primitive.
/// For each point `a ≠ 0` the smallest block containing `0` and `a` is
/// grown by union-find; the action is primitive iff every such block is
/// the whole set.
pub fn is_primitive(degree: usize, gens: &[Permutation]) -> bool {
    if degree <= 2 {
        return true;
    }
    if orbit_mask(degree, gens, 0).iter().any(|&r| !r) {
        return false;
    }
    for a in 1..degree {
        let mut uf = UnionFind::new(degree);
        uf.union(0, a);
        let mut queue = vec![(0usize, a)];
        while let Some((x, y)) = queue.pop() {
            for s in gens {
                let (sx, sy) = (s.image(x as u32) as usize, s.image(y as u32) as usize);
                if uf.union(sx, sy) {
                    queue.push((sx, sy));
                }
            }
        }
        if uf.set_size(0) < degree {
            return false;
        }
    }
    true
}

/// An injective homomorphism from an atlas group into a permutation group,
/// given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: String,
    gen_images: Vec<Permutation>,
}

impl Embedding {
    /// Checks that `images` define an injective homomorphism from `h` into `g`.
    pub fn certify(h: &GroupRecord, g: &StabilizerChain, images: Vec<Permutation>) -> Result<Self, SearchError> {
        let h_gens = h.generators();
        if h_gens.is_empty() {
            return Err(SearchError::Precondition(format!("{} has no generators", h.name())));
        }
        if images.len() != h_gens.len() {
            return Err(SearchError::Precondition(format!(
                "{} generator images given for {} generators",
                images.len(),
                h_gens.len()
            )));
        }
        check_members(g, &images)?;
        if !is_homomorphism(h, &images)? {
            return Err(SearchError::Precondition(String::from("images do not define a homomorphism")));
        }
        let image = StabilizerChain::new(g.degree(), &images)?;
        if image.order() != h.order().value {
            return Err(SearchError::Precondition(format!(
                "image has order {}, source has order {}",
                image.order(),
                h.order().value
            )));
        }
        Ok(Embedding {
            source: String::from(h.name()),
            gen_images: images,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn gen_images(&self) -> &[Permutation] {
        &self.gen_images
    }

    /// Always true: embeddings are only constructed after certification.
    pub fn is_certified(&self) -> bool {
        true
    }

    pub fn image_chain(&self) -> StabilizerChain {
        let n = self.gen_images[0].degree();
        StabilizerChain::new(n, &self.gen_images).expect("images share a degree")
    }

    /// The embedding followed by conjugation with `t`.
    pub fn conjugate_by(&self, t: &Permutation) -> Embedding {
        Embedding {
            source: self.source.clone(),
            gen_images: self.gen_images.iter().map(|x| x.conjugate_by(t)).collect(),
        }
    }
}

/// Relators when a presentation is stored; otherwise the graph subgroup
/// `⟨(x_i, y_i)⟩ ≤ Sym(H) × Sym(G)` must have order `|H|`.
fn is_homomorphism(h: &GroupRecord, images: &[Permutation]) -> Result<bool, SearchError> {
    if let Some(p) = h.presentation() {
        return Ok(check_relators(p, images)?);
    }
    let nh = h.degree();
    let ng = images[0].degree();
    let graph: Vec<Permutation> = h
        .generators()
        .iter()
        .zip(images)
        .map(|(x, y)| x.embed_shifted(0, nh + ng).mul(&y.embed_shifted(nh, nh + ng)))
        .collect();
    Ok(StabilizerChain::new(nh + ng, &graph)?.order() == h.order().value)
}

fn evaluate_fast(letters: &[i32], images: &[Permutation], inverses: &[Permutation], scratch: &mut Permutation) {
    let n = scratch.degree();
    *scratch = Permutation::identity(n);
    for &l in letters {
        let i = l.unsigned_abs() as usize - 1;
        scratch.mul_assign(if l > 0 { &images[i] } else { &inverses[i] });
    }
}

/// Freely reduced words of length 2..=`max_len` over the generators in
/// `allowed` that use generator `required` at least once.
fn test_words(allowed: &[usize], required: usize, max_len: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = allowed
        .iter()
        .flat_map(|&g| [g as i32 + 1, -(g as i32 + 1)])
        .collect();
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<i32>> = letters.iter().map(|&l| vec![l]).collect();
    for _ in 1..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if *w.last().expect("non-empty") == -l {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                if v.iter().any(|&x| x.unsigned_abs() as usize == required + 1) {
                    out.push(v.clone());
                }
                next.push(v);
            }
        }
        frontier = next;
    }
    out.sort_by_key(|w| w.len());
    out
}

/// Elements of `g` of order `o`, by rank, for every order present.
fn rank_buckets(g: &StabilizerChain) -> BTreeMap<u64, Vec<u32>> {
    let mut buckets: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for r in 0..g.order() as u64 {
        buckets.entry(g.unrank(r).order()).or_default().push(r as u32);
    }
    buckets
}

/// Conjugacy class of `rep` in `g` with one conjugator per member.
fn class_with_conjugators(g: &StabilizerChain, rep: &Permutation, seen: &mut [bool]) -> Vec<Permutation> {
    let gens = g.group_generators();
    let r0 = g.rank(rep).expect("member") as usize;
    seen[r0] = true;
    let mut members = vec![rep.clone()];
    let mut conj = vec![Permutation::identity(g.degree())];
    let mut head = 0;
    while head < members.len() {
        for s in &gens {
            let y = members[head].conjugate_by(s);
            let ry = g.rank(&y).expect("member") as usize;
            if !seen[ry] {
                seen[ry] = true;
                members.push(y);
                conj.push(conj[head].mul(s));
            }
        }
        head += 1;
    }
    conj
}

struct Branch {
    conjugators: Vec<Permutation>,
    /// Images in source-generator order.
    solutions: Vec<Vec<Permutation>>,
}

/// All monomorphisms `H → G`, stored as one family per conjugacy class of
/// images of the rarest generator. Each family holds the monomorphisms
/// sending that generator to a fixed class representative, plus a
/// conjugator for every member of the class; the full set is the product.
pub struct MonomorphismSet {
    source: String,
    branches: Vec<Branch>,
}

impl MonomorphismSet {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn count(&self) -> u128 {
        self.branches
            .iter()
            .map(|b| b.conjugators.len() as u128 * b.solutions.len() as u128)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Monomorphisms with the rarest generator sent to a class
    /// representative. Every monomorphism is `G`-conjugate to one of these.
    pub fn representatives(&self) -> impl Iterator<Item = Embedding> + '_ {
        self.branches.iter().flat_map(move |b| {
            b.solutions.iter().map(move |s| Embedding {
                source: self.source.clone(),
                gen_images: s.clone(),
            })
        })
    }

    /// Every monomorphism, each exactly once, in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = Embedding> + '_ {
        self.branches.iter().flat_map(move |b| {
            b.conjugators.iter().flat_map(move |t| {
                b.solutions.iter().map(move |s| Embedding {
                    source: self.source.clone(),
                    gen_images: s.iter().map(|x| x.conjugate_by(t)).collect(),
                })
            })
        })
    }

    /// The lexicographically least monomorphism, comparing generator images
    /// in order by their image tables.
    pub fn least(&self) -> Option<Embedding> {
        let mut best: Option<Embedding> = None;
        for e in self.iter() {
            let better = match &best {
                None => true,
                Some(b) => e.gen_images.iter().map(|x| x.images()).lt(b.gen_images.iter().map(|x| x.images())),
            };
            if better {
                best = Some(e);
            }
        }
        best
    }
}

fn check_mono_preconditions(h: &GroupRecord, g: &StabilizerChain, source_guard: bool, limits: &Limits) -> Result<(), SearchError> {
    if h.is_stub() || h.chain().is_none() {
        return Err(SearchError::Precondition(format!("{} has no permutation generators", h.name())));
    }
    if !h.is_nonabelian_simple() {
        return Err(SearchError::Precondition(format!("{} is not verified simple", h.name())));
    }
    let ho = h.order().value;
    if source_guard && ho > limits.max_source_order {
        return Err(guard(
            "max_source_order",
            format!("|{}| = {ho} exceeds {}", h.name(), limits.max_source_order),
        ));
    }
    if g.degree() > limits.max_target_degree {
        return Err(guard(
            "max_target_degree",
            format!("target degree {} exceeds {}", g.degree(), limits.max_target_degree),
        ));
    }
    let go = g.order();
    let cap = limits.max_chain_order.min(limits.max_elements);
    if go > cap {
        return Err(guard("max_enumerated_elements", format!("target order {go} exceeds {cap}")));
    }
    Ok(())
}

/// All monomorphisms `H → G`.
///
/// Source generators are assigned in order of decreasing element order; the
/// first goes to conjugacy class representatives, the rest range over
/// elements of the right order. Partial assignments are pruned by the
/// orders of short words and by relators in the assigned generators.
pub fn monomorphisms(h: &GroupRecord, g: &StabilizerChain) -> Result<MonomorphismSet, SearchError> {
    monomorphisms_with(h, g, &Limits::default())
}

pub fn monomorphisms_with(h: &GroupRecord, g: &StabilizerChain, limits: &Limits) -> Result<MonomorphismSet, SearchError> {
    check_mono_preconditions(h, g, true, limits)?;
    Ok(enumerate_monomorphisms(h, g))
}

/// As [`monomorphisms`] without the source-order guard; used for `H = G`.
pub(crate) fn monomorphisms_unguarded(h: &GroupRecord, g: &StabilizerChain) -> Result<MonomorphismSet, SearchError> {
    check_mono_preconditions(h, g, false, &Limits::default())?;
    Ok(enumerate_monomorphisms(h, g))
}

fn enumerate_monomorphisms(h: &GroupRecord, g: &StabilizerChain) -> MonomorphismSet {
    let empty = MonomorphismSet {
        source: String::from(h.name()),
        branches: Vec::new(),
    };
    let h_order = h.order().value;
    let g_order = g.order();
    if h_order > g_order || g_order % h_order != 0 {
        return empty;
    }
    let h_gens = h.generators();
    let r = h_gens.len();
    let orders: Vec<u64> = h_gens.iter().map(|x| x.order()).collect();
    let mut seq: Vec<usize> = (0..r).collect();
    seq.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));

    // Per depth: test words (with their orders in H) and relators that
    // become fully assigned there.
    let h_inverses: Vec<Permutation> = h_gens.iter().map(|x| x.inverse()).collect();
    let mut scratch = Permutation::identity(h.degree());
    let mut words_at: Vec<Vec<(Vec<i32>, u64)>> = Vec::with_capacity(r);
    let mut relators_at: Vec<Vec<Vec<i32>>> = vec![Vec::new(); r];
    for d in 0..r {
        let words = test_words(&seq[..=d], seq[d], 4)
            .into_iter()
            .map(|w| {
                evaluate_fast(&w, h_gens, &h_inverses, &mut scratch);
                let o = scratch.order();
                (w, o)
            })
            .collect();
        words_at.push(words);
    }
    if let Some(p) = h.presentation() {
        for rel in p.relators() {
            let depth = rel
                .letters()
                .iter()
                .map(|l| seq.iter().position(|&s| s + 1 == l.unsigned_abs() as usize).expect("generator"))
                .max()
                .unwrap_or(0);
            relators_at[depth].push(rel.letters().to_vec());
        }
    }

    let buckets = rank_buckets(g);
    let candidates: BTreeMap<u64, Vec<Permutation>> = orders
        .iter()
        .map(|&o| {
            let list = buckets
                .get(&o)
                .map(|v| v.iter().map(|&x| g.unrank(x as u64)).collect())
                .unwrap_or_default();
            (o, list)
        })
        .collect();

    let mut out = empty;
    let first_order = orders[seq[0]];
    let mut seen = vec![false; g_order as usize];
    for rep in &candidates[&first_order] {
        let rank = g.rank(rep).expect("member") as usize;
        if seen[rank] {
            continue;
        }
        let conjugators = class_with_conjugators(g, rep, &mut seen);
        let mut state = MonoState {
            h,
            g,
            seq: &seq,
            orders: &orders,
            candidates: &candidates,
            words_at: &words_at,
            relators_at: &relators_at,
            images: vec![Permutation::identity(g.degree()); r],
            inverses: vec![Permutation::identity(g.degree()); r],
            scratch: Permutation::identity(g.degree()),
            solutions: Vec::new(),
        };
        state.assign(0, rep.clone());
        if state.consistent(0) {
            state.descend(1);
        }
        if !state.solutions.is_empty() {
            let solutions = core::mem::take(&mut state.solutions);
            out.branches.push(Branch { conjugators, solutions });
        }
    }
    out
}

struct MonoState<'a> {
    h: &'a GroupRecord,
    g: &'a StabilizerChain,
    seq: &'a [usize],
    orders: &'a [u64],
    candidates: &'a BTreeMap<u64, Vec<Permutation>>,
    words_at: &'a [Vec<(Vec<i32>, u64)>],
    relators_at: &'a [Vec<Vec<i32>>],
    images: Vec<Permutation>,
    inverses: Vec<Permutation>,
    scratch: Permutation,
    solutions: Vec<Vec<Permutation>>,
}

impl MonoState<'_> {
    fn assign(&mut self, depth: usize, x: Permutation) {
        let gi = self.seq[depth];
        self.inverses[gi] = x.inverse();
        self.images[gi] = x;
    }

    fn consistent(&mut self, depth: usize) -> bool {
        for (w, o) in &self.words_at[depth] {
            evaluate_fast(w, &self.images, &self.inverses, &mut self.scratch);
            if self.scratch.order() != *o {
                return false;
            }
        }
        for rel in &self.relators_at[depth] {
            evaluate_fast(rel, &self.images, &self.inverses, &mut self.scratch);
            if !self.scratch.is_identity() {
                return false;
            }
        }
        true
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.seq.len() {
            self.leaf();
            return;
        }
        let o = self.orders[self.seq[depth]];
        let cands = &self.candidates[&o];
        for x in cands {
            self.assign(depth, x.clone());
            if self.consistent(depth) {
                self.descend(depth + 1);
            }
        }
    }

    fn leaf(&mut self) {
        let ok = is_homomorphism(self.h, &self.images).unwrap_or(false)
            && StabilizerChain::new(self.g.degree(), &self.images).map(|c| c.order()).ok()
                == Some(self.h.order().value);
        if ok {
            self.solutions.push(self.images.clone());
        }
    }
}

/// Rank permutation of `g` induced by conjugation with `s` (any permutation
/// normalizing `g`).
pub fn conjugation_on_ranks(g: &StabilizerChain, s: &Permutation) -> Vec<u32> {
    (0..g.order() as u64)
        .map(|r| g.rank(&g.unrank(r).conjugate_by(s)).expect("s normalizes g") as u32)
        .collect()
}

/// One `G`-conjugacy class of subgroups isomorphic to the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    /// Generator images of a monomorphism onto one member.
    pub representative: Vec<Permutation>,
    /// Number of subgroups in the class.
    pub size: usize,
    /// `|N_G(member)| = |G| / size`.
    pub normalizer_order: u128,
    /// Index of the class under the ambient group, if one was given.
    pub fusion: usize,
}

/// Images of all monomorphisms `H → G`, grouped into `G`-classes and fused
/// under an optional ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClasses {
    pub classes: Vec<ClassRecord>,
    pub n_subgroups: usize,
    pub n_fused: usize,
}

/// Sorted ranks of every member subgroup with its class index; kept so
/// that embeddings can be located afterwards.
pub struct SubgroupKeys {
    index: BTreeMap<Vec<u32>, usize>,
    class_of_subgroup: Vec<usize>,
}

impl SubgroupKeys {
    pub fn class_of(&self, g: &StabilizerChain, e: &Embedding) -> Option<usize> {
        let key = subgroup_key(g, e.gen_images())?;
        self.index.get(&key).map(|&i| self.class_of_subgroup[i])
    }
}

fn subgroup_key(g: &StabilizerChain, gens: &[Permutation]) -> Option<Vec<u32>> {
    let sub = StabilizerChain::new(g.degree(), gens).ok()?;
    let mut key: Vec<u32> = sub.elements().map(|x| g.rank(&x).map(|r| r as u32)).collect::<Option<_>>()?;
    key.sort_unstable();
    Some(key)
}

fn apply_rank_map(map: &[u32], key: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = key.iter().map(|&r| map[r as usize]).collect();
    v.sort_unstable();
    v
}

/// Partitions the images of `monos` into `G`-classes and, when `ambient`
/// is given as permutations of the ranks of `g` induced by automorphisms,
/// fuses classes under it.
pub fn subgroup_classes(
    monos: &MonomorphismSet,
    g: &StabilizerChain,
    ambient: Option<&[Vec<u32>]>,
) -> Result<(SubgroupClasses, SubgroupKeys), SearchError> {
    subgroup_classes_with(monos, g, ambient, &Limits::default())
}

pub fn subgroup_classes_with(
    monos: &MonomorphismSet,
    g: &StabilizerChain,
    ambient: Option<&[Vec<u32>]>,
    limits: &Limits,
) -> Result<(SubgroupClasses, SubgroupKeys), SearchError> {
    if g.order() > limits.max_elements {
        return Err(guard(
            "max_enumerated_elements",
            format!("target order {} exceeds {}", g.order(), limits.max_elements),
        ));
    }
    let maps: Vec<Vec<u32>> = g.group_generators().iter().map(|s| conjugation_on_ranks(g, s)).collect();
    let mut keys: Vec<Vec<u32>> = Vec::new();
    let mut reps: Vec<(usize, Vec<Permutation>)> = Vec::new();
    let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for e in monos.representatives() {
        let key = subgroup_key(g, e.gen_images()).ok_or(SearchError::NotInGroup { index: 0 })?;
        if index.contains_key(&key) {
            continue;
        }
        let start = keys.len();
        index.insert(key.clone(), start);
        keys.push(key);
        reps.push((start, e.gen_images().to_vec()));
        let mut head = start;
        while head < keys.len() {
            for m in &maps {
                let k2 = apply_rank_map(m, &keys[head]);
                let j = match index.get(&k2) {
                    Some(&j) => j,
                    None => {
                        let j = keys.len();
                        index.insert(k2.clone(), j);
                        keys.push(k2);
                        j
                    }
                };
                edges.push((head, j));
            }
            head += 1;
        }
    }
    let n = keys.len();
    let mut uf = UnionFind::new(n);
    for &(a, b) in &edges {
        uf.union(a, b);
    }
    // Class ids in order of first appearance.
    let mut class_id = vec![usize::MAX; n];
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = uf.find(i);
        match roots.iter().position(|&x| x == r) {
            Some(c) => class_id[i] = c,
            None => {
                class_id[i] = roots.len();
                roots.push(r);
            }
        }
    }
    let n_classes = roots.len();
    let mut fused = UnionFind::new(n_classes);
    if let Some(amb) = ambient {
        for i in 0..n {
            for m in amb {
                let k2 = apply_rank_map(m, &keys[i]);
                let j = *index.get(&k2).ok_or_else(|| {
                    SearchError::Precondition(String::from("ambient group does not act by automorphisms"))
                })?;
                fused.union(class_id[i], class_id[j]);
            }
        }
    }
    let mut fusion_roots: Vec<usize> = Vec::new();
    let mut classes = Vec::with_capacity(n_classes);
    let g_order = g.order();
    for c in 0..n_classes {
        let size = class_id.iter().filter(|&&x| x == c).count();
        let fr = fused.find(c);
        let fusion = match fusion_roots.iter().position(|&x| x == fr) {
            Some(f) => f,
            None => {
                fusion_roots.push(fr);
                fusion_roots.len() - 1
            }
        };
        let representative = reps
            .iter()
            .find(|(k, _)| class_id[*k] == c)
            .map(|(_, r)| r.clone())
            .expect("each class has a representative");
        classes.push(ClassRecord {
            representative,
            size,
            normalizer_order: g_order / size as u128,
            fusion,
        });
    }
    let n_fused = fusion_roots.len();
    Ok((
        SubgroupClasses {
            classes,
            n_subgroups: n,
            n_fused,
        },
        SubgroupKeys {
            index,
            class_of_subgroup: class_id,
        },
    ))
}
