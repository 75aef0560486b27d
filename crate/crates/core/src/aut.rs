//! Automorphism groups of small simple groups as permutation groups.
//!
//! `Aut(G)` is realized either as `N_{S_n}(G)` on the points of `G`'s own
//! permutation representation, or as a group of permutations of the
//! elements of `G` (indexed by their ranks in `G`'s stabilizer chain).
//! Automorphisms act on the right: `apply(α, x)` is `x^α`, and the inner
//! automorphism of `g` is `x ↦ g⁻¹ x g`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::atlas::{GroupRecord, Provenance, Tagged};
use crate::chain::StabilizerChain;
use crate::error::{AutError, GuardExceeded};
use crate::perm::Permutation;
use crate::search::{self, conjugation_on_ranks, Embedding};

/// Largest `|G|` for which `|Aut(G)|` is computed by counting
/// monomorphisms `G → G`.
pub const AUT_ORDER_GUARD: u128 = 200_000;
/// Largest `|G|` for the action-on-elements realization.
pub const ELEMENT_MODE_GUARD: u128 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutMode {
    NormalizerInSymmetric,
    ActionOnElements,
}

impl AutMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AutMode::NormalizerInSymmetric => "normalizer-in-symmetric",
            AutMode::ActionOnElements => "action-on-elements",
        }
    }
}

/// `|Aut(G)|`: counted as the number of monomorphisms `G → G` when
/// `|G| ≤ AUT_ORDER_GUARD`, otherwise `|G|·|Out(G)|` from metadata.
pub fn aut_order(g: &GroupRecord) -> Result<Tagged<u128>, AutError> {
    let order = g.order();
    if let Some(chain) = g.chain() {
        if order.value <= AUT_ORDER_GUARD && g.is_nonabelian_simple() {
            let count = search::monomorphisms_unguarded(g, chain)?.count();
            return Ok(Tagged::derived(count));
        }
    }
    match g.out_order() {
        Some(out) => Ok(Tagged {
            value: order.value.saturating_mul(out.value as u128),
            provenance: Provenance::Asserted,
        }),
        None if g.chain().is_none() => Err(AutError::NoGenerators(g.name().into())),
        None => Err(AutError::Guard(GuardExceeded {
            guard: "aut_order",
            detail: format!("|{}| = {} exceeds {AUT_ORDER_GUARD} and no metadata", g.name(), order.value),
        })),
    }
}

/// A permutation realization of `Aut(G)`.
#[derive(Clone, Debug)]
pub struct AutRep {
    name: String,
    group: StabilizerChain,
    realization: StabilizerChain,
    mode: AutMode,
    aut_order: Tagged<u128>,
    certified: bool,
    certificate: Vec<String>,
}

/// Builds `Aut(G)`: first as `N_{S_n}(G)`, falling back to the action on
/// elements when the normalizer is too small.
pub fn aut_realization(g: &GroupRecord) -> Result<AutRep, AutError> {
    let chain = g
        .chain()
        .ok_or_else(|| AutError::NoGenerators(g.name().into()))?
        .clone();
    let order = aut_order(g)?;
    let mut certificate = Vec::new();
    if order.provenance == Provenance::Derived {
        certificate.push(format!("|Aut({})| = {} by monomorphism count", g.name(), order.value));
    }
    let mut reason = String::new();
    if chain.is_transitive() {
        let sym = StabilizerChain::symmetric(chain.degree());
        match search::normalizer(&sym, chain.generators()) {
            Ok(n) => {
                let c = search::centralizer(&n, chain.generators())?;
                let certified = c.order() == 1 && n.order() == order.value && order.provenance == Provenance::Derived;
                if certified {
                    certificate.push(format!("|N_S{}({})| = {}", chain.degree(), g.name(), n.order()));
                    certificate.push(format!("C_N({}) = 1", g.name()));
                    return Ok(AutRep {
                        name: g.name().into(),
                        group: chain,
                        realization: n,
                        mode: AutMode::NormalizerInSymmetric,
                        aut_order: order,
                        certified,
                        certificate,
                    });
                }
                reason = format!(
                    "|N_S{}({})| = {} and |C| = {}, |Aut| = {}",
                    chain.degree(),
                    g.name(),
                    n.order(),
                    c.order(),
                    order.value
                );
            }
            Err(e) => reason = format!("{e}"),
        }
    } else {
        reason.push_str("intransitive representation");
    }
    if order.provenance != Provenance::Derived || chain.order() > ELEMENT_MODE_GUARD {
        return Err(AutError::NoRealization(g.name().into(), reason));
    }
    certificate.push(format!("normalizer mode rejected: {reason}"));
    element_mode(g, chain, order, certificate)
}

/// The automorphism given by generator images, as a permutation of ranks.
fn automorphism_on_ranks(g: &StabilizerChain, images: &[Permutation]) -> Permutation {
    let gens = g.generators();
    let m = g.order() as usize;
    let mut table = vec![u32::MAX; m];
    let id = Permutation::identity(g.degree());
    let r0 = g.rank(&id).expect("identity") as usize;
    table[r0] = r0 as u32;
    let mut queue = vec![(id.clone(), id)];
    let mut head = 0;
    while head < queue.len() {
        let (x, y) = queue[head].clone();
        head += 1;
        for (s, t) in gens.iter().zip(images) {
            let x2 = x.mul(s);
            let rx = g.rank(&x2).expect("member") as usize;
            if table[rx] == u32::MAX {
                let y2 = y.mul(t);
                table[rx] = g.rank(&y2).expect("image is a member") as u32;
                queue.push((x2, y2));
            }
        }
    }
    Permutation::from_images(table).expect("automorphisms permute elements")
}

fn element_mode(
    g: &GroupRecord,
    chain: StabilizerChain,
    order: Tagged<u128>,
    mut certificate: Vec<String>,
) -> Result<AutRep, AutError> {
    let m = chain.order() as usize;
    let mut gens: Vec<Permutation> = chain
        .generators()
        .iter()
        .map(|s| Permutation::from_images(conjugation_on_ranks(&chain, s)).expect("bijection"))
        .collect();
    let mut realization = StabilizerChain::new(m, &gens).map_err(search_err)?;
    let monos = search::monomorphisms_unguarded(g, &chain)?;
    for e in monos.representatives() {
        if realization.order() >= order.value {
            break;
        }
        let alpha = automorphism_on_ranks(&chain, e.gen_images());
        if !realization.contains(&alpha) {
            gens.push(alpha);
            realization = StabilizerChain::new(m, &gens).map_err(search_err)?;
        }
    }
    if realization.order() < order.value {
        for e in monos.iter() {
            if realization.order() >= order.value {
                break;
            }
            let alpha = automorphism_on_ranks(&chain, e.gen_images());
            if !realization.contains(&alpha) {
                gens.push(alpha);
                realization = StabilizerChain::new(m, &gens).map_err(search_err)?;
            }
        }
    }
    let inner: Vec<Permutation> = gens[..chain.generators().len()].to_vec();
    let c = search::centralizer(&realization, &inner)?;
    let certified = realization.order() == order.value && c.order() == 1;
    certificate.push(format!(
        "action on {m} elements: order {}, centralizer of inner image {}",
        realization.order(),
        c.order()
    ));
    Ok(AutRep {
        name: g.name().into(),
        group: chain,
        realization,
        mode: AutMode::ActionOnElements,
        aut_order: order,
        certified,
        certificate,
    })
}

fn search_err(e: crate::error::PermError) -> AutError {
    AutError::Search(e.into())
}

impl AutRep {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> AutMode {
        self.mode
    }

    pub fn group(&self) -> &StabilizerChain {
        &self.group
    }

    pub fn realization(&self) -> &StabilizerChain {
        &self.realization
    }

    pub fn aut_order(&self) -> Tagged<u128> {
        self.aut_order
    }

    /// `|Out(G)| = |Aut(G)| / |G|`.
    pub fn out_order(&self) -> Tagged<u128> {
        Tagged {
            value: self.aut_order.value / self.group.order(),
            provenance: self.aut_order.provenance,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn certificate(&self) -> &[String] {
        &self.certificate
    }

    /// The inner automorphism `x ↦ g⁻¹ x g` as an element of the realization.
    pub fn inner(&self, g: &Permutation) -> Permutation {
        match self.mode {
            AutMode::NormalizerInSymmetric => g.clone(),
            AutMode::ActionOnElements => {
                Permutation::from_images(conjugation_on_ranks(&self.group, g)).expect("bijection")
            }
        }
    }

    /// Images of elements of `G` under the conjugation embedding.
    pub fn inner_all(&self, xs: &[Permutation]) -> Vec<Permutation> {
        xs.iter().map(|x| self.inner(x)).collect()
    }

    /// The conjugation embedding `G → Aut(G)`, certified against `g`.
    pub fn inner_embedding(&self, g: &GroupRecord) -> Result<Embedding, AutError> {
        let images = self.inner_all(g.generators());
        Ok(Embedding::certify(g, &self.realization, images)?)
    }

    /// `x^α` for `x ∈ G` and `α` in the realization.
    pub fn apply(&self, alpha: &Permutation, x: &Permutation) -> Permutation {
        match self.mode {
            AutMode::NormalizerInSymmetric => x.conjugate_by(alpha),
            AutMode::ActionOnElements => {
                let r = self.group.rank(x).expect("element of G");
                self.group.unrank(alpha.image(r as u32) as u64)
            }
        }
    }

    /// `α` as a permutation of the ranks of `G`.
    pub fn rank_action(&self, alpha: &Permutation) -> Vec<u32> {
        match self.mode {
            AutMode::NormalizerInSymmetric => conjugation_on_ranks(&self.group, alpha),
            AutMode::ActionOnElements => alpha.images().to_vec(),
        }
    }

    /// Rank actions of the realization's generators.
    pub fn rank_action_generators(&self) -> Vec<Vec<u32>> {
        self.realization
            .group_generators()
            .iter()
            .map(|a| self.rank_action(a))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{record, stub};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn aut_orders() {
        assert_eq!(aut_order(&record("A5")).unwrap(), Tagged::derived(120));
        assert_eq!(aut_order(&record("A6")).unwrap(), Tagged::derived(1440));
        assert_eq!(aut_order(&record("L2_7")).unwrap(), Tagged::derived(336));
        let t = stub("T", 17971200, 2);
        assert_eq!(aut_order(&t).unwrap(), Tagged::asserted(35942400));
    }

    #[test]
    fn m11_is_complete() {
        let m11 = record("M11");
        assert_eq!(aut_order(&m11).unwrap(), Tagged::derived(7920));
        let a = aut_realization(&m11).unwrap();
        assert_eq!(a.mode(), AutMode::NormalizerInSymmetric);
        assert!(a.is_certified());
        assert_eq!(a.out_order().value, 1);
    }

    #[test]
    fn a5_realized_in_s5() {
        let a5 = record("A5");
        let a = aut_realization(&a5).unwrap();
        assert_eq!(a.mode(), AutMode::NormalizerInSymmetric);
        assert!(a.is_certified());
        assert_eq!(a.realization().order(), 120);
        let inner = a.inner_embedding(&a5).unwrap();
        assert_eq!(inner.image_chain().order(), 60);
        assert!(a.inner(&Permutation::identity(5)).is_identity());
    }

    #[test]
    fn a6_needs_the_element_action() {
        let a6 = record("A6");
        let a = aut_realization(&a6).unwrap();
        assert_eq!(a.mode(), AutMode::ActionOnElements);
        assert!(a.is_certified());
        assert_eq!(a.realization().order(), 1440);
        assert_eq!(a.realization().degree(), 360);
        assert_eq!(a.out_order().value, 4);
    }

    #[test]
    fn conjugation_square_commutes() {
        for name in ["A5", "A6"] {
            let g = record(name);
            let a = aut_realization(&g).unwrap();
            let chain = g.chain().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..100 {
                let alpha = a.realization().random_element(&mut rng);
                let x = chain.random_element(&mut rng);
                let y = chain.random_element(&mut rng);
                let lhs = alpha.inverse().mul(&a.inner(&x)).mul(&alpha);
                assert_eq!(lhs, a.inner(&a.apply(&alpha, &x)));
                assert_eq!(a.inner(&x).mul(&a.inner(&y)), a.inner(&x.mul(&y)));
                assert_eq!(a.apply(&alpha, &x.mul(&y)), a.apply(&alpha, &x).mul(&a.apply(&alpha, &y)));
            }
        }
    }
}
