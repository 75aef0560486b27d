//! Deciding whether an inclusion `H ↪ G` of finite simple groups is a
//! localization, i.e. whether restriction `Hom(G, G) → Hom(H, G)` is a
//! bijection.
//!
//! The criterion used: restriction is a bijection iff
//! 1. every automorphism of `H` extends to `G` (checked as
//!    `|N_{Aut G}(H)| = |Aut H|` when the centralizer is trivial),
//! 2. all subgroups of `G` isomorphic to `H` are conjugate under `Aut(G)`,
//! 3. `C_{Aut G}(H) = 1`.
//!
//! The brute-force oracle counts `Hom(H, G) − {0}` directly and compares it
//! with `|Aut(G)|`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atlas::{Atlas, GroupRecord, Provenance};
use crate::aut::{aut_order, aut_realization, AutRep};
use crate::chain::StabilizerChain;
use crate::embed::{self, CosetEmbedding};
use crate::error::{AutError, EnumerationError, SearchError};
use crate::perm::Permutation;
use crate::search::{self, Embedding, Limits};

/// Reason recorded whenever a verdict cannot be derived.
pub const GUARD_REASON: &str = "asserted metadata / guard";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Pass,
    Fail(String),
    Undecided(String),
}

impl Condition {
    pub fn is_pass(&self) -> bool {
        matches!(self, Condition::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Condition::Fail(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::Pass => "pass",
            Condition::Fail(_) => "fail",
            Condition::Undecided(_) => "undecided",
        }
    }

    pub fn detail(&self) -> Option<&str> {
        match self {
            Condition::Pass => None,
            Condition::Fail(w) | Condition::Undecided(w) => Some(w),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.detail() {
            None => f.write_str(self.as_str()),
            Some(d) => write!(f, "{} ({d})", self.as_str()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    TheoremMain,
    CorollaryComplete,
    CorollaryMax,
    Oracle,
    LargestMaximal,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::TheoremMain => "theorem_main",
            Route::CorollaryComplete => "corollary_complete",
            Route::CorollaryMax => "corollary_max",
            Route::Oracle => "oracle",
            Route::LargestMaximal => "largest_maximal",
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A non-negative rational in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn as_integer(self) -> Option<u128> {
        (self.den == 1).then_some(self.num)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportProvenance {
    Derived,
    Mixed,
}

impl ReportProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportProvenance::Derived => "derived",
            ReportProvenance::Mixed => "mixed",
        }
    }
}

/// Outcome of the three conditions for one embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub pair: (String, String),
    pub cond_extension: Condition,
    pub cond_fusion: Condition,
    pub cond_centralizer: Condition,
    /// Number of `G`-classes of subgroups isomorphic to `H`.
    pub class_count_observed: Option<u128>,
    /// `|Out G| / |Out H| · |N_G(H)| / |H|`.
    pub class_count_expected: Option<Ratio>,
    pub route: Route,
    pub provenance: ReportProvenance,
    /// Orders and counts behind the conditions, as `key=value` strings.
    pub facts: Vec<String>,
}

impl CriterionReport {
    fn new(h: &str, g: &str, route: Route) -> Self {
        CriterionReport {
            pair: (h.into(), g.into()),
            cond_extension: Condition::Undecided(String::from("not examined")),
            cond_fusion: Condition::Undecided(String::from("not examined")),
            cond_centralizer: Condition::Undecided(String::from("not examined")),
            class_count_observed: None,
            class_count_expected: None,
            route,
            provenance: ReportProvenance::Derived,
            facts: Vec::new(),
        }
    }

    fn conditions(&self) -> [&Condition; 3] {
        [&self.cond_extension, &self.cond_fusion, &self.cond_centralizer]
    }

    pub fn value(&self) -> VerdictValue {
        let c = self.conditions();
        if c.iter().any(|x| x.is_fail()) {
            VerdictValue::NotLocalization
        } else if c.iter().all(|x| x.is_pass()) {
            VerdictValue::Localization
        } else {
            VerdictValue::Undecided
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictValue {
    Localization,
    NotLocalization,
    Undecided,
}

impl VerdictValue {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictValue::Localization => "Localization",
            VerdictValue::NotLocalization => "NotLocalization",
            VerdictValue::Undecided => "Undecided",
        }
    }
}

impl fmt::Display for VerdictValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Direct comparison of `|Hom(H, G) − {0}|` with `|Aut(G)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub monomorphisms: u128,
    pub aut_order: u128,
    /// Number of distinct restrictions `α ∘ i` over `α ∈ Aut(G)`.
    pub distinct_restrictions: u128,
    pub injective: bool,
    pub bijection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: VerdictValue,
    pub pair: (String, String),
    pub route: Route,
    pub reason: String,
    pub report: Option<CriterionReport>,
    pub oracle: Option<OracleReport>,
    pub largest_maximal: Option<CosetEmbedding>,
}

impl Verdict {
    fn undecided(h: &str, g: &str, route: Route, reason: String) -> Self {
        Verdict {
            value: VerdictValue::Undecided,
            pair: (h.into(), g.into()),
            route,
            reason,
            report: None,
            oracle: None,
            largest_maximal: None,
        }
    }

    /// Structured text with a fixed field order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: &str| {
            s.push_str(k);
            s.push_str(": ");
            s.push_str(v);
            s.push('\n');
        };
        line("pair", &format!("{} {}", self.pair.0, self.pair.1));
        line("verdict", self.value.as_str());
        line("route", self.route.as_str());
        line("reason", &self.reason);
        if let Some(r) = &self.report {
            line("extension", &format!("{}", r.cond_extension));
            line("fusion", &format!("{}", r.cond_fusion));
            line("centralizer", &format!("{}", r.cond_centralizer));
            let obs = r.class_count_observed.map_or(String::from("-"), |x| format!("{x}"));
            let exp = r.class_count_expected.map_or(String::from("-"), |x| format!("{x}"));
            line("classes_observed", &obs);
            line("classes_expected", &exp);
            line("provenance", r.provenance.as_str());
            for fact in &r.facts {
                line("fact", fact);
            }
        }
        if let Some(o) = &self.oracle {
            line(
                "oracle",
                &format!(
                    "monomorphisms={} aut_order={} distinct_restrictions={} bijection={}",
                    o.monomorphisms, o.aut_order, o.distinct_restrictions, o.bijection
                ),
            );
        }
        if let Some(c) = &self.largest_maximal {
            line(
                "coset_action",
                &format!(
                    "degree={} even={} faithful={} primitive={}",
                    c.degree, c.evenness, c.faithful, c.primitive
                ),
            );
            line("order_maximal", &format!("{}", c.order_maximal));
            line("unique_index_class", &format!("{}", c.unique_index_class));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LocalizationError {
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("no embedding of {0} into {1} exists")]
    NoEmbedding(String, String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

impl LocalizationError {
    /// Whether the failure is a refused guard or missing data rather than a
    /// genuine error.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            LocalizationError::Search(SearchError::Guard(_))
                | LocalizationError::Aut(AutError::Guard(_))
                | LocalizationError::Aut(AutError::NoGenerators(_))
                | LocalizationError::Aut(AutError::NoRealization(..))
                | LocalizationError::Aut(AutError::Search(SearchError::Guard(_)))
                | LocalizationError::Enumeration(EnumerationError::Overflow { .. })
                | LocalizationError::Enumeration(EnumerationError::GuardExceeded { .. })
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Also run the brute-force oracle and require agreement.
    pub cross_check: bool,
    pub limits: Limits,
    /// Coset-table bound for the largest-maximal route.
    pub max_cosets: Option<usize>,
}

fn target_chain(g: &GroupRecord) -> Result<&StabilizerChain, LocalizationError> {
    g.chain()
        .ok_or_else(|| LocalizationError::Aut(AutError::NoGenerators(g.name().into())))
}

/// Facts shared by the criterion routes.
struct Shared {
    aut_h: crate::atlas::Tagged<u128>,
    monomorphisms: u128,
    classes: search::SubgroupClasses,
    class_index: usize,
    n_order: u128,
    c_order: u128,
}

fn shared_facts(
    h: &GroupRecord,
    i: &Embedding,
    g: &StabilizerChain,
    aut_g: &AutRep,
    limits: &Limits,
) -> Result<Shared, LocalizationError> {
    let aut_h = aut_order(h)?;
    let monos = search::monomorphisms_with(h, g, limits)?;
    let ambient = aut_g.rank_action_generators();
    let (classes, keys) = search::subgroup_classes_with(&monos, g, Some(&ambient), limits)?;
    let class_index = keys
        .class_of(g, i)
        .ok_or_else(|| LocalizationError::InvariantBreach(String::from("embedding image missing from class list")))?;
    let image = aut_g.inner_all(i.gen_images());
    let n = search::normalizer_with(aut_g.realization(), &image, limits)?;
    let c = search::centralizer_with(aut_g.realization(), &image, limits)?;
    Ok(Shared {
        aut_h,
        monomorphisms: monos.count(),
        classes,
        class_index,
        n_order: n.order(),
        c_order: c.order(),
    })
}

fn extension_condition(s: &Shared) -> Condition {
    if s.aut_h.provenance != Provenance::Derived {
        return Condition::Undecided(String::from(GUARD_REASON));
    }
    if s.c_order == 1 {
        if s.n_order == s.aut_h.value {
            Condition::Pass
        } else {
            Condition::Fail(format!("|N_Aut(G)(H)| = {} but |Aut(H)| = {}", s.n_order, s.aut_h.value))
        }
    } else if s.n_order / s.c_order != s.aut_h.value {
        Condition::Fail(format!(
            "|N_Aut(G)(H) / C_Aut(G)(H)| = {} but |Aut(H)| = {}",
            s.n_order / s.c_order,
            s.aut_h.value
        ))
    } else {
        Condition::Undecided(String::from("centralizer is nontrivial; splitting not examined"))
    }
}

fn fusion_condition(s: &Shared) -> Condition {
    if s.classes.n_fused == 1 {
        Condition::Pass
    } else {
        Condition::Fail(format!(
            "{} subgroups in {} G-classes and {} Aut(G)-classes",
            s.classes.n_subgroups,
            s.classes.classes.len(),
            s.classes.n_fused
        ))
    }
}

fn fill_counts(report: &mut CriterionReport, s: &Shared, g_order: u128, aut_g: &AutRep) {
    let n_g = s.classes.classes[s.class_index].normalizer_order;
    report.class_count_observed = Some(s.classes.classes.len() as u128);
    if s.aut_h.provenance == Provenance::Derived {
        report.class_count_expected = Some(Ratio::new(
            aut_g.aut_order().value * n_g,
            g_order * s.aut_h.value,
        ));
    }
    report.facts.push(format!("monomorphisms={}", s.monomorphisms));
    report.facts.push(format!("aut_order_G={}", aut_g.aut_order().value));
    report.facts.push(format!("aut_order_H={}", s.aut_h.value));
    report.facts.push(format!("normalizer_in_aut={}", s.n_order));
    report.facts.push(format!("centralizer_in_aut={}", s.c_order));
    report.facts.push(format!("normalizer_in_G={n_g}"));
    report.facts.push(format!("subgroups={}", s.classes.n_subgroups));
    report.facts.push(format!("aut_classes={}", s.classes.n_fused));
    report.facts.push(format!("realization={}", aut_g.mode().as_str()));
    if s.aut_h.provenance != Provenance::Derived || aut_g.aut_order().provenance != Provenance::Derived {
        report.provenance = ReportProvenance::Mixed;
    }
}

fn require_certified(aut_g: &AutRep) -> Result<(), LocalizationError> {
    if aut_g.is_certified() {
        Ok(())
    } else {
        Err(LocalizationError::Aut(AutError::NoRealization(
            aut_g.name().into(),
            String::from("realization not certified"),
        )))
    }
}

/// Checks the three conditions for `i: H ↪ G`.
pub fn check_criterion(h: &GroupRecord, i: &Embedding, g_record: &GroupRecord, aut_g: &AutRep) -> Result<CriterionReport, LocalizationError> {
    check_criterion_with(h, i, g_record, aut_g, &Limits::default())
}

pub fn check_criterion_with(
    h: &GroupRecord,
    i: &Embedding,
    g_record: &GroupRecord,
    aut_g: &AutRep,
    limits: &Limits,
) -> Result<CriterionReport, LocalizationError> {
    require_certified(aut_g)?;
    let g = target_chain(g_record)?;
    let s = shared_facts(h, i, g, aut_g, limits)?;
    let mut report = CriterionReport::new(h.name(), g_record.name(), Route::TheoremMain);
    report.cond_centralizer = if s.c_order == 1 {
        Condition::Pass
    } else {
        Condition::Fail(format!("|C_Aut(G)(H)| = {}", s.c_order))
    };
    report.cond_extension = extension_condition(&s);
    report.cond_fusion = fusion_condition(&s);
    fill_counts(&mut report, &s, g.order(), aut_g);
    check_count_identity(&report)?;
    Ok(report)
}

/// All conditions passing forces the class count formula.
fn check_count_identity(report: &CriterionReport) -> Result<(), LocalizationError> {
    if report.value() == VerdictValue::Localization {
        if let (Some(obs), Some(exp)) = (report.class_count_observed, report.class_count_expected) {
            if exp.as_integer() != Some(obs) {
                return Err(LocalizationError::InvariantBreach(format!(
                    "{} ↪ {}: {obs} classes observed, {exp} expected",
                    report.pair.0, report.pair.1
                )));
            }
        }
    }
    Ok(())
}

/// Whether `i(H)` is maximal in `G`, via primitivity of `G` on its cosets.
pub fn is_maximal(g: &StabilizerChain, i: &Embedding, limits: &Limits) -> Result<bool, LocalizationError> {
    if g.order() > limits.max_elements {
        return Err(SearchError::Guard(crate::error::GuardExceeded {
            guard: "max_enumerated_elements",
            detail: format!("|G| = {} exceeds {}", g.order(), limits.max_elements),
        })
        .into());
    }
    let sub = i.image_chain();
    let h_elems: Vec<Permutation> = sub.elements().collect();
    let m = g.order() as usize;
    // Right cosets Hx, labelled by the least rank they contain.
    let label = |x: &Permutation| -> u64 {
        h_elems
            .iter()
            .map(|y| g.rank(&y.mul(x)).expect("member"))
            .min()
            .expect("non-empty")
    };
    let gens = g.group_generators();
    let id = Permutation::identity(g.degree());
    let mut labels: Vec<u64> = Vec::new();
    let mut reps: Vec<Permutation> = Vec::new();
    let mut index_of: alloc::collections::BTreeMap<u64, u32> = alloc::collections::BTreeMap::new();
    index_of.insert(label(&id), 0);
    labels.push(label(&id));
    reps.push(id);
    let mut action: Vec<Vec<u32>> = alloc::vec![Vec::new(); gens.len()];
    let mut head = 0;
    while head < reps.len() {
        for (k, s) in gens.iter().enumerate() {
            let y = reps[head].mul(s);
            let l = label(&y);
            let j = match index_of.get(&l) {
                Some(&j) => j,
                None => {
                    let j = reps.len() as u32;
                    index_of.insert(l, j);
                    labels.push(l);
                    reps.push(y);
                    j
                }
            };
            action[k].push(j);
        }
        head += 1;
        if reps.len() > m {
            return Err(LocalizationError::InvariantBreach(String::from("coset count exceeds group order")));
        }
    }
    let n = reps.len();
    let perms: Vec<Permutation> = action
        .into_iter()
        .map(|imgs| Permutation::from_images(imgs).expect("coset action is a permutation"))
        .collect();
    Ok(n > 1 && search::is_primitive(n, &perms))
}

/// The route for maximal `H`: the extension and fusion conditions, and the class count
/// `|Out G| / |Out H|` in place of the centralizer condition.
pub fn check_corollary_max(
    h: &GroupRecord,
    i: &Embedding,
    g_record: &GroupRecord,
    aut_g: &AutRep,
    limits: &Limits,
) -> Result<CriterionReport, LocalizationError> {
    require_certified(aut_g)?;
    let g = target_chain(g_record)?;
    if !is_maximal(g, i, limits)? {
        return Err(LocalizationError::InvariantBreach(format!("{} is not maximal in {}", h.name(), g_record.name())));
    }
    let s = shared_facts(h, i, g, aut_g, limits)?;
    let mut report = CriterionReport::new(h.name(), g_record.name(), Route::CorollaryMax);
    report.cond_extension = extension_condition(&s);
    report.cond_fusion = fusion_condition(&s);
    let observed = s.classes.classes.len() as u128;
    report.cond_centralizer = if s.aut_h.provenance != Provenance::Derived {
        Condition::Undecided(String::from(GUARD_REASON))
    } else {
        let expected = Ratio::new(aut_g.aut_order().value * h.order().value, g.order() * s.aut_h.value);
        if expected.as_integer() == Some(observed) {
            Condition::Pass
        } else {
            Condition::Fail(format!("{observed} G-classes but |Out G|/|Out H| = {expected}"))
        }
    };
    report.facts.push(String::from("maximal=true"));
    fill_counts(&mut report, &s, g.order(), aut_g);
    check_count_identity(&report)?;
    Ok(report)
}

/// The route for complete `H` and `G`: a single `G`-class and `C_G(H) = 1`.
pub fn check_corollary_complete(
    h: &GroupRecord,
    i: &Embedding,
    g_record: &GroupRecord,
    limits: &Limits,
) -> Result<CriterionReport, LocalizationError> {
    let g = target_chain(g_record)?;
    let (aut_h, aut_g) = (aut_order(h)?, aut_order(g_record)?);
    let mut report = CriterionReport::new(h.name(), g_record.name(), Route::CorollaryComplete);
    let complete = aut_h.provenance == Provenance::Derived
        && aut_g.provenance == Provenance::Derived
        && aut_h.value == h.order().value
        && aut_g.value == g.order();
    if !complete {
        return Err(LocalizationError::InvariantBreach(String::from("groups are not both complete")));
    }
    let monos = search::monomorphisms_with(h, g, limits)?;
    let (classes, _) = search::subgroup_classes_with(&monos, g, None, limits)?;
    let c = search::centralizer_with(g, i.gen_images(), limits)?;
    report.cond_extension = Condition::Pass;
    report.cond_fusion = if classes.classes.len() == 1 {
        Condition::Pass
    } else {
        Condition::Fail(format!("{} G-classes", classes.classes.len()))
    };
    report.cond_centralizer = if c.order() == 1 {
        Condition::Pass
    } else {
        Condition::Fail(format!("|C_G(H)| = {}", c.order()))
    };
    report.class_count_observed = Some(classes.classes.len() as u128);
    report.class_count_expected = Some(Ratio::new(1, 1));
    report.facts.push(String::from("complete=true"));
    Ok(report)
}

/// Compares `|Hom(H, G) − {0}|` with `|Aut(G)|` and checks that distinct
/// automorphisms restrict to distinct maps on `i(H)`.
pub fn oracle_bijection(
    h: &GroupRecord,
    i: &Embedding,
    g_record: &GroupRecord,
    aut_g: &AutRep,
    limits: &Limits,
) -> Result<OracleReport, LocalizationError> {
    require_certified(aut_g)?;
    if aut_g.aut_order().provenance != Provenance::Derived {
        return Err(AutError::NoRealization(aut_g.name().into(), String::from(GUARD_REASON)).into());
    }
    let g = target_chain(g_record)?;
    let monos = search::monomorphisms_with(h, g, limits)?.count();
    let real = aut_g.realization();
    if real.order() > limits.max_elements {
        return Err(SearchError::Guard(crate::error::GuardExceeded {
            guard: "max_enumerated_elements",
            detail: format!("|Aut(G)| = {} exceeds {}", real.order(), limits.max_elements),
        })
        .into());
    }
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for alpha in real.elements() {
        let tuple: Vec<u64> = i
            .gen_images()
            .iter()
            .map(|x| g.rank(&aut_g.apply(&alpha, x)).expect("automorphism image"))
            .collect();
        seen.insert(tuple);
    }
    let distinct = seen.len() as u128;
    let injective = distinct == real.order();
    let aut = aut_g.aut_order().value;
    Ok(OracleReport {
        monomorphisms: monos,
        aut_order: aut,
        distinct_restrictions: distinct,
        injective,
        bijection: injective && monos == aut && real.order() == aut,
    })
}

/// Whether `G` is the alternating group in its natural action of degree `n`.
fn is_natural_alternating(g: &GroupRecord) -> Option<usize> {
    let chain = g.chain()?;
    let n = chain.degree();
    let half_factorial = (1..=n as u128).try_fold(1u128, |a, k| a.checked_mul(k))? / 2;
    (n >= 3 && chain.order() == half_factorial).then_some(n)
}

/// Runs the cheapest applicable route for `H ↪ G`.
pub fn is_localization(atlas: &Atlas, h_name: &str, g_name: &str, options: &Options) -> Result<Verdict, LocalizationError> {
    let h = atlas
        .get(h_name)
        .ok_or_else(|| LocalizationError::UnknownGroup(h_name.into()))?;
    let g = atlas
        .get(g_name)
        .ok_or_else(|| LocalizationError::UnknownGroup(g_name.into()))?;
    if h.is_stub() || g.is_stub() || h.order().provenance != Provenance::Derived || g.order().provenance != Provenance::Derived {
        return Ok(Verdict::undecided(h_name, g_name, Route::TheoremMain, String::from(GUARD_REASON)));
    }
    if h.order().value > g.order().value || g.order().value % h.order().value != 0 {
        return Err(LocalizationError::NoEmbedding(h_name.into(), g_name.into()));
    }

    let mut preface = String::new();
    if let Some(n) = is_natural_alternating(g) {
        if n >= embed::MIN_DEGREE {
            if let Some(words) = embed::subgroup_of_index(h, n, options.max_cosets) {
                let lm = embed::verify_largest_maximal_edge(h, &words, g_name, options.max_cosets);
                match lm {
                    Ok(v) if v.value == VerdictValue::Localization => {
                        if options.cross_check {
                            match criterion_verdict(h, g, options) {
                                Ok(c) if c.value != v.value && c.value != VerdictValue::Undecided => {
                                    return Err(LocalizationError::InvariantBreach(format!(
                                        "{h_name} ↪ {g_name}: largest-maximal route says {}, criterion says {}",
                                        v.value, c.value
                                    )));
                                }
                                Ok(c) => {
                                    let mut v = v;
                                    v.report = c.report;
                                    v.oracle = c.oracle;
                                    if c.value == v.value {
                                        v.reason.push_str("; criterion agrees");
                                    }
                                    return Ok(v);
                                }
                                Err(e) if e.is_guard() => return Ok(v),
                                Err(e) => return Err(e),
                            }
                        }
                        return Ok(v);
                    }
                    Ok(v) => preface = format!("largest-maximal route undecided: {}; ", v.reason),
                    Err(e) => preface = format!("largest-maximal route unavailable: {e}; "),
                }
            }
        }
    }
    match criterion_verdict(h, g, options) {
        Ok(mut v) => {
            v.reason.insert_str(0, &preface);
            Ok(v)
        }
        Err(e) if e.is_guard() => {
            let mut v = Verdict::undecided(h_name, g_name, Route::TheoremMain, format!("{GUARD_REASON}: {e}"));
            v.reason.insert_str(0, &preface);
            Ok(v)
        }
        Err(e) => Err(e),
    }
}

fn criterion_verdict(h: &GroupRecord, g: &GroupRecord, options: &Options) -> Result<Verdict, LocalizationError> {
    let limits = &options.limits;
    let g_chain = target_chain(g)?;
    let monos = search::monomorphisms_with(h, g_chain, limits)?;
    let i = monos
        .least()
        .ok_or_else(|| LocalizationError::NoEmbedding(h.name().into(), g.name().into()))?;
    let aut_h = aut_order(h)?;
    let aut_g_order = aut_order(g)?;
    let complete = aut_h.provenance == Provenance::Derived
        && aut_g_order.provenance == Provenance::Derived
        && aut_h.value == h.order().value
        && aut_g_order.value == g.order().value;
    let mut aut_g: Option<AutRep> = None;
    let report = if complete {
        check_corollary_complete(h, &i, g, limits)?
    } else {
        let a = aut_realization(g)?;
        require_certified(&a)?;
        let r = if is_maximal(g_chain, &i, limits)? {
            check_corollary_max(h, &i, g, &a, limits)?
        } else {
            check_criterion_with(h, &i, g, &a, limits)?
        };
        aut_g = Some(a);
        r
    };
    let value = report.value();
    let mut reason = match value {
        VerdictValue::Localization => String::from("all conditions hold"),
        VerdictValue::NotLocalization => {
            let failed: Vec<String> = [
                ("extension", &report.cond_extension),
                ("fusion", &report.cond_fusion),
                ("centralizer", &report.cond_centralizer),
            ]
            .iter()
            .filter(|(_, c)| c.is_fail())
            .map(|(k, c)| format!("{k}: {}", c.detail().unwrap_or("")))
            .collect();
            format!("failed {}", failed.join("; "))
        }
        VerdictValue::Undecided => String::from(GUARD_REASON),
    };
    let mut oracle = None;
    if options.cross_check {
        let a = match aut_g.take() {
            Some(a) => Some(a),
            None => aut_realization(g).ok(),
        };
        if let Some(a) = a {
            match oracle_bijection(h, &i, g, &a, limits) {
                Ok(o) => {
                    let agrees = match value {
                        VerdictValue::Localization => o.bijection,
                        VerdictValue::NotLocalization => !o.bijection,
                        VerdictValue::Undecided => true,
                    };
                    if !agrees {
                        return Err(LocalizationError::InvariantBreach(format!(
                            "{} ↪ {}: criterion says {value}, oracle bijection = {}",
                            h.name(),
                            g.name(),
                            o.bijection
                        )));
                    }
                    if value != VerdictValue::Undecided {
                        reason.push_str(" (criterion+oracle agree)");
                    }
                    oracle = Some(o);
                }
                Err(e) if e.is_guard() => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Verdict {
        value,
        pair: (h.name().into(), g.name().into()),
        route: report.route,
        reason,
        report: Some(report),
        oracle,
        largest_maximal: None,
    })
}
