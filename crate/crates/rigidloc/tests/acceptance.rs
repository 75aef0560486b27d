//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rigidloc::bundled_atlas;
use rigidloc::core::atlas::{Atlas, GroupRecord};
use rigidloc::core::aut::{aut_order, aut_realization, AutRep};
use rigidloc::core::embed::{check_largest_maximal, verify_largest_maximal_edge};
use rigidloc::core::fp::{coset_enumerate, Word};
use rigidloc::core::localization::{
    check_criterion, is_localization, oracle_bijection, Condition, Options, Route, VerdictValue, GUARD_REASON,
};
use rigidloc::core::rigid::EdgeFilter;
use rigidloc::core::search::{self, Embedding, Limits, MonomorphismSet};
use rigidloc::core::{Permutation, StabilizerChain};

const LIMIT_A5_A6: Duration = Duration::from_secs(10);
const LIMIT_A6_A7: Duration = Duration::from_secs(60);
const LIMIT_A7_A8: Duration = Duration::from_secs(600);
const LIMIT_DEFAULT: Duration = Duration::from_secs(120);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(600);
const CASES: u32 = 100;
const TC_CAP: usize = 1 << 12;

type Outcome = Result<String, String>;

fn atlas() -> &'static Atlas {
    static ATLAS: OnceLock<Atlas> = OnceLock::new();
    ATLAS.get_or_init(|| bundled_atlas().expect("bundled atlas loads"))
}

fn rec(name: &str) -> &'static GroupRecord {
    atlas().get(name).unwrap_or_else(|| panic!("{name} not in the bundled atlas"))
}

fn words(h: &GroupRecord, label: &str) -> Vec<Word> {
    h.subgroup(label).unwrap_or_else(|| panic!("{} has no `{label}`", h.name())).words.clone()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn a5_in_a6() -> Outcome {
    let (h, g) = (rec("A5"), rec("A6"));
    let chain = g.chain().unwrap();
    let aut = aut_realization(g).map_err(|e| e.to_string())?;
    let monos = search::monomorphisms(h, chain).map_err(|e| e.to_string())?;
    ensure(monos.count() == 1440, || format!("{} monomorphisms, expected 1440", monos.count()))?;
    let i = monos.least().ok_or("no embedding")?;
    let report = check_criterion(h, &i, g, &aut).map_err(|e| e.to_string())?;
    ensure(report.route == Route::TheoremMain, || format!("route {}", report.route.as_str()))?;
    for (name, c) in [
        ("extension", &report.cond_extension),
        ("fusion", &report.cond_fusion),
        ("centralizer", &report.cond_centralizer),
    ] {
        ensure(c.is_pass(), || format!("{name}: {c}"))?;
    }
    ensure(report.value() == VerdictValue::Localization, || "criterion verdict".into())?;
    let ambient = aut.rank_action_generators();
    let (classes, _) = search::subgroup_classes(&monos, chain, Some(&ambient)).map_err(|e| e.to_string())?;
    ensure(classes.classes.len() == 2 && classes.n_fused == 1, || {
        format!("{} G-classes fusing to {}", classes.classes.len(), classes.n_fused)
    })?;
    let o = oracle_bijection(h, &i, g, &aut, &Limits::default()).map_err(|e| e.to_string())?;
    ensure(o.bijection && o.monomorphisms == 1440 && o.aut_order == 1440, || format!("{o:?}"))?;
    Ok(format!(
        "criterion and oracle agree, {} monos = |Aut A6| {}, 2 classes fuse to 1, C = 1",
        o.monomorphisms, o.aut_order
    ))
}

fn a6_in_a7() -> Outcome {
    let v = is_localization(atlas(), "A6", "A7", &Options::default()).map_err(|e| e.to_string())?;
    ensure(v.value == VerdictValue::NotLocalization, || format!("verdict {}", v.value.as_str()))?;
    let r = v.report.as_ref().ok_or("no criterion report")?;
    let monos = r.facts.iter().find_map(|f| f.strip_prefix("monomorphisms=")).ok_or("no mono count")?;
    let aut = r.facts.iter().find_map(|f| f.strip_prefix("aut_order_G=")).ok_or("no Aut order")?;
    ensure(monos == "10080" && aut == "5040", || format!("{monos} vs {aut}"))?;
    ensure(r.cond_extension.is_fail(), || format!("extension {}", r.cond_extension))?;
    Ok(format!("NotLocalization, witness {monos} != {aut}"))
}

fn a7_in_a8() -> Outcome {
    let opts = Options {
        cross_check: true,
        ..Options::default()
    };
    let v = is_localization(atlas(), "A7", "A8", &opts).map_err(|e| e.to_string())?;
    ensure(v.value == VerdictValue::Localization, || format!("verdict {}: {}", v.value.as_str(), v.reason))?;
    ensure(v.route == Route::CorollaryMax, || format!("route {}", v.route.as_str()))?;
    let r = v.report.as_ref().ok_or("no criterion report")?;
    ensure(r.facts.iter().any(|f| f == "maximal=true"), || "maximality not recorded".into())?;
    ensure(r.cond_fusion.is_pass() && r.cond_centralizer.is_pass(), || {
        format!("fusion {}, class count {}", r.cond_fusion, r.cond_centralizer)
    })?;
    let o = v.oracle.as_ref().ok_or("no cross-check")?;
    ensure(o.bijection, || format!("{o:?}"))?;
    Ok(format!(
        "Localization via maximal route, {} classes, oracle {} = {}",
        r.class_count_observed.unwrap_or(0),
        o.monomorphisms,
        o.aut_order
    ))
}

fn l2_8_in_a9() -> Outcome {
    let (h, g) = (rec("L2_8"), rec("A9"));
    let lm = verify_largest_maximal_edge(h, &words(h, "borel"), "A9", None).map_err(|e| e.to_string())?;
    ensure(lm.value == VerdictValue::Localization, || format!("largest maximal: {}", lm.reason))?;
    let e = lm.largest_maximal.as_ref().ok_or("no coset embedding")?;
    let i = Embedding::certify(h, g.chain().unwrap(), e.images.clone()).map_err(|e| e.to_string())?;
    let aut = aut_realization(g).map_err(|e| e.to_string())?;
    let r = check_criterion(h, &i, g, &aut).map_err(|e| e.to_string())?;
    ensure(r.value() == VerdictValue::Localization, || {
        format!("criterion: {} {} {}", r.cond_extension, r.cond_fusion, r.cond_centralizer)
    })?;
    Ok(format!("largest maximal (index {}) and criterion inside A9 agree", e.degree))
}

fn l2_7_witness() -> Outcome {
    let h = rec("L2_7");
    let e = check_largest_maximal(h, &words(h, "borel"), None).map_err(|e| e.to_string())?;
    ensure(e.degree == 8 && e.faithful, || format!("degree {}", e.degree))?;
    let Condition::Fail(detail) = &e.order_maximal else {
        return Err(format!("order condition {}", e.order_maximal));
    };
    let list = detail
        .split_once('[')
        .and_then(|(_, r)| r.strip_suffix(']'))
        .ok_or_else(|| format!("unparsed witness `{detail}`"))?;
    let witness: Vec<Word> = list.split(", ").map(Word::parse).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let t = coset_enumerate(h.presentation().unwrap(), &witness, TC_CAP).map_err(|e| e.to_string())?;
    ensure(t.index() == 7, || format!("witness has index {}", t.index()))?;
    Ok(format!("degree 8 embedding, order condition fails: {detail}"))
}

fn largest_maximal_pairs() -> Outcome {
    let mut seen = Vec::new();
    for (name, label, target, n) in [("L2_13", "borel", "A14", 14), ("M11", "point", "A11", 11)] {
        let h = rec(name);
        let e = check_largest_maximal(h, &words(h, label), None).map_err(|e| e.to_string())?;
        ensure(e.degree == n && e.evenness && e.faithful, || format!("{name}: degree {}", e.degree))?;
        ensure(e.order_maximal.is_pass() && e.unique_index_class.is_pass(), || {
            format!("{name}: {} / {}", e.order_maximal, e.unique_index_class)
        })?;
        let v = verify_largest_maximal_edge(h, &words(h, label), target, None).map_err(|e| e.to_string())?;
        ensure(v.value == VerdictValue::Localization, || format!("{name}: {}", v.reason))?;
        seen.push(format!("{name} -> {target}"));
    }
    Ok(format!("{} pass both conditions", seen.join(", ")))
}

fn todd_coxeter() -> Outcome {
    let h = rec("A5");
    let p = h.presentation().unwrap();
    let point = words(h, "point");
    let mut runs = Vec::new();
    for _ in 0..3 {
        let trivial = coset_enumerate(p, &[], TC_CAP).map_err(|e| e.to_string())?;
        let stab = coset_enumerate(p, &point, TC_CAP).map_err(|e| e.to_string())?;
        runs.push((trivial, stab));
    }
    let (t, s) = &runs[0];
    ensure(t.index() == 60 && s.index() == 5, || format!("{} and {} cosets", t.index(), s.index()))?;
    ensure(t.index() as u128 == h.chain().unwrap().order(), || "index differs from chain order".into())?;
    ensure(runs.iter().all(|r| r == &runs[0]), || "tables differ between runs".into())?;
    Ok("60 and 5 cosets, identical tables over 3 runs".into())
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn closure_size(n: usize, gens: &[Permutation]) -> usize {
    let id = Permutation::identity(n);
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([id.images().to_vec()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for s in gens {
            let y = x.mul(s);
            if seen.insert(y.images().to_vec()) {
                stack.push(y);
            }
        }
    }
    seen.len()
}

struct Pair {
    h: &'static GroupRecord,
    g: &'static GroupRecord,
    aut: AutRep,
    monos: MonomorphismSet,
}

fn pairs() -> &'static [Pair] {
    static PAIRS: OnceLock<Vec<Pair>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        [("A5", "A6"), ("A5", "A7"), ("A6", "A7"), ("L2_7", "A8")]
            .into_iter()
            .map(|(h, g)| {
                let (h, g) = (rec(h), rec(g));
                Pair {
                    h,
                    g,
                    aut: aut_realization(g).unwrap(),
                    monos: search::monomorphisms(h, g.chain().unwrap()).unwrap(),
                }
            })
            .collect()
    })
}

fn runner() -> TestRunner {
    let config = Config {
        failure_persistence: None,
        ..Config::with_cases(CASES)
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    runner().run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(name.to_string())
}

fn properties() -> Outcome {
    let mut passed = vec![property(
        "order = product of orbit lengths",
        (1usize..8).prop_flat_map(|n| (Just(n), prop::collection::vec(perm(n), 0..4))),
        |(n, gens)| {
            let c = StabilizerChain::new(n, &gens).unwrap();
            let product: u128 = c.orbit_lengths().iter().map(|&l| l as u128).product();
            prop_assert_eq!(c.order(), product);
            prop_assert_eq!(c.order(), closure_size(n, &gens) as u128);
            Ok(())
        },
    )?];

    passed.push(property("monomorphism count identity", (0usize..4, any::<u64>()), |(idx, seed)| {
        let p = &pairs()[idx];
        let g = p.g.chain().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = StabilizerChain::symmetric(g.degree()).random_element(&mut rng);
        let conj: Vec<Permutation> = g.generators().iter().map(|x| x.conjugate_by(&t)).collect();
        let g2 = StabilizerChain::new(g.degree(), &conj).unwrap();
        let monos = search::monomorphisms(p.h, &g2).unwrap();
        let (classes, _) = search::subgroup_classes(&monos, &g2, None).unwrap();
        let aut_h = aut_order(p.h).unwrap().value;
        let total: u128 = classes.classes.iter().map(|c| g2.order() / c.normalizer_order * aut_h).sum();
        prop_assert_eq!(monos.count(), total);
        prop_assert_eq!(monos.count(), p.monos.count());
        Ok(())
    })?);

    passed.push(property(
        "injective restriction iff trivial centralizer, count formula exact",
        (0usize..4, any::<u64>()),
        |(idx, pick)| {
            let p = &pairs()[idx];
            let i = p.monos.iter().nth((pick % p.monos.count() as u64) as usize).unwrap();
            let report = check_criterion(p.h, &i, p.g, &p.aut).unwrap();
            let oracle = oracle_bijection(p.h, &i, p.g, &p.aut, &Limits::default()).unwrap();
            let c = search::centralizer(p.aut.realization(), &p.aut.inner_all(i.gen_images())).unwrap();
            prop_assert_eq!(oracle.injective, c.order() == 1);
            prop_assert_eq!(report.value() == VerdictValue::Localization, oracle.bijection);
            if report.value() == VerdictValue::Localization {
                let expected = report.class_count_expected.unwrap().as_integer();
                prop_assert_eq!(expected, report.class_count_observed);
            }
            Ok(())
        },
    )?);

    passed.push(property("conjugation square commutes", (0usize..4, any::<u64>()), |(idx, seed)| {
        let p = &pairs()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = p.aut.realization().random_element(&mut rng);
        let x = p.g.chain().unwrap().random_element(&mut rng);
        let lhs = alpha.inverse().mul(&p.aut.inner(&x)).mul(&alpha);
        prop_assert_eq!(lhs, p.aut.inner(&p.aut.apply(&alpha, &x)));
        Ok(())
    })?);

    Ok(format!("{} properties x {CASES} cases: {}", passed.len(), passed.join("; ")))
}

/// One sampled name per family member named in the classification of the
/// main component; `U3_3` stands for `G2(2)'`.
const MAIN_COMPONENT: &[&str] = &[
    "A5", "A6", "A7", "A8", "A9", "A14", "A100",
    "L2_7", "L2_8", "L2_11", "L2_13", "L2_16", "L2_25", "L2_27", "L2_32",
    "U3_3", "U3_4", "U3_5", "U3_7", "U3_8", "U3_9", "U3_11",
    "G2_3", "G2_5", "G2_11",
    "M11", "M12", "M22", "M23", "M24", "J1", "J2", "J3", "J4", "HS", "McL", "Co1", "Co2", "Co3",
    "He", "Suz", "O'N", "Ly", "Ru", "Fi22", "Fi23", "Fi24'", "HN", "Th", "B",
    "L3_3", "L3_5", "L3_11", "L4_3", "U4_2", "U4_3", "U5_2", "U6_2", "S4_4", "S6_2", "S8_2",
    "D4_2", "2D4_2", "2D5_2", "3D4_2", "D4_3", "G2_4", "E6_4", "F4_2", "T",
];

fn rigid_graph() -> Outcome {
    let g = rigidloc::bundled_graph().map_err(|e| e.to_string())?;
    let comps = g.components(EdgeFilter::All);
    let main = comps.iter().find(|c| c.members.iter().any(|m| m == "A5")).ok_or("A5 absent")?;
    let missing: Vec<&str> = MAIN_COMPONENT.iter().copied().filter(|n| !main.members.iter().any(|m| m == n)).collect();
    ensure(missing.is_empty(), || format!("outside the main component: {missing:?}"))?;
    let monster = g.component_of("M", EdgeFilter::All).ok_or("M absent")?;
    ensure(monster.members == ["M"], || format!("M component {:?}", monster.members))?;
    let path = match g.zigzag_path("A6", "A7", EdgeFilter::MainOnly).map_err(|e| e.to_string())? {
        Some(p) => p,
        None => g.zigzag_path("A6", "A7", EdgeFilter::All).map_err(|e| e.to_string())?.ok_or("no A6-A7 path")?,
    };
    for n in ["T", "Ru", "L2_13", "A14"] {
        ensure(path.contains(n), || format!("{n} not on {}", path.render()))?;
    }
    Ok(format!("{} groups in one component, M isolated, {}", main.members.len(), path.render()))
}

fn scale_honesty() -> Outcome {
    let mut seen = Vec::new();
    for (h, g) in [("He", "Fi24'"), ("A5", "T"), ("M11", "M12")] {
        let v = is_localization(atlas(), h, g, &Options::default()).map_err(|e| e.to_string())?;
        ensure(v.value == VerdictValue::Undecided, || format!("{h} -> {g}: {}", v.value.as_str()))?;
        ensure(v.reason.contains(GUARD_REASON), || format!("{h} -> {g}: reason `{}`", v.reason))?;
        seen.push(format!("{h} -> {g}"));
    }
    Ok(format!("{} Undecided ({GUARD_REASON})", seen.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(u32, Duration, fn() -> Outcome); 10] = [
        (1, LIMIT_A5_A6, a5_in_a6),
        (2, LIMIT_A6_A7, a6_in_a7),
        (3, LIMIT_A7_A8, a7_in_a8),
        (4, LIMIT_DEFAULT, l2_8_in_a9),
        (5, LIMIT_DEFAULT, l2_7_witness),
        (6, LIMIT_DEFAULT, largest_maximal_pairs),
        (7, LIMIT_DEFAULT, todd_coxeter),
        (8, LIMIT_PROPERTIES, properties),
        (9, LIMIT_DEFAULT, rigid_graph),
        (10, LIMIT_DEFAULT, scale_honesty),
    ];
    let start = Instant::now();
    atlas();
    println!("atlas loaded in {:.2} s", start.elapsed().as_secs_f64());
    let mut failed = 0;
    for (k, limit, run) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs())),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {k}: {tag} ({:.2} s) {detail}", elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
