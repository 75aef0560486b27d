//! Small corpus of validated groups shared by unit and integration tests.

#![allow(dead_code)]

use rigidloc_core::atlas::{GroupRecord, NamedSubgroup, RecordSource, Tagged};
use rigidloc_core::fp::Word;
use rigidloc_core::parse_perm;
use std::vec::Vec;

struct Fixture {
    name: &'static str,
    degree: usize,
    order: u128,
    gens: &'static [&'static str],
    rels: &'static [&'static str],
    subs: &'static [(&'static str, &'static [&'static str])],
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "A5",
        degree: 5,
        order: 60,
        gens: &["(1 2)(3 4)", "(1 3 5)"],
        rels: &["aa", "bbb", "ababababab"],
        subs: &[("point", &["a", "babaB"])],
    },
    Fixture {
        name: "A6",
        degree: 6,
        order: 360,
        gens: &["(1 2 3)", "(1 2)(3 4 5 6)"],
        rels: &["aaa", "bbbb", "ababababab", "aBAbaBAb", "aBBabbaBBabb"],
        subs: &[("point", &["BA", "aB"])],
    },
    Fixture {
        name: "A7",
        degree: 7,
        order: 2520,
        gens: &["(1 2 3)", "(3 4 5 6 7)"],
        rels: &["aaa", "bbbbb", "ababababababab", "aBabaBab", "aBBabbaBBabb"],
        subs: &[("point", &["B", "aBA"])],
    },
    Fixture {
        name: "A8",
        degree: 8,
        order: 20160,
        gens: &["(1 2 3)", "(1 2)(3 4 5 6 7 8)"],
        rels: &["aaa", "bbbbbb", "ababababababab", "aBAbaBAb", "aBBabbaBBabb", "aBBBAbbbaBBBAbbb"],
        subs: &[("point", &["BA", "aB"])],
    },
    Fixture {
        name: "A9",
        degree: 9,
        order: 181440,
        gens: &["(1 2 3)", "(3 4 5 6 7 8 9)"],
        rels: &[
            "aaa",
            "bbbbbbb",
            "ababababababababab",
            "aBabaBab",
            "aBBabbaBBabb",
            "aBBBabbbaBBBabbb",
        ],
        subs: &[("point", &["B", "aBA"])],
    },
    Fixture {
        name: "L2_7",
        degree: 8,
        order: 168,
        gens: &["(1 6)(2 3)(4 5)(7 8)", "(1 7 6)(2 8 5)"],
        rels: &["aa", "bbb", "ababababababab", "aBabaBabaBabaBab"],
        subs: &[("borel", &["BA", "baBaBAbAB"])],
    },
    Fixture {
        name: "L2_8",
        degree: 9,
        order: 504,
        gens: &["(1 9)(2 6)(3 8)(5 7)", "(1 8 4)(2 6 3)(5 9 7)"],
        rels: &["aa", "bbb", "ababababababab", "aBaBababaBababaBaBababaBabab"],
        subs: &[("borel", &["BAb", "aBABA"])],
    },
    Fixture {
        name: "L2_13",
        degree: 14,
        order: 1092,
        gens: &["(1 13)(3 12)(4 8)(6 7)(9 11)(10 14)", "(1 2 11)(3 7 4)(5 12 10)(6 8 13)"],
        rels: &["aa", "bbb", "ababababababab", "aBabaBabaBabaBabaBabaBab"],
        subs: &[("borel", &["bAB", "BaBAb"])],
    },
    Fixture {
        name: "M11",
        degree: 11,
        order: 7920,
        gens: &["(2 10)(4 11)(5 7)(8 9)", "(1 4 3 8)(2 5 6 9)"],
        rels: &[
            "aa",
            "bbbb",
            "ababababababababababab",
            "abbabbabbabbabbabb",
            "ababaBababbaBabaBaB",
        ],
        subs: &[("point", &["A", "baBAB", "bbABB"])],
    },
];

pub fn source(name: &str) -> RecordSource {
    let s = FIXTURES.iter().find(|s| s.name == name).expect("fixture name");
    RecordSource {
        name: s.name.into(),
        degree: s.degree,
        generators: s.gens.iter().map(|g| parse_perm(g, s.degree).unwrap()).collect(),
        relators: s.rels.iter().map(|r| Word::parse(r).unwrap()).collect(),
        subgroups: s
            .subs
            .iter()
            .map(|(label, words)| NamedSubgroup {
                label: (*label).into(),
                words: words.iter().map(|w| Word::parse(w).unwrap()).collect(),
            })
            .collect(),
        order: Tagged::derived(s.order),
        out_order: None,
    }
}

pub fn record(name: &str) -> GroupRecord {
    GroupRecord::new(source(name)).expect("fixture validates")
}

/// A record without generators, carrying only asserted metadata.
pub fn stub(name: &str, order: u128, out: u64) -> GroupRecord {
    GroupRecord::new(RecordSource {
        name: name.into(),
        degree: 0,
        generators: Vec::new(),
        relators: Vec::new(),
        subgroups: Vec::new(),
        order: Tagged::asserted(order),
        out_order: Some(Tagged::asserted(out)),
    })
    .expect("stub validates")
}
