//! Permutation representations on cosets, and the sufficient test for
//! `H ↪ A_n` built from a largest maximal subgroup of index `n`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::atlas::GroupRecord;
use crate::chain::StabilizerChain;
use crate::error::EnumerationError;
use crate::fp::{coset_enumerate, low_index_subgroups, CosetTable, Word, DEFAULT_MAX_COSETS};
use crate::localization::{Condition, Route, Verdict, VerdictValue};
use crate::search::{conjugating_element, is_primitive};

/// Smallest degree for which `Aut(A_n) = S_n`.
pub const MIN_DEGREE: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetEmbedding {
    pub source: String,
    pub stabilizer_words: Vec<Word>,
    pub degree: usize,
    pub images: Vec<crate::perm::Permutation>,
    pub evenness: bool,
    pub faithful: bool,
    pub transitive: bool,
    pub primitive: bool,
    pub order_maximal: Condition,
    pub unique_index_class: Condition,
    pub table: CosetTable,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("{0} has no presentation")]
    NoPresentation(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("degree {0} is below {MIN_DEGREE}")]
    DegreeTooSmall(usize),
    #[error("coset action of {0} is not faithful")]
    NotFaithful(String),
}

/// The action of `H` on the cosets of `⟨stabilizer_words⟩`.
pub fn coset_embedding(h: &GroupRecord, stabilizer_words: &[Word], max_cosets: Option<usize>) -> Result<CosetEmbedding, EmbedError> {
    let p = h
        .presentation()
        .ok_or_else(|| EmbedError::NoPresentation(h.name().into()))?;
    let table = coset_enumerate(p, stabilizer_words, max_cosets.unwrap_or(DEFAULT_MAX_COSETS))?;
    let degree = table.index();
    let images: Vec<_> = table.action().to_vec();
    let chain = StabilizerChain::new(degree, &images).expect("coset action has matching degrees");
    Ok(CosetEmbedding {
        source: h.name().into(),
        stabilizer_words: stabilizer_words.to_vec(),
        degree,
        evenness: images.iter().all(|g| g.is_even()),
        faithful: chain.order() == h.order().value,
        transitive: chain.is_transitive(),
        primitive: is_primitive(degree, &images),
        images,
        order_maximal: Condition::Undecided(String::from("not examined")),
        unique_index_class: Condition::Undecided(String::from("not examined")),
        table,
    })
}

/// Fills both conditions: no proper subgroup of index below `n`, and a
/// single class of index `n` equal to the class of `K`.
pub fn check_largest_maximal(h: &GroupRecord, stabilizer_words: &[Word], max_cosets: Option<usize>) -> Result<CosetEmbedding, EmbedError> {
    let mut e = coset_embedding(h, stabilizer_words, max_cosets)?;
    let n = e.degree;
    if n < MIN_DEGREE {
        return Err(EmbedError::DegreeTooSmall(n));
    }
    if !e.faithful {
        return Err(EmbedError::NotFaithful(h.name().into()));
    }
    let p = h.presentation().expect("checked above");
    let classes = match low_index_subgroups(p, n) {
        Ok(c) => c,
        Err(err) => {
            let why = format!("low-index scan refused: {err}");
            e.order_maximal = Condition::Undecided(why.clone());
            e.unique_index_class = Condition::Undecided(why);
            return Ok(e);
        }
    };
    e.order_maximal = match classes.iter().find(|t| t.index() > 1 && t.index() < n) {
        Some(t) => {
            let words: Vec<String> = t.stabilizer_words().iter().map(|w| format!("{w}")).collect();
            Condition::Fail(format!("subgroup of index {} generated by [{}]", t.index(), words.join(", ")))
        }
        None => Condition::Pass,
    };
    let at_n: Vec<&CosetTable> = classes.iter().filter(|t| t.index() == n).collect();
    e.unique_index_class = match at_n.as_slice() {
        [t] if conjugating_element(t.action(), &e.images).is_some() => Condition::Pass,
        [_] => Condition::Fail(String::from("the index class does not contain K")),
        [] => Condition::Fail(String::from("no subgroup of index n found")),
        many => Condition::Fail(format!("{} classes of index {n}", many.len())),
    };
    Ok(e)
}

/// Localization if both conditions pass; Undecided otherwise, since the
/// test is only sufficient.
pub fn verify_largest_maximal_edge(
    h: &GroupRecord,
    stabilizer_words: &[Word],
    g_name: &str,
    max_cosets: Option<usize>,
) -> Result<Verdict, EmbedError> {
    let e = check_largest_maximal(h, stabilizer_words, max_cosets)?;
    let (value, reason) = match (&e.order_maximal, &e.unique_index_class) {
        (Condition::Pass, Condition::Pass) if e.evenness && e.primitive => {
            (VerdictValue::Localization, format!("largest maximal subgroup of index {}", e.degree))
        }
        (Condition::Pass, Condition::Pass) => (
            VerdictValue::Undecided,
            format!("coset action even={} primitive={}", e.evenness, e.primitive),
        ),
        (a, b) => {
            let first = [("order_maximal", a), ("unique_index_class", b)]
                .into_iter()
                .find(|(_, c)| !c.is_pass())
                .map(|(k, c)| format!("{k}: {c}"))
                .unwrap_or_default();
            (VerdictValue::Undecided, first)
        }
    };
    Ok(Verdict {
        value,
        pair: (h.name().into(), g_name.into()),
        route: Route::LargestMaximal,
        reason,
        report: None,
        oracle: None,
        largest_maximal: Some(e),
    })
}

/// Stabilizer words of a named subgroup of `h` with index exactly `n`.
pub fn subgroup_of_index(h: &GroupRecord, n: usize, max_cosets: Option<usize>) -> Option<Vec<Word>> {
    let p = h.presentation()?;
    let cap = max_cosets.unwrap_or(DEFAULT_MAX_COSETS).min(n.saturating_mul(4).max(64));
    h.subgroups().iter().find_map(|s| {
        let t = coset_enumerate(p, &s.words, cap).ok()?;
        (t.index() == n).then(|| s.words.clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::record;

    fn named(h: &GroupRecord, label: &str) -> Vec<Word> {
        h.subgroup(label).expect("named subgroup").words.clone()
    }

    #[test]
    fn a5_natural_action_is_rejected_below_seven() {
        let h = record("A5");
        let w = named(&h, "point");
        let e = coset_embedding(&h, &w, None).unwrap();
        assert_eq!(e.degree, 5);
        assert!(e.evenness && e.faithful && e.transitive && e.primitive);
        assert_eq!(check_largest_maximal(&h, &w, None), Err(EmbedError::DegreeTooSmall(5)));
    }

    #[test]
    fn l2_13_on_projective_line() {
        let h = record("L2_13");
        let e = check_largest_maximal(&h, &named(&h, "borel"), None).unwrap();
        assert_eq!(e.degree, 14);
        assert!(e.evenness && e.faithful && e.primitive);
        assert_eq!(e.order_maximal, Condition::Pass);
        assert_eq!(e.unique_index_class, Condition::Pass);
        let v = verify_largest_maximal_edge(&h, &named(&h, "borel"), "A14", None).unwrap();
        assert_eq!(v.value, VerdictValue::Localization);
    }

    #[test]
    fn m11_on_eleven_points() {
        let h = record("M11");
        let e = check_largest_maximal(&h, &named(&h, "point"), None).unwrap();
        assert_eq!(e.degree, 11);
        assert!(e.order_maximal.is_pass() && e.unique_index_class.is_pass());
    }

    #[test]
    fn l2_7_has_an_index_seven_witness() {
        let h = record("L2_7");
        let e = check_largest_maximal(&h, &named(&h, "borel"), None).unwrap();
        assert_eq!(e.degree, 8);
        assert!(e.order_maximal.is_fail());
        assert!(e.order_maximal.detail().unwrap().contains("index 7"));
        let v = verify_largest_maximal_edge(&h, &named(&h, "borel"), "A8", None).unwrap();
        assert_eq!(v.value, VerdictValue::Undecided);
    }

    #[test]
    fn l2_8_on_nine_points() {
        let h = record("L2_8");
        let v = verify_largest_maximal_edge(&h, &named(&h, "borel"), "A9", None).unwrap();
        assert_eq!(v.value, VerdictValue::Localization);
        assert_eq!(subgroup_of_index(&h, 9, None), Some(named(&h, "borel")));
        assert_eq!(subgroup_of_index(&h, 10, None), None);
    }
}
