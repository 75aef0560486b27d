use alloc::string::String;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParsePermErrorKind {
    Empty,
    ExpectedOpenParen,
    UnclosedCycle,
    UnexpectedChar,
    PointOutOfRange,
    RepeatedPoint,
    DegreeTooLarge,
}

/// Cycle-notation parse failure at a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cycle notation: {kind:?} at byte {position}")]
pub struct ParsePermError {
    pub position: usize,
    pub kind: ParsePermErrorKind,
}

impl ParsePermError {
    pub(crate) fn new(position: usize, kind: ParsePermErrorKind) -> Self {
        ParsePermError { position, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("image table is not a bijection")]
    NotABijection,
    #[error("degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("letter {letter:?} at position {position} is not a generator letter")]
    BadLetter { letter: String, position: usize },
    #[error("generator index {index} exceeds the {n_generators} generators")]
    GeneratorOutOfRange { index: usize, n_generators: usize },
    #[error("expected {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Coset enumeration or low-index failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    /// The working table exceeded its bound; the index is undecided.
    #[error("coset table overflow: more than {max_cosets} cosets needed")]
    Overflow { max_cosets: usize },
    #[error("low-index bound {requested} exceeds the guard {guard}")]
    GuardExceeded { requested: usize, guard: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A desk-scale guard that refused to run a computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("guard `{guard}` exceeded: {detail}")]
pub struct GuardExceeded {
    pub guard: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("generator {index} does not lie in the ambient group")]
    NotInGroup { index: usize },
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("{0} has no permutation generators and no usable metadata")]
    NoGenerators(String),
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("no realization of Aut({0}) is available: {1}")]
    NoRealization(String, String),
}
