use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),

    #[error("unknown element identifier `{0}`")]
    UnknownElement(String),

    #[error("cover relations contain a cycle through `{0}`")]
    CycleDetected(String),

    #[error("poset is not bounded: {0}")]
    NotBounded(String),

    #[error("cover `{0}` < `{1}` is implied by transitivity of other covers")]
    RedundantCover(String, String),

    #[error("`{0}` is not a maximal chain from the bottom element to its top")]
    InvalidRoot(String),

    #[error("no label for rooted cover relation {0}")]
    MissingLabel(String),

    #[error("enumeration budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },

    #[error("two maximal chains share the label sequence {0} and tie-breaking is disabled")]
    AmbiguousOrder(String),

    #[error("invalid maximal chain order: {0}")]
    InvalidOrder(String),

    #[error("invalid first atom set: {0}")]
    InvalidFirstAtomSet(String),

    #[error("first atom set is not a recursive first atom set: {0}")]
    NotAnRfas(String),

    #[error("no linear extension of the chain order satisfies the labeling-compatibility condition")]
    NoLcExtension,

    #[error("labeling is not a TCL-labeling: {0}")]
    NotTcl(String),

    #[error("relabeling along the lexicographic order is not a TCL-labeling: {0}")]
    RelabelNotTcl(String),

    #[error("interval ({0}, {1}) is empty")]
    EmptyInterval(String, String),

    #[error("facet order is not a shelling: {0}")]
    NotAShelling(String),

    #[error("interval below `{0}` has several maximal chains; a root must be supplied")]
    AmbiguousRoot(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("unknown corpus example `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
