use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("reference to undeclared class `{0}`")]
    UndeclaredClass(String),

    #[error("subclass cycle through class `{0}`")]
    SubclassCycle(String),

    #[error("class `{0}` declared disjoint with itself")]
    SelfDisjoint(String),

    #[error("input ontology is incoherent: `{class}` is subsumed by disjoint classes `{first}` and `{second}`")]
    IncoherentInput {
        class: String,
        first: String,
        second: String,
    },

    #[error("class `{0}` is declared in both ontologies")]
    DuplicateClass(String),

    #[error("mapping endpoint `{0}` does not exist in its ontology")]
    DanglingMapping(String),

    #[error("duplicate mapping {from} {relation} {to}")]
    DuplicateMapping {
        from: String,
        to: String,
        relation: &'static str,
    },

    #[error("confidence {0} outside [0, 1]")]
    ConfidenceOutOfRange(f64),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("class `{0}` is not part of the core fragments")]
    NotCoreClass(String),

    #[error("conflict enumeration for `{class}` exceeded the cap of {cap} candidates")]
    EnumerationCap { class: String, cap: usize },

    #[error("cannot select a mapping from an empty cluster")]
    EmptyCluster,

    #[error("hitting-set oracle limited to {cap} distinct mappings, got {found}")]
    OracleCap { cap: usize, found: usize },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid generator parameters: {0}")]
    Generator(String),
}
