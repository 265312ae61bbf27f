use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unbound generator `{0}`")]
    UnboundGenerator(String),
    #[error("domain mismatch at `{at}`: expected {expected}, found {found}")]
    DomainMismatch {
        at: String,
        expected: String,
        found: String,
    },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("tensor split does not match codomain: {0}")]
    SplitMismatch(String),
    #[error("factor {index} is not among the {len} factors")]
    KeepNotSubset { index: usize, len: usize },
    #[error("morphism is not deterministic: {0}")]
    NotDeterministic(String),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label collision: {0}")]
    LabelCollision(String),
    #[error("not injective on {0}")]
    NotInjective(String),
    #[error("injection images overlap on {0}")]
    OverlappingImages(String),
    #[error("label {0} is not in the index set")]
    NotInIndex(String),
}
