use thiserror::Error;

/// Errors raised by the algebra, entropy, energy, law and explorer layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero is not an element of the multiplicative group of F_{0}")]
    ZeroInMultiplicativeGroup(u64),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid modulus {0}: must be at least 1")]
    InvalidModulus(u64),
    #[error("product group needs at least one factor")]
    EmptyProduct,
    #[error("element {0} is not canonical for this carrier")]
    NonCanonical(String),
    #[error("support is empty")]
    EmptySupport,
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("carriers do not match: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("target and given index sets overlap at {0}")]
    IndexOverlap(usize),
    #[error("ring product used on a group carrier")]
    RingOpOnGroup,
    #[error("conditioning on an event of probability zero")]
    ZeroProbabilityEvent,
    #[error("bipartite graph has no edges")]
    EmptyGraph,
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("combiner word: {0}")]
    BadWord(String),
    #[error("energy routes disagree: formula {formula} vs construction {construction}")]
    EnergyMismatch { formula: f64, construction: f64 },
    #[error("law input does not match signature: {0}")]
    SignatureMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("q = {0} is not a prime >= 3")]
    NonPrimeQ(u64),
    #[error("p = {0} is not a valid prime for this scan")]
    InvalidPrime(u64),
    #[error("support size {size} exceeds the limit {limit}")]
    SupportTooLarge { size: usize, limit: usize },
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
