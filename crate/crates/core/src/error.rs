use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("semiring `{0}` has neither an element enumeration nor a sampler")]
    SamplerMissing(String),
    #[error("chain is not ascending at element {index}")]
    NotAscending { index: usize },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("semiring mismatch: `{left}` vs `{right}`")]
    SpecMismatch { left: String, right: String },
    #[error("column count mismatch in cotuple: {expected} vs {found}")]
    ColsMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrix is not a base map: {0}")]
    NotABaseMap(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("arity mismatch: exit arity {exits} vs entry arity {entries}")]
    ArityMismatch { exits: usize, entries: usize },
    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("tree variable x{var} out of range (exit arity {arity})")]
    VariableOutOfRange { var: usize, arity: usize },
    #[error("enumeration exceeded the cap of {cap} results")]
    ResultTooLarge { cap: usize },
    #[error("operation requires the boolean semiring, found `{0}`")]
    NotBoolean(String),
    #[error("theory generation exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("star over non-idempotent semiring `{0}` does not converge")]
    NonIdempotentStar(String),
    #[error("too many states for state-set functions: {0} (max {max})", max = crate::theory::MAX_STATES)]
    TooManyStates(usize),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
