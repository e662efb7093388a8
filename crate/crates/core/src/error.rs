use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty word has no curling number")]
    EmptyWord,

    #[error("valuation undefined for n = 0")]
    ValuationUndefined,

    #[error("valuation base must be at least 2, got {0}")]
    ValuationBase(u64),

    #[error("word contains a non-positive term at position {position}")]
    NonPositiveTerm { position: usize },

    #[error("level must be at least 1")]
    InvalidLevel,

    #[error("not a level-{expected} prefix: first term is {found:?}")]
    NotLevelPrefix { expected: usize, found: Option<u64> },

    #[error("budget of {budget} terms exhausted while building block {block}")]
    BudgetExhausted { budget: usize, block: usize },

    #[error("closed-form integrality violated for m = {m}, n = {n}")]
    IntegralityViolated { m: usize, n: usize },

    #[error("first-five anchor mismatch: tau never equals {target}")]
    FirstFiveAnchorMismatch { target: u64 },

    #[error("use exact positions for t <= 4 (got t = {0})")]
    TowerTooSmall(usize),

    #[error("unknown sequence name `{0}`")]
    UnknownSequence(String),

    #[error("starting word must be nonempty with terms in {alphabet:?}")]
    InvalidAlphabet { alphabet: Vec<u8> },

    #[error("{0}")]
    InvalidArgument(String),
}
