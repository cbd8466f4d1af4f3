use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("type error: {0}")]
    Type(String),

    #[error("arena mismatch: {0}")]
    ArenaMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("numeral {numeral} out of window {window}")]
    NumeralOutOfWindow { numeral: u32, window: u32 },

    #[error("point {point} out of window {window}")]
    PointOutOfWindow { point: u32, window: u32 },

    #[error("interaction budget of {0} steps exhausted during composition")]
    InteractionBudget(usize),

    #[error("strategy budget of {0} view entries exhausted")]
    StrategyBudget(usize),

    #[error("ill-formed strategy: {0}")]
    IllFormedStrategy(String),

    #[error("ill-formed strategy file: {0}")]
    Serial(String),

    #[error("norm failed to decrease at a sub-extraction ({child} >= {parent}); model invariant breached")]
    NormDescent { child: usize, parent: usize },

    #[error("no total strategy exists at this type: {0}")]
    NoTotalStrategy(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
