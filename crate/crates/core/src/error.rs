use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid position {position} in {term}")]
    InvalidPosition { term: String, position: String },
    #[error("symbol {0} is not an AC symbol")]
    NotAc(String),
    #[error("AC symbol {symbol} must be binary, got arity {arity}")]
    AcArity { symbol: String, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("{0} is not a term over the theory signature and constants")]
    NotPure(String),
    #[error("{0} is not in abstracted form")]
    NotAbstracted(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("nonlinear product {0}")]
    Nonlinear(String),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("theory symbol {0} is not supported by the {1} theory")]
    UnsupportedSymbol(String, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("inference budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("rewrite step budget of {0} exceeded while normalizing {1}")]
    RewriteBudget(u64, String),
    #[error("cannot orient {0} = {1}: sides are incomparable")]
    Unorientable(String, String),
    #[error("abstraction constant {0} has no binding")]
    UnboundConstant(String),
}

/// A problem-file error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}
