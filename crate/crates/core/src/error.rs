use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("relation `{0}` declared twice")]
    DuplicateRelation(String),
    #[error("relation `{0}` is not in the vocabulary")]
    UnknownRelation(String),
    #[error("relation `{relation}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is free but unassigned")]
    UnboundVariable(String),
    #[error("element {element} is outside the domain of size {size}")]
    ElementOutOfRange { element: u64, size: usize },
    #[error("structure is too large: relation `{relation}` would need {positions} positions")]
    StructureTooLarge { relation: String, positions: u128 },
    #[error("domain size must be positive")]
    EmptyDomain,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{positions} fact positions exceed the enumeration cap of {cap}")]
    CapExceeded { positions: usize, cap: usize },
    #[error("formula is not a sentence: free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("sentence uses {used} distinct variables, budget is {budget}")]
    VariableBudget { used: usize, budget: usize },
    #[error("formula is not a sentence")]
    NotASentence,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("accept state `{0}` is not absorbing: {1}")]
    AcceptNotAbsorbing(String, String),
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("transition has {found} entries, machine has {tapes} tapes")]
    TapeCountMismatch { tapes: usize, found: usize },
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("configuration cap of {0} exceeded")]
    ConfigurationCap(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("window cap of {cap} implications exceeded")]
    WindowCap { cap: usize },
    #[error("construction needs k >= {min}, got {k}")]
    BadK { k: usize, min: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Tm(#[from] TmError),
}
