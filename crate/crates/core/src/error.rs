use thiserror::Error;

/// Reasons a `.circ` document can be rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("reference `{0}` is not defined at this point")]
    UndefinedReference(String),
    #[error("malformed reference `{0}`")]
    BadReference(String),
    #[error("gate `{0}` is defined twice")]
    DuplicateGate(String),
    #[error("gate id `{got}` must be greater than `{previous}`")]
    GateOrder { previous: String, got: String },
    #[error("operator {op} takes {expected} operand(s), got {got}")]
    Arity {
        op: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown operator `{0}`")]
    UnknownOp(String),
    #[error("output line {got} out of order, expected {expected}")]
    OutputOrder { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Enumeration budgets that were exceeded. These are hard errors, never a
/// silent truncation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapacityError {
    #[error("exhaustive enumeration over {inputs} inputs exceeds the cap of {cap}")]
    Enumeration { inputs: usize, cap: usize },
    #[error("MCSP budget exhausted: minimum size is at least {lower_bound}{}", .upper_bound.map(|u| format!(" and at most {u}")).unwrap_or_default())]
    McspBudget {
        lower_bound: usize,
        upper_bound: Option<usize>,
    },
    #[error("MCSP supports at most {cap} variables, got {vars}")]
    McspVariables { vars: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("input length {got} does not match arity {expected}")]
    Arity { expected: usize, got: usize },
    #[error("output index {index} out of range 1..={outputs}")]
    OutputIndex { index: usize, outputs: usize },
    #[error("not an Avoid instance: {outputs} outputs must exceed {inputs} inputs")]
    NotAvoidInstance { inputs: usize, outputs: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
