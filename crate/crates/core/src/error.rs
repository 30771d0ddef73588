use thiserror::Error;

use crate::arith::Rat;

/// Every failure the library can report. Each variant maps to a stable
/// machine-readable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sign is not constant under the parameter assumption: {0}")]
    AmbiguousSign(String),
    #[error("rational function has a pole inside the assumed interval: {0}")]
    PoleInInterval(String),
    #[error("interval endpoint {0} is a root")]
    EndpointIsRoot(Rat),
    #[error("variable lists differ: {0}")]
    ArityMismatch(String),
    #[error("value unknown below truncation order {0}")]
    ValueUnknown(Rat),
    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),
    #[error("residue is not in the base field: {0}")]
    ResidueNotInBaseField(String),
    #[error("rewrite step budget exceeded after {0} steps")]
    NonTerminatingGuard(usize),
    #[error("root system level {have} does not exceed the value {need}")]
    LevelInsufficient { have: Rat, need: String },
    #[error("no sign-changing combination found: {0}")]
    NotFoundWithinBudget(String),
    #[error("element lies in the separating ideal: {0}")]
    InSeparatingIdeal(String),
    #[error("point coincides with the blowup center")]
    CenterEqualsPoint,
    #[error("step budget of {0} blowups exceeded")]
    StepBudgetExceeded(usize),
    #[error("not reached within the given charts: {0}")]
    NotReachedWithinSteps(String),
    #[error("invalid dual-graph event: {0}")]
    InvalidEvent(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` at line {line}, column {col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("invalid input: {0}")]
    InvariantViolation(String),
    #[error("golden values differ: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division-by-zero",
            Error::AmbiguousSign(_) => "ambiguous-sign",
            Error::PoleInInterval(_) => "pole-in-interval",
            Error::EndpointIsRoot(_) => "endpoint-is-root",
            Error::ArityMismatch(_) => "arity-mismatch",
            Error::ValueUnknown(_) => "value-unknown",
            Error::TruncationExceeded(_) => "truncation-exceeded",
            Error::ResidueNotInBaseField(_) => "residue-not-in-base-field",
            Error::NonTerminatingGuard(_) => "non-terminating-guard",
            Error::LevelInsufficient { .. } => "level-insufficient",
            Error::NotFoundWithinBudget(_) => "not-found-within-budget",
            Error::InSeparatingIdeal(_) => "f-in-separating-ideal",
            Error::CenterEqualsPoint => "center-equals-point",
            Error::StepBudgetExceeded(_) => "step-budget-exceeded",
            Error::NotReachedWithinSteps(_) => "not-reached-within-steps",
            Error::InvalidEvent(_) => "invalid-event",
            Error::Syntax { .. } => "syntax-error",
            Error::UnknownVariable { .. } => "unknown-variable",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::Mismatch(_) => "mismatch",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
