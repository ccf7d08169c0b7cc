use alloc::boxed::Box;
use alloc::string::String;

use crate::hahn::HahnSeries;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed group element: {0}")]
    MalformedElement(String),
    #[error("invalid group description: {0}")]
    InvalidGroup(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("convex subgroup H{0} is not proper")]
    NotProper(usize),
    #[error("the archimedean component of 0 is undefined")]
    UndefinedComponent,
    #[error("segment is empty")]
    EmptySegment,
    #[error("segment is not contained in the positive cone: {0}")]
    NotPositive(String),
    #[error("unsupported cut shape: {0}")]
    UnsupportedCut(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("characteristic mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("element does not lie in the base field: {0}")]
    NotInBaseField(String),
    #[error("right-hand side must have negative value, got {0}")]
    NonNegativeRhs(String),
    #[error("not immediate within precision: {0}")]
    NotImmediate(String),
    #[error("no defect: root in base field ({}): {root}", if *.exact { "exact" } else { "henselian limit" })]
    NoDefect { root: Box<HahnSeries>, exact: bool },
    #[error("insufficient approximation steps: need at least {needed}, have {have}")]
    InsufficientSteps { needed: usize, have: usize },
    #[error("valuation unresolved: {0}")]
    ValuationUnresolved(String),
    #[error("invalid characteristic data: {0}")]
    InvalidCharacteristicData(String),
    #[error("distance bound violated: {0}")]
    BoundViolation(String),
    #[error("incoherent verdicts: {0}")]
    Incoherent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
