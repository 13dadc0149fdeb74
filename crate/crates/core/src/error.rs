use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word is not in F (must be nonempty and start and end with 0)")]
    NotInF,
    #[error("bad symbol {0:?} (expected '0' or '1')")]
    BadSymbol(char),
    #[error("word is not built from the given word")]
    NotBuiltFrom,
    #[error("stage word length exceeds budget {budget}")]
    BudgetExceeded { budget: u64 },
    #[error("stage {0} is not available in a finite presentation")]
    StageUnavailable(usize),
    #[error("invalid stage: {0}")]
    InvalidStage(String),
    #[error("presentations agree through the examined stage; distance upper bound {upper}")]
    IdenticalPrefixUnresolved { upper: Rational },
    #[error("word is not a member of the neighborhood")]
    NotMember,
    #[error("degenerate presentation: {0}")]
    DegeneratePresentation(String),
    #[error("stage chain is not certified canonical through stage {0}")]
    NonCanonicalPresentation(usize),
    #[error("stage-{stage} word does not match the scheme word")]
    StageMismatch { stage: usize },
    #[error("replacement scheme words have different lengths ({0} vs {1})")]
    SchemeLengthMismatch(usize, usize),
    #[error("constraint O({n}, {r}) violated")]
    ConstraintViolated { n: usize, r: Rational },
    #[error("window of length {0} is too long for the available stages")]
    WindowTooLong(usize),
    #[error("word has no finite density limit")]
    DivergentWord,
    #[error("cumulative spacer length exceeds the unit interval at stage {stage}")]
    SpacerOverflow { stage: usize },
    #[error("base length must lie in (0, 1]")]
    BadBaseLength,
    #[error("level index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("orbit left the mapped domain at step {0}")]
    OrbitEscaped(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
}

impl Error {
    /// Variant name, stable across messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotInF => "NotInF",
            Error::BadSymbol(_) => "BadSymbol",
            Error::NotBuiltFrom => "NotBuiltFrom",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::StageUnavailable(_) => "StageUnavailable",
            Error::InvalidStage(_) => "InvalidStage",
            Error::IdenticalPrefixUnresolved { .. } => "IdenticalPrefixUnresolved",
            Error::NotMember => "NotMember",
            Error::DegeneratePresentation(_) => "DegeneratePresentation",
            Error::NonCanonicalPresentation(_) => "NonCanonicalPresentation",
            Error::StageMismatch { .. } => "StageMismatch",
            Error::SchemeLengthMismatch(..) => "SchemeLengthMismatch",
            Error::ConstraintViolated { .. } => "ConstraintViolated",
            Error::WindowTooLong(_) => "WindowTooLong",
            Error::DivergentWord => "DivergentWord",
            Error::SpacerOverflow { .. } => "SpacerOverflow",
            Error::BadBaseLength => "BadBaseLength",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::OrbitEscaped(_) => "OrbitEscaped",
            Error::Parse { .. } => "Parse",
            Error::PostconditionFailed(_) => "PostconditionFailed",
        }
    }

    /// Errors caused by malformed input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::NotInF | Error::BadSymbol(_) | Error::Parse { .. } | Error::InvalidStage(_))
    }
}
