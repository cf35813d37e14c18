use std::fmt;

/// Errors reported by the library.
///
/// Every variant is either a violated precondition (exit code 1 on the CLI)
/// or an exhausted resource budget (exit code 2); [`Error::is_budget`] tells
/// the two classes apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A fraction was given a zero denominator.
    ZeroDenominator,
    /// Both projective coordinates were zero.
    ZeroPoint,
    /// A matrix is not in SL₂(ℕ₀): an entry is negative or the determinant is not 1.
    NotInSl2N0,
    /// The identity matrix is excluded from this operation.
    IdentityExcluded,
    /// The argument is not a positive rational.
    NotPositiveRational,
    /// Two integers that must be coprime are not.
    NotCoprime,
    /// The root of the tree has no parent.
    RootHasNoParent,
    /// A continued fraction is not in canonical form.
    NonCanonicalContinuedFraction,
    /// A 2×2 matrix is singular where an invertible one is required.
    SingularMatrix,
    /// Text failed to parse; the offset is a byte position into the input.
    Parse { offset: usize, message: String },
    /// A generic violated precondition, with a short description.
    Precondition(String),
    /// Output could not be written; a broken pipe just means the reader
    /// went away.
    Io(std::io::ErrorKind),
    /// An expansion would exceed the configured node budget.
    BudgetExceeded { requested: u128, budget: u64 },
    /// No escape depth exists within the allotted depth budget.
    EscapeNotReached { depth_budget: usize },
    /// The depth budget is too small for the census truncation to be sound.
    InsufficientDepth { required: usize, depth_budget: usize },
}

impl Error {
    /// Budget errors exit with status 2; everything else here is a
    /// precondition error and exits with status 1.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::EscapeNotReached { .. }
                | Error::InsufficientDepth { .. }
        )
    }

    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Error {
        Error::Parse { offset, message: message.into() }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Error {
        Error::Precondition(message.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::ZeroPoint => write!(f, "projective point needs a nonzero coordinate"),
            Error::NotInSl2N0 => write!(f, "not in SL2(N0)"),
            Error::IdentityExcluded => write!(f, "identity excluded"),
            Error::NotPositiveRational => write!(f, "not a positive rational"),
            Error::NotCoprime => write!(f, "not coprime"),
            Error::RootHasNoParent => write!(f, "root has no parent"),
            Error::NonCanonicalContinuedFraction => write!(f, "not a canonical continued fraction"),
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::Parse { offset, message } => write!(f, "parse error at byte {offset}: {message}"),
            Error::Precondition(message) => write!(f, "{message}"),
            Error::Io(kind) => write!(f, "io error: {kind}"),
            Error::BudgetExceeded { requested, budget } => {
                write!(f, "budget exceeded: {requested} nodes requested, budget is {budget}")
            }
            Error::EscapeNotReached { depth_budget } => {
                write!(f, "escape not reached within depth budget {depth_budget}")
            }
            Error::InsufficientDepth { required, depth_budget } => write!(
                f,
                "budget insufficient for soundness: need depth {required}, have {depth_budget}"
            ),
        }
    }
}

impl std::error::Error for Error {}
