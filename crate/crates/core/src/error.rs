use thiserror::Error;

/// Failure modes shared across the toolkit.
///
/// Every fallible routine distinguishes bad *inputs* (`Parameter`,
/// `LatticeMismatch`, `Malformed`) from states that contradict a promised
/// invariant (`ModelInconsistency`, `LemmaViolation`).  The latter are hard
/// failures: callers must not swallow them.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the documented domain of the routine.
    #[error("parameter out of domain: {0}")]
    Parameter(String),

    /// Two classes (or a class and a model) live on different lattices.
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    /// An input is structurally degenerate (zero class, singular Gram, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A mathematical precondition of the routine does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The curve data of a model contradicts itself mid-computation.
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    /// An identity that must hold for all valid inputs failed; this signals
    /// a bug, never a user error.
    #[error("invariant violated: {0}")]
    LemmaViolation(String),

    /// A bounded search exhausted its budget without a hit.
    #[error("search exhausted: {0}")]
    NotFound(String),

    /// A certificate or witness failed re-verification.
    #[error("certification failed: {0}")]
    CertificationFailed(String),

    /// Serialized input could not be parsed.
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
