use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The requested frame does not exist, e.g. a segment on a line through 0.
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("support cone is undefined (spans at least a half-plane)")]
    ConeUndefined,
    #[error("point is not a member of the product")]
    NotAMember,
    #[error("eigenvalue iteration failed to converge")]
    NumericalFailure,
    /// A closed-form center failed the sampled verification.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
