use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("{what} exceeds the size limit of {limit}")]
    SizeLimit { what: String, limit: usize },

    #[error("element {0} is not a member of the group")]
    NotMember(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("invalid group file: {0}")]
    GroupFile(String),

    /// A conjugation family failed to generate some morphism.
    #[error("family does not generate morphism: {0}")]
    FamilyNotGenerating(String),

    /// An internal consistency check of the realized fusion system failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// All three hypotheses of the transfer theorem held and no witness exists.
    #[error("transfer theorem violated: {0}")]
    TheoremViolation(String),
}

impl Error {
    pub fn is_size_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}
