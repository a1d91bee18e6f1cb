use thiserror::Error;

/// Errors raised by the analysis operations.
///
/// Witness-carrying variants hold a rendering that uses the automaton's own
/// labels, so they can be shown to a user as-is.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input that cannot denote a value of the expected type: unknown labels,
    /// letters outside an alphabet, bad rationals.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// A documented precondition of the called operation does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The operation needs rows of mass exactly one (and a mass-one initial
    /// distribution), but got a subprobabilistic one.
    #[error("full probability required: {0}")]
    FullProbabilityRequired(String),

    #[error("not a congruence: {0}")]
    NotACongruence(String),

    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    /// The queried word is not a prefix of any path of the tree.
    #[error("word is not in the tree: {0}")]
    NotInTree(String),

    /// One of the two intermediate triples of a stepwise reduction is not a
    /// congruence on the automaton it is applied to.
    #[error("stage {stage} of the stepwise reduction failed: {witness}")]
    StageDecompositionFailed { stage: u8, witness: String },

    /// An internal postcondition failed. This is a bug, never a user error.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
