use thiserror::Error;

/// Errors surfaced by the construction and solving pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A geometric configuration the exact predicates refuse to resolve
    /// (touching endpoints, collinear overlap, ray through a vertex, ...).
    /// The caller is expected to perturb and retry.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram parse error: {0}")]
    Parse(String),

    #[error("diagram has {found} crossings but {given} resolutions were given")]
    ResolutionMismatch { found: usize, given: usize },

    #[error("braid closure is not a knot (strand permutation has {cycles} cycles)")]
    NotAKnot { cycles: usize },

    #[error("invalid braid word: {0}")]
    InvalidBraid(String),

    #[error("perturbation schedule exhausted while placing bridge vertices")]
    PerturbationExhausted,

    #[error("constraint kernel has free rank {0}, expected 1")]
    UnexpectedFreeRank(usize),

    #[error("torsion subgroup has even order {0}; knot determinants are odd")]
    EvenTorsion(String),

    #[error("torsion group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: String, cap: u64 },

    #[error("lift is not in the constraint set: row {row} evaluates to non-integer {value}")]
    LiftNotInSolutionSet { row: usize, value: String },

    #[error("quadratic model violated: q({coords:?}) = {got}, expected {expected}")]
    QuadraticModelViolation {
        coords: Vec<u64>,
        got: String,
        expected: String,
    },

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("fuzz word would exceed the length cap {0}")]
    WordCapExceeded(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
