use thiserror::Error;

/// Errors surfaced by the library. Schema problems (bad input files, malformed
/// cycle strings, invalid lengths) are distinguished from resource caps so the
/// CLI can map them to different exit codes.
#[derive(Debug, Error)]
pub enum IetError {
    #[error("radicand {0} is a perfect square; its square root has no irrational part")]
    SquareRadicand(u64),
    #[error("radicands {0} and {1} share the squarefree core {2}; their square roots are rationally dependent")]
    DependentRadicands(u64, u64, u64),
    #[error("radicand must be >= 2, got {0}")]
    RadicandTooSmall(u64),
    #[error("basis must have at least one irrational")]
    EmptyBasis,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("interval lengths must be strictly positive")]
    ZeroLength,
    #[error("interval lengths must sum to exactly 1")]
    LengthsSumNotOne,
    #[error("length list and permutation degree differ: {0} vs {1}")]
    LengthCountMismatch(usize, usize),
    #[error("map does not have all translation amounts rational")]
    NotDeltaRational,
    #[error("iterated composition exceeded the order cap {0}")]
    OrderCapExceeded(u64),
    #[error("group closure exceeded the element cap {cap}")]
    ClosureCapExceeded { cap: usize },
    #[error("quotient has more than {0} cosets")]
    QuotientTooLarge(usize),
    #[error("quotient is not abelian")]
    QuotientNotAbelian,
    #[error("cannot parse permutation `{0}`: {1}")]
    BadPermutation(String, String),
    #[error("permutation degree {0} does not match expected degree {1}")]
    DegreeMismatch(usize, usize),
    #[error("map is not a local translation by multiples of 1/{q} over x={x}")]
    NotKernelElement { q: u32, x: String },
    #[error("word fails the translation-number cross-check at x={0}")]
    MorphismCrossCheck(String),
    #[error("operation precondition violated: {0}")]
    Precondition(String),
    #[error("rotation letters accumulate a rational part {0} that is not a multiple of 1/q")]
    RationalDrift(String),
    #[error("rotation generator matrix is singular; amounts are rationally dependent")]
    DependentRotations,
    #[error("rotation amount must have an irrational part")]
    RationalRotationGenerator,
    #[error("no multiple of alpha_1 below the cap lands in the probe window for residue {0}")]
    ProbeSearchExhausted(u32),
    #[error("tower level must be between 1 and 6, got {0}")]
    TowerRange(u32),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("q must be >= 1, got {0}")]
    BadModulus(u32),
    #[error("values belong to different irrational bases")]
    BasisMismatch,
    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, IetError>;
