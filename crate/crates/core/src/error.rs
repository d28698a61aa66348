use crate::connectivity::Conn;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by validation, arithmetic, and enumeration.
///
/// Every arithmetic path is exact; when a value cannot be represented the
/// computation fails with [`Error::Overflow`] instead of wrapping. Budget
/// errors name the budget that would have sufficed.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration has no components")]
    EmptyConfiguration,

    #[error("matrix row {row} has length {len}, expected {expected}")]
    MatrixShape { row: usize, len: usize, expected: usize },

    #[error("k vector has length {len}, expected {expected}")]
    KShape { len: usize, expected: usize },

    #[error("component name list has length {len}, expected {expected}")]
    NamesShape { len: usize, expected: usize },

    #[error("matrix is asymmetric at ({i},{j}): {a} vs {b}")]
    AsymmetricMatrix { i: usize, j: usize, a: i64, b: i64 },

    #[error("negative off-diagonal entry {value} at ({i},{j}); distinct components must meet non-negatively")]
    NegativeOffDiagonal { i: usize, j: usize, value: i64 },

    #[error("parity violation at component {index}: self-intersection {self_int} plus canonical degree {k} is odd")]
    AdjunctionParity { index: usize, self_int: i64, k: i64 },

    #[error("component {index} has negative genus {genus}")]
    NegativeComponentGenus { index: usize, genus: i64 },

    #[error("intersection entry ({i},{j}) listed more than once")]
    DuplicateIntersectionEntry { i: usize, j: usize },

    #[error("intersection entry ({i},{j}) is diagonal; self-intersections belong in the component records")]
    DiagonalIntersectionEntry { i: usize, j: usize },

    #[error("intersection entry index ({i},{j}) out of range for {n} components")]
    IntersectionIndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("component index {index} out of range for {n} components")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("divisor has {len} multiplicities, expected {expected}")]
    MultiplicityShape { len: usize, expected: usize },

    #[error("negative multiplicity {value} at component {index}")]
    NegativeMultiplicity { index: usize, value: i64 },

    #[error("divisor is zero; curves are non-zero effective divisors")]
    ZeroDivisor,

    #[error("divisors belong to different configurations")]
    ConfigMismatch,

    #[error("result does not fit exact 64-bit integer arithmetic")]
    Overflow,

    #[error("enumeration needs max_candidates >= {required} but the budget is {max_candidates}")]
    BudgetExceeded { required: u128, max_candidates: u64 },

    #[error("budget must be positive")]
    InvalidBudget,

    #[error("divisor is not reduced: multiplicity {multiplicity} at component {index}")]
    NotReduced { index: usize, multiplicity: i64 },

    #[error("operation requires a configuration flagged snc_faithful")]
    SncRequired,

    #[error("divisor is not {required}-connected (connectedness number {conn})")]
    NotMConnected { required: i64, conn: Conn },

    #[error("no identically-vanishing section exists in the reduced shadow (support is connected)")]
    NoVanishingSection,

    #[error("z must be a proper subdivisor of d (0 < Z < D componentwise)")]
    NotProperSubdivisor,

    #[error("part pairs to {pairing} against the complement; a chain needs pairing >= 1")]
    ChainPairingNotPositive { pairing: i64 },

    #[error("chain invariant violated: {detail}")]
    ChainInvariantViolated { detail: String },

    #[error("multiple fibre needs multiplier >= 2, got {multiplier}")]
    MultiplierTooSmall { multiplier: i64 },

    #[error("cycle configuration needs at least 3 components, got {len}")]
    CycleTooShort { len: usize },

    #[error("chain configuration needs at least 1 component")]
    ChainTooShort,

    #[error("star configuration needs at least 1 leaf")]
    StarTooSmall,

    #[error("invalid sampler spec: {0}")]
    InvalidSamplerSpec(String),

    #[error("sampler filter rejected {rejected} of {attempts} candidates in a window; rejection rate above 99.9%")]
    RejectionRateExceeded { attempts: u64, rejected: u64 },

    #[error("configuration JSON is invalid: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        // serde_json's Display carries line/column positions.
        Error::Json(e.to_string())
    }
}
