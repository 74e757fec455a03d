use thiserror::Error;

/// Errors produced by map construction, orbit generation and the
/// return-time / estimation pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("invalid parameter for map `{map}`: {reason}")]
    InvalidParameter { map: String, reason: String },
    #[error("map `{0}` has no registered invariant-measure sampler")]
    NoSampler(String),
    #[error("map `{0}` is only available as an exact symbolic model")]
    SymbolicOnly(String),
    #[error("orbit point {0:e} fell below the smallest materialized branch of the Gauss map")]
    GaussUnderflow(f64),
    #[error("derivative vanishes or is undefined at orbit point {0} (critical-point hit)")]
    CriticalPoint(f64),
    #[error("iteration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("interval-union piece cap {cap} exceeded at step {step}")]
    PieceCapExceeded { cap: usize, step: u64 },
    #[error("scan limit of {limit} exceeded")]
    ScanLimitExceeded { limit: u64 },
    #[error("no admissible return within {searched} shifts; transition matrix appears non-mixing")]
    NoAdmissibleReturn { searched: u64 },
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("transition matrix has an all-zero row or column (symbol {0})")]
    DanglingSymbol(usize),
    #[error("degenerate regression input: {0}")]
    DegenerateFit(String),
    #[error("need at least {need} usable rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    #[error("fitted slope {0} is not positive")]
    NonpositiveSlope(f64),
    #[error("map is tagged zero-entropy; the return-time theorems do not apply")]
    ZeroEntropyMap,
    #[error("all requested scales are under-resolved by the orbit")]
    UnderResolved,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("csv parse error at line {line}: {reason}")]
    CsvParse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
