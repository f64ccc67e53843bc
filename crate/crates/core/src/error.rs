use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("transition matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NonSquareMatrix { rows: usize, row: usize, len: usize },
    #[error("transition matrix entry ({row},{col}) is {value}, expected 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: i64 },
    #[error("symbol {symbol} has no {direction} transition")]
    DeadSymbol { symbol: usize, direction: &'static str },
    #[error("invalid metric parameters: lambda = {lambda}, alpha = {alpha}")]
    InvalidMetric { lambda: f64, alpha: f64 },
    #[error("a symbolic point needs a nonempty cycle")]
    EmptyCycle,
    #[error("point {0} is not admissible")]
    InadmissiblePoint(String),
    #[error("word {0} is not admissible")]
    InadmissibleWord(String),
    #[error("cycle {0} is not admissible or does not close admissibly")]
    InadmissibleCycle(String),
    #[error("depth {depth} needs up to {needed} words, over the budget of {budget}")]
    DepthOverflow { depth: usize, needed: f64, budget: usize },
    #[error("potential has no value for word {0}")]
    MissingValue(String),
    #[error("operands live on different subshifts")]
    SubshiftMismatch,
    #[error("sampler failed on cylinder {word}: {message}")]
    SamplerFailure { word: String, message: String },
    #[error("word graph has no cycle")]
    NoCycle,
    #[error("enumeration needs {needed} items, over the budget of {budget}")]
    BudgetExceeded { needed: f64, budget: usize },
    #[error("{0} did not converge")]
    NonConvergence(&'static str),
    #[error("deficiency {value} on edge {edge} exceeds tolerance {tolerance}")]
    CalibrationViolation { edge: String, value: f64, tolerance: f64 },
    #[error("vertex {0} is not reachable from the critical set")]
    UnreachableVertex(String),
    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("pseudo-orbit jump {delta} is not below epsilon_1 = {limit}")]
    DeltaTooLarge { delta: f64, limit: f64 },
    #[error("no admissible inverse branch at index {0}")]
    BranchMissing(usize),
    #[error("pseudo-orbit step {index} has jump {jump} above delta {delta}")]
    JumpTooLarge { index: usize, jump: f64, delta: f64 },
    #[error("shadowing bound violated: {0}")]
    BoundViolated(String),
    #[error("subshift is not topologically mixing")]
    NotMixing,
    #[error("potential has pressure {0}, expected 0")]
    PressureNotZero(f64),
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("invalid circle map: {0}")]
    InvalidMap(String),
    #[error("orbit separation {separation} is not above 2 * delta = {needed}")]
    SeparationTooSmall { separation: f64, needed: f64 },
    #[error("working depth {depth} exceeds the depth budget {budget}")]
    DepthBudget { depth: usize, budget: usize },
    #[error("orbit locking failed: {0}")]
    LockFailed(String),
    #[error("target measure {0} is not an extreme point of the moment set")]
    NotExtreme(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed or out-of-range input, as
    /// opposed to failures of a computation on valid input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NonSquareMatrix { .. }
                | Error::InvalidEntry { .. }
                | Error::DeadSymbol { .. }
                | Error::InvalidMetric { .. }
                | Error::EmptyCycle
                | Error::InadmissiblePoint(_)
                | Error::InadmissibleWord(_)
                | Error::InadmissibleCycle(_)
                | Error::MissingValue(_)
                | Error::SubshiftMismatch
                | Error::InvalidArgument(_)
                | Error::InvalidMap(_)
                | Error::DeltaTooLarge { .. }
                | Error::JumpTooLarge { .. }
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
