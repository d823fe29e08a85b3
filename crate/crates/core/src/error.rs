use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("word size {0} not supported (expected 8, 16, 32 or 64)")]
    InvalidWordSize(u32),

    #[error("index {index} out of bounds for length {len}")]
    OutOfBounds { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("word size mismatch: structure built for w={structure}, session uses w={session}")]
    WordSizeMismatch { structure: u32, session: u32 },

    #[error("invalid hard-instance parameters: {0}")]
    InvalidSpec(String),

    #[error("exact preprocessing visits 4^n pairs; n={n} exceeds cap {cap}, use heuristic mode")]
    ExactCapExceeded { n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("decode error: {0}")]
    Decode(String),

    #[error("a query made {observed} matrix probes, over the budget of {budget}")]
    BudgetExceeded { observed: usize, budget: usize },

    #[error("emulation diverged: {0}")]
    Consistency(String),

    #[error("probe ({row}, {col}) is not present in the probe log")]
    AbsentProbe { row: usize, col: usize },

    #[error("recovery failed: {0}")]
    Recovery(String),
}
