use thiserror::Error;

/// Errors raised by the group and stratification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank {rank} is out of range (supported: 1..={max})")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("invalid signed permutation window {0:?}")]
    InvalidWindow(Vec<i32>),

    #[error("generator index {index} is out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("resource cap exceeded: {what} (rank {rank}, cap {cap})")]
    ResourceCap { what: &'static str, rank: usize, cap: usize },

    #[error("element {0} is not in the admissible set")]
    NotAdmissible(String),

    #[error("element {0} is not a final element")]
    NotFinal(String),

    #[error("invalid elementary sequence {0:?}")]
    InvalidSequence(Vec<u32>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no length-zero element in t^mu W for rank {0}; length convention is broken")]
    TauSearchFailed(usize),

    #[error("falsification: {0}")]
    Falsified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
