use thiserror::Error;

use crate::farey::FareyFraction;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} and {1} are not Farey neighbors")]
    NotNeighbors(FareyFraction, FareyFraction),

    #[error("{num}/{den} is not a reduced fraction in [0, 1] or 1/0")]
    InvalidFraction { num: i64, den: i64 },

    #[error("side index {index} out of range for a sequence with {sides} sides")]
    SideOutOfRange { index: usize, sides: usize },

    #[error("inconsistent denominator list: {0}")]
    InconsistentDenominators(String),

    #[error("invalid level {level}: {reason}")]
    InvalidLevel { level: i64, reason: &'static str },

    #[error("level {0} is not a prime power")]
    NotPrimePower(i64),

    #[error("sides {0:?} and {1:?} are not paired")]
    NotPaired((i64, i64), (i64, i64)),

    #[error("side {0:?} is not {1}")]
    WrongSideKind((i64, i64), &'static str),

    #[error("sequence still has {0} free side(s)")]
    FreeSidesRemain(usize),

    #[error("integer overflow")]
    Overflow,

    #[error("structural error: {0}")]
    Structural(String),

    #[error("internal error: {0}")]
    Internal(String),
}
