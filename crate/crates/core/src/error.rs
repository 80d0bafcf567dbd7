use thiserror::Error;

use crate::field::QuadInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("D = {0} is too small, a real quadratic field needs D >= 2")]
    DiscriminantTooSmall(i64),

    #[error("D = {d} is not squarefree: divisible by the square {factor}")]
    NotSquarefree { d: i64, factor: u64 },

    #[error("element {0} is not totally positive")]
    NotTotallyPositive(QuadInt),

    #[error("index {index} is out of range for {what}")]
    IndexOutOfRange { what: &'static str, index: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
