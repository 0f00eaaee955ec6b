use thiserror::Error;

use crate::kernel::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{name} = {value} exceeds the supported magnitude of 1000000")]
    OutOfRange { name: &'static str, value: i64 },
    #[error("integer overflow in rational arithmetic")]
    Overflow,
    #[error("degenerate curve: alpha + beta = 0 for <{alpha},{beta}>")]
    DegenerateCurve { alpha: i64, beta: i64 },
    #[error("degenerate chord at s = {0}")]
    DegenerateChord(Rational),
    #[error("every chord of <{alpha},{beta}> is degenerate")]
    AllChordsDegenerate { alpha: i64, beta: i64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
