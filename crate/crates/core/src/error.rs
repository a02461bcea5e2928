use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// The spectral parameter is below the heaviest soliton mass of the state;
    /// the basic solutions of the linear system do not exist.
    #[error("omega = {omega} is below the maximal soliton mass {omega_max}")]
    MassTooSmall { omega: Rational, omega_max: Rational },

    #[error("eigenfunctions need omega > 0 (got {0})")]
    DegenerateOmega(Rational),

    #[error("state contains no soliton (maximal soliton mass is 0)")]
    NoSoliton,

    #[error("block {index} does not exist (state has {count} maximal blocks)")]
    BlockOutOfRange { index: usize, count: usize },

    #[error("index {0} is not inside a maximal block")]
    SplitOutsideBlock(i64),

    #[error("state is not a speed-1 background (maximal local sum {0} > 1)")]
    NotBackground(Rational),

    #[error("expected a {expected} eigenfunction")]
    KindMismatch { expected: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A relation that holds by theorem failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}

impl Error {
    pub(crate) fn breach(msg: impl Into<String>) -> Self {
        Error::InvariantBreach(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
