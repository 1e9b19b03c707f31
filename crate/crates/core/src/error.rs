use thiserror::Error;

use crate::series::Exp;

/// Everything that can go wrong while building or comparing truncated series.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window is empty after truncation")]
    EmptyWindow,

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("pole at zero: {0}")]
    PoleAtZero(String),

    #[error("exponent triple {0} lies outside the series window")]
    OutOfWindow(Exp),

    #[error("sum cannot be truncated formally: {0}")]
    NonTruncatable(String),

    #[error("unknown identity or expansion target `{0}`")]
    UnknownIdentity(String),

    #[error("requested point hits a pole: {0}")]
    PoleAtRequestedPoint(String),

    #[error("window reaches q^{achieved}, below the requested order {requested}")]
    InsufficientWindow { requested: i64, achieved: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse `{0}` as a rational number")]
    ParseRat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
