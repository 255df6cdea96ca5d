use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix Q[{objective}] is not symmetric at ({row}, {col})")]
    NonSymmetric {
        objective: usize,
        row: usize,
        col: usize,
    },

    #[error("zero denominator in fractional objective")]
    ZeroDenominator,

    #[error("point is infeasible for the instance")]
    InfeasiblePoint,

    #[error("pivot limit of {limit} exceeded")]
    CyclingGuard { limit: usize },

    #[error("enumeration box holds {volume} points, cap is {cap}")]
    EnumerationCap { volume: u128, cap: u64 },

    #[error("region is unbounded along x{0}")]
    UnboundedRegion(usize),

    #[error("region is empty")]
    EmptyRegion,

    #[error("cut requires a nonempty index set")]
    EmptyCut,

    #[error("cannot exchange x{entering} for x{leaving}: {reason}")]
    BadExchange {
        entering: usize,
        leaving: usize,
        reason: &'static str,
    },

    #[error("value {0} is integral; nothing to branch on")]
    IntegralValue(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
