//! Error type shared across the model, planner, calibration, and trace modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter set violates one or more type invariants.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// Input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// No operating point can satisfy the request.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Lookup outside the range covered by a measured table.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// A sweep was asked to cover no core counts at all.
    #[error("empty range: {0}")]
    EmptyRange(String),
    /// Too few samples to attempt a fit.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// Samples carry no information about the constants being fitted.
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    /// The least-squares system has no unique solution.
    #[error("underdetermined fit: {0}")]
    Underdetermined(String),
    /// Every row of every plan is infeasible; nothing to emit.
    #[error("no feasible data: {0}")]
    NoFeasibleData(String),
    /// Malformed CSV content.
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
