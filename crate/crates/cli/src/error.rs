//! Error categories and the exit codes they map to.
//!
//! Every failure is classified when raised; the exit code is a total
//! function of the category: config = 2, infeasible-only plan = 3,
//! data = 4, internal = 5.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid configuration, including files it references.
    Config(String),
    /// The request was understood but no feasible operating point exists.
    Infeasible(String),
    /// Malformed or unusable input data (sample CSVs, speedup tables).
    Data(String),
    /// Internal inconsistency; should not happen with valid inputs.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Data(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Infeasible(_) => "infeasible",
            CliError::Data(_) => "data",
            CliError::Internal(_) => "internal",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m)
            | CliError::Infeasible(m)
            | CliError::Data(m)
            | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

/// Classifies a core error raised while executing a command. Loading a
/// configuration wraps errors as [`CliError::Config`] itself and does not
/// go through here.
pub fn from_core(e: voltplan::Error) -> CliError {
    use voltplan::Error::*;
    match e {
        NoFeasibleData(m) | Infeasible(m) => CliError::Infeasible(m),
        Parse(m) | InsufficientData(m) | DegenerateData(m) | Underdetermined(m)
        | OutOfRange(m) => CliError::Data(m),
        Io(e) => CliError::Data(e.to_string()),
        InvalidParams(m) | Domain(m) | EmptyRange(m) => CliError::Config(m),
    }
}
