//! Command-line surface for the voltplan energy model: configuration
//! ingestion, command dispatch, and artifact emission (CSV plans, text
//! reports, SVG charts).

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;

pub use config::{default_config, load_config, parse_config, RunConfig};
pub use error::{CliError, CliResult};
