//! Command-line front end: curve export, simulation export and validation.

pub mod analyze;
pub mod config;
pub mod error;
pub mod formulas;
pub mod output;
pub mod simulate;
pub mod sweep;
pub mod validate;

pub use config::Config;
pub use error::CliError;
