//! Command-line layer for the wavespin library: configuration, the
//! invariant suite and the CSV/JSON/SVG emitters.

pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
