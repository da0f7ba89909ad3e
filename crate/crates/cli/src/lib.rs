//! Command-line interface and HTTP service for the world generator.

pub mod api;
pub mod cmd;

pub use api::{router, AppState};
pub use cmd::{run, Cli, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
